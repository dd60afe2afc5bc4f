#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <concepts>
#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace torus {

template <typename Scalar>
inline constexpr Scalar two_pi = Scalar(6.28318530717958647692528676655900577L);

/// Initial point used for every orbit unless overridden.
inline constexpr double default_initial_point = 0.117789164297101;

/// Iterates discarded before averaging.
inline constexpr std::size_t default_transient = 500;

/// Fractional part in [0,1).
template <std::floating_point Scalar>
Scalar wrap_unit(Scalar x) {
  using std::floor;
  Scalar r = x - floor(x);
  return r < Scalar(1) ? r : Scalar(0);
}

template <typename Derived>
typename Derived::PlainObject wrap_unit(const Eigen::MatrixBase<Derived>& x) {
  return x.unaryExpr([](typename Derived::Scalar v) { return wrap_unit(v); });
}

// ---------------------------------------------------------------------------
// Parameters

/// Arnold circle map x -> x + omega + a/(2 pi) sin(2 pi x).
template <typename Scalar>
struct CircleParams {
  Scalar omega{0};
  Scalar a{0};

  void validate() const {
    if (!(omega >= Scalar(0) && omega < Scalar(1)))
      throw std::invalid_argument("circle map: omega must lie in [0,1)");
    if (!(a >= Scalar(0))) throw std::invalid_argument("circle map: a must be >= 0");
  }
};

/// Two-torus map with single-harmonic forcing
///   g_1 = eps/(2 pi) [a1 cos 2pi(x1+phi1) + a2 cos 2pi(x2+phi2)]
///   g_2 = eps/(2 pi) [a3 cos 2pi(x1+phi3) + a4 cos 2pi(x2+phi4)]
/// with ||a||_1 = 1.
template <typename Scalar>
struct Torus2Params {
  using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
  using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

  Vector2 omega = Vector2::Zero();
  Scalar eps{0};
  Vector4 amps = Vector4(Scalar(1), Scalar(0), Scalar(0), Scalar(0));
  Vector4 phases = Vector4::Zero();

  void reduce_phases() { phases = wrap_unit(phases); }

  /// Rescales the amplitudes to unit l1 norm.
  void normalize_amplitudes() {
    Scalar norm = amps.template lpNorm<1>();
    if (!(norm > Scalar(0))) throw std::invalid_argument("torus map: amplitudes are all zero");
    amps /= norm;
  }

  void validate() const {
    using std::abs;
    for (int i = 0; i < 2; ++i)
      if (!(omega(i) >= Scalar(0) && omega(i) < Scalar(1)))
        throw std::invalid_argument("torus map: omega components must lie in [0,1)");
    if (!(eps >= Scalar(0))) throw std::invalid_argument("torus map: eps must be >= 0");
    if (!(abs(amps.template lpNorm<1>() - Scalar(1)) <= Scalar(1e-12)))
      throw std::invalid_argument("torus map: amplitudes must satisfy ||a||_1 = 1");
    for (int i = 0; i < 4; ++i)
      if (!(phases(i) >= Scalar(0) && phases(i) < Scalar(1)))
        throw std::invalid_argument("torus map: phases must lie in [0,1)");
  }

  Torus2Params with(Scalar new_eps, const Vector2& new_omega) const {
    Torus2Params p = *this;
    p.eps = new_eps;
    p.omega = new_omega;
    return p;
  }
};

/// Initial point, transient length and averaging window of one orbit.
template <typename Scalar, int Dim>
struct OrbitSpec {
  using Vector = Eigen::Matrix<Scalar, Dim, 1>;

  Vector x0 = Vector::Constant(Scalar(default_initial_point));
  std::size_t transient = default_transient;
  std::size_t length = 100000;

  void validate() const {
    if (length < 1) throw std::invalid_argument("orbit spec: averaging length must be >= 1");
    if (!x0.allFinite()) throw std::invalid_argument("orbit spec: initial point must be finite");
  }
};

// ---------------------------------------------------------------------------
// Maps

template <typename Scalar_>
class CircleMap {
 public:
  using Scalar = Scalar_;
  static constexpr int dim = 1;
  using Vector = Eigen::Matrix<Scalar, 1, 1>;
  using Params = CircleParams<Scalar>;

  explicit CircleMap(const Params& params)
      : params_(params), amplitude_(params.a / two_pi<Scalar>) {}

  const Params& params() const { return params_; }

  Scalar forcing(Scalar x) const {
    using std::sin;
    return amplitude_ * sin(two_pi<Scalar> * wrap_unit(x));
  }

  /// F(x) - x = omega + g(x). Periodic in x.
  Vector displacement(const Vector& x) const { return Vector(params_.omega + forcing(x(0))); }

  /// F(x) on the universal cover.
  Vector lift_step(const Vector& x) const { return x + displacement(x); }

  Scalar derivative(Scalar x) const {
    using std::cos;
    return Scalar(1) + params_.a * cos(two_pi<Scalar> * wrap_unit(x));
  }

 private:
  Params params_;
  Scalar amplitude_;
};

template <typename Scalar_>
class Torus2Map {
 public:
  using Scalar = Scalar_;
  static constexpr int dim = 2;
  using Vector = Eigen::Matrix<Scalar, 2, 1>;
  using Matrix = Eigen::Matrix<Scalar, 2, 2>;
  using Params = Torus2Params<Scalar>;

  explicit Torus2Map(const Params& params) : params_(params) {
    using std::cos;
    using std::sin;
    for (int i = 0; i < 4; ++i) {
      Scalar angle = two_pi<Scalar> * wrap_unit(params.phases(i));
      cos_phase_[i] = cos(angle);
      sin_phase_[i] = sin(angle);
      scaled_amp_[i] = params.eps * params.amps(i) / two_pi<Scalar>;
    }
  }

  const Params& params() const { return params_; }

  /// g(x); arguments are reduced mod 1 before scaling by 2 pi.
  Vector forcing(const Vector& x) const {
    Trig t = trig(x);
    return Vector(scaled_amp_[0] * t.cos_shift[0] + scaled_amp_[1] * t.cos_shift[1],
                  scaled_amp_[2] * t.cos_shift[2] + scaled_amp_[3] * t.cos_shift[3]);
  }

  Vector displacement(const Vector& x) const { return params_.omega + forcing(x); }

  Vector lift_step(const Vector& x) const { return x + displacement(x); }

  /// H(x) with Df = I + eps H.
  Matrix coupling_matrix(const Vector& x) const {
    Trig t = trig(x);
    const auto& a = params_.amps;
    Matrix h;
    h << -a(0) * t.sin_shift[0], -a(1) * t.sin_shift[1],
         -a(2) * t.sin_shift[2], -a(3) * t.sin_shift[3];
    return h;
  }

  Matrix jacobian(const Vector& x) const {
    return Matrix::Identity() + params_.eps * coupling_matrix(x);
  }

  /// eps^2 det H + eps tr H + 1.
  Scalar jacobian_determinant(const Vector& x) const {
    Matrix h = coupling_matrix(x);
    const Scalar e = params_.eps;
    return e * e * h.determinant() + e * h.trace() + Scalar(1);
  }

 private:
  // cos/sin of 2 pi (x_j + phi_i) for the four (i, j) pairings (1,1) (2,2) (3,1) (4,2).
  struct Trig {
    Scalar cos_shift[4];
    Scalar sin_shift[4];
  };

  Trig trig(const Vector& x) const {
    using std::cos;
    using std::sin;
    const Scalar t1 = two_pi<Scalar> * wrap_unit(x(0));
    const Scalar t2 = two_pi<Scalar> * wrap_unit(x(1));
    const Scalar c[2] = {cos(t1), cos(t2)};
    const Scalar s[2] = {sin(t1), sin(t2)};
    Trig out;
    for (int i = 0; i < 4; ++i) {
      const int j = i % 2;
      out.cos_shift[i] = c[j] * cos_phase_[i] - s[j] * sin_phase_[i];
      out.sin_shift[i] = s[j] * cos_phase_[i] + c[j] * sin_phase_[i];
    }
    return out;
  }

  Params params_;
  Scalar cos_phase_[4];
  Scalar sin_phase_[4];
  Scalar scaled_amp_[4];
};

// ---------------------------------------------------------------------------
// Orbit iteration

/// Iterates n steps on the torus starting from x (reduced mod 1 first);
/// returns the reduced end point.
template <typename Map>
typename Map::Vector advance(const Map& map, typename Map::Vector x, std::size_t n) {
  x = wrap_unit(x);
  for (std::size_t t = 0; t < n; ++t) x = wrap_unit(x + map.displacement(x));
  return x;
}

/// Feeds `count` displacements F(x_t) - x_t to sink(t, d), advancing x in
/// place. Displacements are recorded before the mod-1 reduction.
template <typename Map, typename Sink>
void for_each_displacement(const Map& map, typename Map::Vector& x, std::size_t count, Sink&& sink) {
  for (std::size_t t = 0; t < count; ++t) {
    typename Map::Vector d = map.displacement(x);
    sink(t, d);
    x = wrap_unit(x + d);
  }
}

/// Discards spec.transient iterates, then yields exactly spec.length
/// displacements. Returns the post-transient starting point.
template <typename Map, typename Sink>
typename Map::Vector iterate_displacements(
    const Map& map, const OrbitSpec<typename Map::Scalar, Map::dim>& spec, Sink&& sink) {
  spec.validate();
  typename Map::Vector start = advance(map, spec.x0, spec.transient);
  typename Map::Vector x = start;
  for_each_displacement(map, x, spec.length, sink);
  return start;
}

// ---------------------------------------------------------------------------
// Catalogue and plain-text parameter files

/// Number of catalogued amplitude/phase sets.
inline constexpr int catalog_size = 8;

/// Amplitudes and phases of catalogue case 0..7 (omega = 0, eps = 0).
Torus2Params<double> parameter_catalog(int case_id);

/// key = value lines: omega1, omega2, eps, a1..a4, phi1..phi4.
std::string to_config(const Torus2Params<double>& params);
std::string to_config(const CircleParams<double>& params);

/// Parses the output of to_config. Unknown keys are rejected; missing keys keep
/// their defaults. Phases are reduced mod 1 and the result validated.
Torus2Params<double> torus_params_from_config(const std::string& text);
CircleParams<double> circle_params_from_config(const std::string& text);

/// printf("%.17g").
std::string format_real(double v);

}  // namespace torus
