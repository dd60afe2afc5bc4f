#pragma once

#include "torus/errors.hpp"
#include "torus/maps.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace torus {

/// exp(-1/(s(1-s))) on (0,1), zero elsewhere.
template <typename Scalar>
Scalar bump_weight(Scalar s) {
  using std::exp;
  if (!(s > Scalar(0) && s < Scalar(1))) return Scalar(0);
  return exp(Scalar(-1) / (s * (Scalar(1) - s)));
}

/// The weights bump_weight(t/T), t = 0..T-1, and their sum. Building this once
/// per T and sharing it across orbits avoids re-evaluating T exponentials per
/// average.
template <typename Scalar>
class BumpWeights {
 public:
  explicit BumpWeights(std::size_t length) : weights_(length) {
    if (length == 0) throw std::invalid_argument("weighted average: length must be >= 1");
    const Scalar denom = static_cast<Scalar>(length);
    for (std::size_t t = 0; t < length; ++t) {
      weights_[t] = bump_weight(static_cast<Scalar>(t) / denom);
      total_ += weights_[t];
    }
  }

  std::size_t size() const { return weights_.size(); }
  Scalar operator[](std::size_t t) const { return weights_[t]; }
  Scalar total() const { return total_; }

 private:
  std::vector<Scalar> weights_;
  Scalar total_{0};
};

/// Weighted Birkhoff average (1/S) sum_t w_t h_t of exactly T values.
/// Plain running sum, no compensation.
template <typename Scalar, int Dim>
Eigen::Matrix<Scalar, Dim, 1> weighted_average(const std::vector<Eigen::Matrix<Scalar, Dim, 1>>& values,
                                                const BumpWeights<Scalar>& weights) {
  if (values.empty()) throw std::invalid_argument("weighted average: empty stream");
  if (values.size() != weights.size())
    throw std::invalid_argument("weighted average: stream length differs from T");
  Eigen::Matrix<Scalar, Dim, 1> sum = Eigen::Matrix<Scalar, Dim, 1>::Zero(values.front().size());
  for (std::size_t t = 0; t < values.size(); ++t) sum += weights[t] * values[t];
  return sum / weights.total();
}

template <typename Scalar, int Dim>
Eigen::Matrix<Scalar, Dim, 1> weighted_average(const std::vector<Eigen::Matrix<Scalar, Dim, 1>>& values) {
  if (values.empty()) throw std::invalid_argument("weighted average: empty stream");
  return weighted_average(values, BumpWeights<Scalar>(values.size()));
}

// ---------------------------------------------------------------------------
// Rotation vectors and the precision diagnostic

/// Digits reported when two windows agree to within this.
inline constexpr double max_digits = 16.0;

template <typename Scalar, int Dim>
struct RotationResult {
  Eigen::Matrix<Scalar, Dim, 1> omega;  ///< reduced mod 1
  Scalar digits{0};                      ///< dig_T, in [0, 16]
};

/// dig_T < cutoff means chaotic.
struct ChaosThreshold {
  std::size_t length = 100000;
  double cutoff = 9.0;

  static ChaosThreshold circle() { return {100000, 9.0}; }
  static ChaosThreshold torus() { return {1000000, 9.0}; }
};

template <typename Scalar>
Scalar digits_from_difference(Scalar diff) {
  using std::log10;
  if (!(diff == diff)) throw NumericFailure("dig_T: difference is NaN");
  if (diff <= Scalar(1e-16)) return Scalar(max_digits);
  return std::clamp(-log10(diff), Scalar(0), Scalar(max_digits));
}

/// Rotation vector from the first T displacements after the transient and its
/// precision from comparison with the next T. Runs transient + 2T iterates.
template <typename Map>
RotationResult<typename Map::Scalar, Map::dim> rotation_and_digits(
    const Map& map, const OrbitSpec<typename Map::Scalar, Map::dim>& spec,
    const BumpWeights<typename Map::Scalar>& weights) {
  using Scalar = typename Map::Scalar;
  using Vector = typename Map::Vector;
  spec.validate();
  if (weights.size() != spec.length)
    throw std::invalid_argument("rotation_and_digits: weights built for a different T");

  Vector x = advance(map, spec.x0, spec.transient);
  Vector window[2];
  for (auto& avg : window) {
    Vector sum = Vector::Zero();
    for_each_displacement(map, x, spec.length, [&](std::size_t t, const Vector& d) { sum += weights[t] * d; });
    avg = sum / weights.total();
  }
  if (!window[0].allFinite() || !window[1].allFinite())
    throw NumericFailure("rotation_and_digits: non-finite orbit average");

  RotationResult<Scalar, Map::dim> out;
  out.omega = wrap_unit(window[0]);
  out.digits = digits_from_difference<Scalar>((window[0] - window[1]).cwiseAbs().maxCoeff());
  return out;
}

template <typename Map>
RotationResult<typename Map::Scalar, Map::dim> rotation_and_digits(
    const Map& map, const OrbitSpec<typename Map::Scalar, Map::dim>& spec) {
  return rotation_and_digits(map, spec, BumpWeights<typename Map::Scalar>(spec.length));
}

template <typename Scalar, int Dim>
bool classify_chaos(const RotationResult<Scalar, Dim>& r, const ChaosThreshold& thr) {
  return r.digits < thr.cutoff;
}

// ---------------------------------------------------------------------------
// Lyapunov spectrum

struct LyapunovPair {
  double largest = 0.0;
  double smallest = 0.0;
};

/// Exponents (nats per iterate) of a two-torus map from the tangent dynamics,
/// re-orthonormalised by QR after every step and averaged over spec.length
/// iterates after the transient.
template <typename Scalar>
LyapunovPair lyapunov_spectrum(const Torus2Map<Scalar>& map, const OrbitSpec<Scalar, 2>& spec) {
  using Vector = typename Torus2Map<Scalar>::Vector;
  using Matrix = typename Torus2Map<Scalar>::Matrix;
  using std::abs;
  using std::log;
  spec.validate();

  Vector x = advance(map, spec.x0, spec.transient);
  Matrix frame = Matrix::Identity();
  Scalar sums[2] = {Scalar(0), Scalar(0)};
  for (std::size_t t = 0; t < spec.length; ++t) {
    Eigen::HouseholderQR<Matrix> qr(map.jacobian(x) * frame);
    const Matrix& packed = qr.matrixQR();
    for (int i = 0; i < 2; ++i) sums[i] += log(abs(packed(i, i)));
    frame = qr.householderQ();
    x = wrap_unit(x + map.displacement(x));
  }
  const Scalar n = static_cast<Scalar>(spec.length);
  double l1 = static_cast<double>(sums[0] / n);
  double l2 = static_cast<double>(sums[1] / n);
  if (!std::isfinite(l1) || !std::isfinite(l2)) throw NumericFailure("lyapunov_spectrum: non-finite exponent");
  if (l1 < l2) std::swap(l1, l2);
  return {l1, l2};
}

}  // namespace torus
