#include <doctest.h>

#include "torus/critical.hpp"
#include "torus/errors.hpp"
#include "torus/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

using namespace torus;

namespace {

// min det(Df) on a dense uniform grid, straight from the Jacobian.
double dense_min_det(const Torus2Params<double>& base, double eps, int n) {
  const Torus2Map<double> map(base.with(eps, Eigen::Vector2d::Zero()));
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      best = std::min(best, map.jacobian(Eigen::Vector2d(double(i) / n, double(j) / n)).determinant());
  return best;
}

// Root of the dense-grid minimum by bisection on [0, 8].
double dense_eps_crit(const Torus2Params<double>& base, int n) {
  double lo = 0.0, hi = 8.0;
  while (hi - lo > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    (dense_min_det(base, mid, n) <= 0.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("closed forms for the decoupled, skew and triangular cases") {
  const auto c4 = parameter_catalog(4);  // diagonal: 1/max(a1, a4)
  CHECK(eps_crit(c4).eps_crit == doctest::Approx(1.0 / std::max(c4.amps(0), c4.amps(3))).epsilon(1e-6));
  const auto c5 = parameter_catalog(5);  // antidiagonal: 1/sqrt(a2 a3)
  CHECK(eps_crit(c5).eps_crit == doctest::Approx(1.0 / std::sqrt(c5.amps(1) * c5.amps(2))).epsilon(1e-6));
  const auto c7 = parameter_catalog(7);  // triangular: 1/a4
  CHECK(eps_crit(c7).eps_crit == doctest::Approx(1.0 / c7.amps(3)).epsilon(1e-6));
}

TEST_CASE("eps_crit brackets the sign change of min det(Df)") {
  for (int id = 0; id < catalog_size; ++id) {
    const auto p = parameter_catalog(id);
    const auto r = eps_crit(p);
    CHECK(min_det_df(p, r.eps_crit - 1e-3).value > 0.0);
    CHECK(min_det_df(p, r.eps_crit + 1e-3).value < 0.0);
    CHECK(min_det_df(p, 2.0 * r.eps_crit).value < 0.0);
    CHECK(r.residual < 1e-5);
    CHECK(std::abs(Torus2Map<double>(p.with(r.eps_crit, Eigen::Vector2d::Zero())).jacobian_determinant(r.argmin_x)) <
          1e-5);
  }
}

TEST_CASE("eps_crit agrees with a dense-grid root of min det(Df)") {
  for (int id = 0; id < catalog_size; ++id) {
    const auto p = parameter_catalog(id);
    CHECK(eps_crit(p).eps_crit == doctest::Approx(dense_eps_crit(p, 600)).epsilon(1e-3));
  }
}

TEST_CASE("refined minimum never exceeds the grid minimum") {
  UniformSampler rng(12);
  for (int id = 0; id < catalog_size; ++id) {
    const auto p = parameter_catalog(id);
    const DeterminantField field(p);
    for (int k = 0; k < 5; ++k) {
      const double eps = 4.0 * rng.open_unit();
      const DetMinimum m = field.minimum(eps);
      CHECK(m.value <= dense_min_det(p, eps, 256) + 1e-15);
      CHECK(m.value == doctest::Approx(field.determinant(m.x, eps)));
      CHECK(m.value == doctest::Approx(dense_min_det(p, eps, 400)).epsilon(1e-3));
    }
  }
}

TEST_CASE("eps_crit is invariant under phase shifts of either coordinate") {
  UniformSampler rng(13);
  for (int id : {0, 1, 2, 3, 6}) {
    const auto p = parameter_catalog(id);
    const double base = eps_crit(p).eps_crit;
    auto q = p;
    const double c = rng.open_unit();
    const double d = rng.open_unit();
    q.phases(0) += c;
    q.phases(2) += c;
    q.phases(1) += d;
    q.phases(3) += d;
    q.reduce_phases();
    CHECK(eps_crit(q).eps_crit == doctest::Approx(base).epsilon(1e-6));
  }
}

TEST_CASE("degenerate amplitude family has no critical value") {
  Torus2Params<double> p;
  p.amps = Eigen::Vector4d(0.0, 1.0, 0.0, 0.0);
  CHECK(has_no_critical_value(p));
  CHECK_THROWS_AS(eps_crit(p), NoCriticalValue);
  p.amps = Eigen::Vector4d(0.0, 0.0, 1.0, 0.0);
  CHECK_THROWS_AS(eps_crit(p), NoCriticalValue);
  CHECK(min_det_df(p, 50.0).value == doctest::Approx(1.0));
  CHECK_FALSE(has_no_critical_value(parameter_catalog(5)));
}

TEST_CASE("invalid options") {
  CriticalOptions opt;
  opt.grid = 2;
  CHECK_THROWS_AS(DeterminantField(parameter_catalog(0), opt), std::invalid_argument);
  opt = {};
  opt.eps_limit = 1.5;
  CHECK_THROWS_AS(eps_crit(parameter_catalog(0), opt), CapacityError);
}
