#include <doctest.h>

#include "torus/random.hpp"
#include "torus/resonance.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>

using namespace torus;

namespace {

// Smallest ||m||_1 <= cap with |m . omega - n| < delta ||m||_2 for some n, over
// all sign patterns and a window of n around m . omega.
std::optional<std::int64_t> brute_force_order(const Eigen::Vector2d& w, double delta, int cap) {
  for (int k = 1; k <= cap; ++k) {
    for (int m1 = -k; m1 <= k; ++m1) {
      const int rest = k - std::abs(m1);
      for (int m2 : {rest, -rest}) {
        const double v = m1 * w(0) + m2 * w(1);
        for (long n = static_cast<long>(std::floor(v)) - 2; n <= static_cast<long>(std::floor(v)) + 3; ++n)
          if (std::fabs(v - static_cast<double>(n)) < delta * std::hypot(double(m1), double(m2))) return k;
      }
    }
  }
  return std::nullopt;
}

RotationResult<double, 2> regular(double w1, double w2) {
  RotationResult<double, 2> r;
  r.omega = Eigen::Vector2d(w1, w2);
  r.digits = 16.0;
  return r;
}

}  // namespace

TEST_CASE("resonance distance") {
  CHECK(resonance_distance({0.5, 0.25}, {1, 1}, 1) == doctest::Approx(0.25 / std::sqrt(2.0)));
  CHECK(resonance_distance({0.3, 0.7}, {1, 1}, 1) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(resonance_distance({0.1, 0.2}, {3, -4}, 0) == doctest::Approx(0.5 / 5.0));
  CHECK_THROWS_AS(resonance_distance({0.1, 0.2}, {0, 0}, 0), std::invalid_argument);
}

TEST_CASE("an order-5 resonance is found with its integer vector") {
  const double w1 = 0.123456789;
  const double w2 = (1.0 - 2.0 * w1) / 3.0;
  const auto hit = resonance_order({w1, w2}, 1e-9, 3000);
  REQUIRE(hit);
  CHECK(hit->order == 5);
  CHECK(hit->m[0] == 2);
  CHECK(hit->m[1] == 3);
  CHECK(hit->n == 1);
  CHECK(hit->distance < 1e-9);
}

TEST_CASE("low-order examples") {
  CHECK(resonance_order({0.0, 0.3719}, 1e-9, 10)->order == 1);
  CHECK(resonance_order({0.25, 0.3719}, 1e-9, 10)->order == 4);
  const auto diag = resonance_order({0.839470290894, 0.839470290894}, 1e-9, 3000);
  REQUIRE(diag);
  CHECK(diag->order == 2);
  CHECK(diag->m[0] == 1);
  CHECK(diag->m[1] == -1);
  CHECK(diag->n == 0);
}

TEST_CASE("search agrees with a brute-force double loop") {
  UniformSampler rng(31);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d w(rng.half_open_unit(), rng.half_open_unit());
    const auto fast = resonance_order(w, 1e-3, 50);
    const auto slow = brute_force_order(w, 1e-3, 50);
    if (fast.has_value() != slow.has_value() || (fast && fast->order != *slow)) ++mismatches;
    if (fast) {
      CHECK(std::abs(fast->m[0]) + std::abs(fast->m[1]) == fast->order);
      CHECK(resonance_distance(w, fast->m, fast->n) < 1e-3);
    }
  }
  CHECK(mismatches == 0);
}

TEST_CASE("nearest integer n is sufficient") {
  UniformSampler rng(32);
  for (int i = 0; i < 500; ++i) {
    const Eigen::Vector2d w(rng.half_open_unit(), rng.half_open_unit());
    const auto hit = resonance_order(w, 1e-4, 400);
    if (!hit) continue;
    for (std::int64_t dn = -3; dn <= 3; ++dn)
      CHECK(resonance_distance(w, hit->m, hit->n) <= resonance_distance(w, hit->m, hit->n + dn));
  }
}

TEST_CASE("order is monotone in delta") {
  UniformSampler rng(33);
  for (int i = 0; i < 300; ++i) {
    const Eigen::Vector2d w(rng.half_open_unit(), rng.half_open_unit());
    const auto coarse = resonance_order(w, 1e-4, 3000);
    const auto fine = resonance_order(w, 1e-7, 3000);
    REQUIRE(coarse);
    if (fine) CHECK(coarse->order <= fine->order);
  }
}

TEST_CASE("regression: (sqrt 2 - 1, sqrt 5 - 2) at delta = 1e-9") {
  const auto hit = resonance_order({std::sqrt(2.0) - 1.0, std::sqrt(5.0) - 2.0}, 1e-9, 3000);
  REQUIRE(hit);
  CHECK(hit->order == 1495);
  CHECK(hit->m[0] == 432);
  CHECK(hit->m[1] == -1063);
  CHECK(hit->n == -72);
}

TEST_CASE("nonresonant band") {
  const ResonanceBand band = ResonanceConfig{}.band;
  CHECK(band.lower == 256);
  CHECK(band.upper == 2673);
  CHECK(band.contains(256));
  CHECK(band.contains(2673));
  CHECK_FALSE(band.contains(255));
  CHECK_FALSE(band.contains(2674));
  CHECK(mean_log10_resonance_order(1e-9) == doctest::Approx(2.915));

  const ResonanceBand sigma = ResonanceBand::from_sigma(1e-9);
  CHECK(std::abs(double(sigma.lower) - 256.0) / 256.0 < 0.02);
  CHECK(std::abs(double(sigma.upper) - 2673.0) / 2673.0 < 0.02);
  CHECK(ResonanceBand::from_log10(2.0, 3.0).lower == 100);
  CHECK(ResonanceBand::from_log10(2.0, 3.0).upper == 1000);
}

TEST_CASE("classification of rotation vectors") {
  const ChaosThreshold thr = ChaosThreshold::torus();
  const IrrationalityConfig farey;
  const ResonanceConfig res;

  CHECK(classify_rotation_vector(regular(1.0 / 3.0, 2.0 / 5.0), thr, farey, res).type == OrbitType::Periodic);
  CHECK(classify_rotation_vector(regular(0.0, 0.5), thr, farey, res).type == OrbitType::Periodic);

  const auto resonant = classify_rotation_vector(regular(0.839470290894, 0.839470290894), thr, farey, res);
  CHECK(resonant.type == OrbitType::Resonant);
  CHECK(resonant.resonance->order == 2);

  const auto generic = classify_rotation_vector(regular(std::sqrt(2.0) - 1.0, std::sqrt(5.0) - 2.0), thr, farey, res);
  CHECK(generic.type == OrbitType::Nonresonant);

  auto chaotic = regular(0.3, 0.4);
  chaotic.digits = 5.0;
  const auto c = classify_rotation_vector(chaotic, thr, farey, res);
  CHECK(c.type == OrbitType::Chaotic);
  CHECK_FALSE(c.resonance);
}

TEST_CASE("classification of rotation numbers") {
  const IrrationalityConfig farey;
  RotationResult<double, 1> r;
  r.digits = 16.0;
  r.omega(0) = 0.4;
  const auto rational = classify_rotation_number(r, ChaosThreshold::circle(), farey);
  CHECK(rational.type == OrbitType::Periodic);
  CHECK(rational.resonance->order == 5);
  CHECK(rational.resonance->n == 2);
  r.omega(0) = std::sqrt(2.0) - 1.0;
  CHECK(classify_rotation_number(r, ChaosThreshold::circle(), farey).type == OrbitType::Nonresonant);
  r.digits = 3.0;
  CHECK(classify_rotation_number(r, ChaosThreshold::circle(), farey).type == OrbitType::Chaotic);
}

TEST_CASE("orbit type names round-trip") {
  for (OrbitType t : {OrbitType::Chaotic, OrbitType::Periodic, OrbitType::Resonant, OrbitType::Nonresonant})
    CHECK(orbit_type_from_string(to_string(t)) == t);
  CHECK_THROWS_AS(orbit_type_from_string("error"), std::invalid_argument);
}

TEST_CASE("statistics are reproducible across worker counts") {
  ResonanceConfig cfg;
  cfg.delta = 1e-6;
  cfg.band = ResonanceBand::from_mean_log(1e-6);
  const auto a = resonance_statistics(1000, cfg, 3, 1);
  const auto b = resonance_statistics(1000, cfg, 3, 4);
  CHECK(a.mean_log10 == b.mean_log10);
  CHECK(a.misclassified_fraction == b.misclassified_fraction);
  CHECK(a.misclassified_fraction == doctest::Approx(a.below_fraction + a.above_fraction));
  CHECK(a.mean_log10 == doctest::Approx(mean_log10_resonance_order(1e-6)).epsilon(0.03));
  CHECK_THROWS_AS(resonance_statistics(10, cfg, 3), std::invalid_argument);
}
