#pragma once

#include "torus/averaging.hpp"
#include "torus/farey.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace torus {

using IntVector2 = std::array<std::int64_t, 2>;

/// A resonance line m . omega = n passing within `distance` of omega.
/// m is canonical: its first nonzero component is positive.
struct ResonanceHit {
  IntVector2 m{0, 0};
  std::int64_t n = 0;
  std::int64_t order = 0;  ///< |m1| + |m2|
  double distance = 0.0;
};

enum class OrbitType { Chaotic, Periodic, Resonant, Nonresonant };

std::string_view to_string(OrbitType type);
/// Inverse of to_string; throws std::invalid_argument on unknown names.
OrbitType orbit_type_from_string(std::string_view name);

/// Classification of one orbit. `resonance` carries the lowest-order line found
/// for regular orbits (for circle maps: m = (q, 0), n = p, order = q); it is
/// empty for chaotic orbits and when the order search ran past its cap.
struct OrbitClass {
  OrbitType type = OrbitType::Nonresonant;
  std::optional<ResonanceHit> resonance;
};

/// Orders accepted as nonresonant, lower <= M <= upper.
struct ResonanceBand {
  std::int64_t lower = 256;
  std::int64_t upper = 2673;

  /// Integer band inside (10^log_lower, 10^log_upper) rounded inward.
  static ResonanceBand from_log10(double log_lower, double log_upper);

  /// Band from <log10 M> = slope log10(delta) + offset and the spread
  /// +/- width, with slope -0.334, offset -0.091 and log-width
  /// (-0.508, +0.512) giving 2.407 < log10 M < 3.427 at delta = 1e-9.
  static ResonanceBand from_mean_log(double delta, double below = 0.508, double above = 0.512);

  /// Strict mean +/- k sigma with sigma = 0.171.
  static ResonanceBand from_sigma(double delta, double k = 3.0, double sigma = 0.171);

  bool contains(std::int64_t order) const { return order >= lower && order <= upper; }
};

/// <log10 M(omega, delta)> for uniform omega on the 2-torus.
double mean_log10_resonance_order(double delta);

struct ResonanceConfig {
  double delta = 1e-9;
  std::int64_t cap = 3000;
  ResonanceBand band = ResonanceBand::from_mean_log(1e-9);

  void validate() const;
};

/// |m . omega - n| / ||m||_2. Throws std::invalid_argument for m = 0.
double resonance_distance(const Eigen::Vector2d& omega, const IntVector2& m, std::int64_t n);

/// Smallest-order resonance within delta of omega, searching ||m||_1 = 1..cap.
/// Within one order the lexicographically smallest canonical m wins; n is the
/// nearest integer to m . omega.
std::optional<ResonanceHit> resonance_order(const Eigen::Vector2d& omega, double delta, std::int64_t cap);

/// Chaotic / nonresonant / periodic / resonant label for a two-torus orbit.
OrbitClass classify_rotation_vector(const RotationResult<double, 2>& r, const ChaosThreshold& thr,
                                    const IrrationalityConfig& farey_cfg, const ResonanceConfig& res_cfg);

/// Chaotic / periodic / nonresonant (irrational) label for a circle-map orbit.
OrbitClass classify_rotation_number(const RotationResult<double, 1>& r, const ChaosThreshold& thr,
                                    const IrrationalityConfig& farey_cfg);

struct ResonanceStatistics {
  double mean_log10 = 0.0;
  double sigma = 0.0;
  double misclassified_fraction = 0.0;  ///< outside the band (either side)
  double below_fraction = 0.0;          ///< M < lower
  double above_fraction = 0.0;          ///< M > upper or beyond the cap
  std::size_t beyond_cap = 0;           ///< samples with no hit up to the cap
};

/// Statistics of log10 M over n uniform omega in [0,1)^2 drawn from
/// UniformSampler(seed) as (omega1, omega2) pairs. Samples beyond the cap
/// enter the mean as log10(cap + 1).
ResonanceStatistics resonance_statistics(std::size_t n, const ResonanceConfig& cfg, std::uint64_t seed,
                                         unsigned workers = 0);

}  // namespace torus
