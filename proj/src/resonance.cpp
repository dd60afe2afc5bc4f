#include "torus/resonance.hpp"

#include "torus/parallel.hpp"
#include "torus/random.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus {

std::string_view to_string(OrbitType type) {
  switch (type) {
    case OrbitType::Chaotic: return "chaotic";
    case OrbitType::Periodic: return "periodic";
    case OrbitType::Resonant: return "resonant";
    case OrbitType::Nonresonant: return "nonresonant";
  }
  return "unknown";
}

OrbitType orbit_type_from_string(std::string_view name) {
  for (OrbitType t : {OrbitType::Chaotic, OrbitType::Periodic, OrbitType::Resonant, OrbitType::Nonresonant})
    if (to_string(t) == name) return t;
  throw std::invalid_argument("unknown orbit class '" + std::string(name) + "'");
}

double mean_log10_resonance_order(double delta) { return -0.334 * std::log10(delta) - 0.091; }

ResonanceBand ResonanceBand::from_log10(double log_lower, double log_upper) {
  ResonanceBand band;
  band.lower = static_cast<std::int64_t>(std::ceil(std::pow(10.0, log_lower)));
  band.upper = static_cast<std::int64_t>(std::floor(std::pow(10.0, log_upper)));
  return band;
}

ResonanceBand ResonanceBand::from_mean_log(double delta, double below, double above) {
  const double mean = mean_log10_resonance_order(delta);
  return from_log10(mean - below, mean + above);
}

ResonanceBand ResonanceBand::from_sigma(double delta, double k, double sigma) {
  return from_mean_log(delta, k * sigma, k * sigma);
}

void ResonanceConfig::validate() const {
  if (!(delta > 0.0)) throw std::invalid_argument("resonance: delta must be > 0");
  if (cap < 1) throw std::invalid_argument("resonance: order cap must be >= 1");
  if (band.lower > band.upper) throw std::invalid_argument("resonance: empty nonresonant band");
}

double resonance_distance(const Eigen::Vector2d& omega, const IntVector2& m, std::int64_t n) {
  if (m[0] == 0 && m[1] == 0) throw std::invalid_argument("resonance_distance: m must be nonzero");
  const double m1 = static_cast<double>(m[0]);
  const double m2 = static_cast<double>(m[1]);
  return std::fabs(m1 * omega(0) + m2 * omega(1) - static_cast<double>(n)) / std::hypot(m1, m2);
}

std::optional<ResonanceHit> resonance_order(const Eigen::Vector2d& omega, double delta, std::int64_t cap) {
  if (!(delta > 0.0)) throw std::invalid_argument("resonance_order: delta must be > 0");
  if (cap < 1) throw std::invalid_argument("resonance_order: cap must be >= 1");
  const double w1 = omega(0);
  const double w2 = omega(1);
  const double delta2 = delta * delta;

  auto test = [&](std::int64_t m1, std::int64_t m2) -> std::optional<ResonanceHit> {
    const double a = static_cast<double>(m1);
    const double b = static_cast<double>(m2);
    const double v = a * w1 + b * w2;
    const double n = std::nearbyint(v);
    const double r = v - n;
    const double norm2 = a * a + b * b;
    if (r * r >= delta2 * norm2) return std::nullopt;
    return ResonanceHit{{m1, m2}, static_cast<std::int64_t>(n), std::abs(m1) + std::abs(m2),
                        std::fabs(r) / std::sqrt(norm2)};
  };

  for (std::int64_t k = 1; k <= cap; ++k) {
    if (auto hit = test(0, k)) return hit;
    for (std::int64_t m1 = 1; m1 < k; ++m1) {
      if (auto hit = test(m1, m1 - k)) return hit;
      if (auto hit = test(m1, k - m1)) return hit;
    }
    if (auto hit = test(k, 0)) return hit;
  }
  return std::nullopt;
}

OrbitClass classify_rotation_vector(const RotationResult<double, 2>& r, const ChaosThreshold& thr,
                                    const IrrationalityConfig& farey_cfg, const ResonanceConfig& res_cfg) {
  if (classify_chaos(r, thr)) return {OrbitType::Chaotic, std::nullopt};
  OrbitClass out;
  out.resonance = resonance_order(r.omega, res_cfg.delta, res_cfg.cap);
  if (out.resonance && res_cfg.band.contains(out.resonance->order)) {
    out.type = OrbitType::Nonresonant;
    return out;
  }
  const bool irrational1 = is_effectively_irrational(r.omega(0), farey_cfg);
  const bool irrational2 = is_effectively_irrational(r.omega(1), farey_cfg);
  out.type = (!irrational1 && !irrational2) ? OrbitType::Periodic : OrbitType::Resonant;
  return out;
}

OrbitClass classify_rotation_number(const RotationResult<double, 1>& r, const ChaosThreshold& thr,
                                    const IrrationalityConfig& farey_cfg) {
  if (classify_chaos(r, thr)) return {OrbitType::Chaotic, std::nullopt};
  const RationalApprox approx = qmin(r.omega(0), farey_cfg.delta);
  OrbitClass out;
  out.type = is_effectively_irrational(approx.q, farey_cfg) ? OrbitType::Nonresonant : OrbitType::Periodic;
  out.resonance = ResonanceHit{{approx.q, 0}, approx.p, approx.q, approx.distance};
  return out;
}

ResonanceStatistics resonance_statistics(std::size_t n, const ResonanceConfig& cfg, std::uint64_t seed,
                                         unsigned workers) {
  if (n < 1000) throw std::invalid_argument("resonance_statistics: need at least 1000 samples");
  cfg.validate();
  UniformSampler sampler(seed);
  std::vector<Eigen::Vector2d> omegas(n);
  for (auto& w : omegas) {
    w(0) = sampler.half_open_unit();
    w(1) = sampler.half_open_unit();
  }
  std::vector<std::int64_t> orders(n);
  parallel_for(n, workers, [&](std::size_t i) {
    auto hit = resonance_order(omegas[i], cfg.delta, cfg.cap);
    orders[i] = hit ? hit->order : cfg.cap + 1;
  });

  ResonanceStatistics out;
  std::size_t below = 0;
  std::size_t above = 0;
  double sum = 0.0;
  for (std::int64_t m : orders) {
    sum += std::log10(static_cast<double>(m));
    if (m > cfg.cap) ++out.beyond_cap;
    if (m < cfg.band.lower) ++below;
    else if (m > cfg.band.upper) ++above;
  }
  const double count = static_cast<double>(n);
  out.mean_log10 = sum / count;
  double sq = 0.0;
  for (std::int64_t m : orders) {
    const double d = std::log10(static_cast<double>(m)) - out.mean_log10;
    sq += d * d;
  }
  out.sigma = std::sqrt(sq / (count - 1.0));
  out.below_fraction = static_cast<double>(below) / count;
  out.above_fraction = static_cast<double>(above) / count;
  out.misclassified_fraction = out.below_fraction + out.above_fraction;
  return out;
}

}  // namespace torus
