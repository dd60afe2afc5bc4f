#include "torus/farey.hpp"

#include "torus/errors.hpp"
#include "torus/parallel.hpp"
#include "torus/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace torus {

namespace {

constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 62;
constexpr int kMaxDescentSteps = 1 << 20;

struct Fraction {
  std::int64_t p;
  std::int64_t q;
};

enum class Side { Below, Inside, Above };

// Position of p/q relative to the open ball (x - delta, x + delta), all from
// the single quantity q x - p so the three cases partition exactly.
Side locate(long double x, long double delta, Fraction f) {
  const long double q = static_cast<long double>(f.q);
  const long double r = q * x - static_cast<long double>(f.p);
  const long double width = q * delta;
  if (r >= width) return Side::Below;
  if (-r >= width) return Side::Above;
  return Side::Inside;
}

Fraction advance_by(Fraction base, Fraction step, std::int64_t k) {
  if (step.q != 0 && k > (kMaxDenominator - base.q) / step.q)
    throw CapacityError("qmin: denominator exceeds 2^62");
  return {base.p + k * step.p, base.q + k * step.q};
}

// Largest k >= 1 with base + k*step still on side `side`. The mediant
// base + step is known to be on that side.
std::int64_t run_length(long double x, long double delta, Fraction base, Fraction step, Side side) {
  const long double sign = side == Side::Below ? 1.0L : -1.0L;
  // Signed slack of a fraction beyond its edge of the ball; >= 0 on `side`.
  auto slack = [&](Fraction f) {
    const long double q = static_cast<long double>(f.q);
    return sign * (q * x - static_cast<long double>(f.p)) - q * delta;
  };
  const long double num = slack(base);
  const long double den = -slack(step);
  long double guess = den > 0.0L ? std::floor(num / den) : static_cast<long double>(kMaxDenominator);
  const long double limit = static_cast<long double>(kMaxDenominator / step.q);
  if (guess > limit) guess = limit;
  auto k = std::max<std::int64_t>(1, static_cast<std::int64_t>(guess));
  while (k > 1 && locate(x, delta, advance_by(base, step, k)) != side) --k;
  while (locate(x, delta, advance_by(base, step, k + 1)) == side) ++k;
  return k;
}

}  // namespace

bool in_ball(double omega, double delta, std::int64_t p, std::int64_t q) {
  return locate(omega, delta, {p, q}) == Side::Inside;
}

RationalApprox qmin(double omega, double delta) {
  if (!std::isfinite(omega)) throw std::invalid_argument("qmin: omega must be finite");
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("qmin: delta must lie in (0, 1/2)");

  double whole = std::floor(omega);
  double x = omega - whole;
  if (x >= 1.0) {
    x = 0.0;
    whole += 1.0;
  }
  if (std::fabs(whole) > 0x1.0p52) throw CapacityError("qmin: integer part too large");
  const auto shift = static_cast<std::int64_t>(whole);

  auto finish = [&](Fraction f) {
    RationalApprox out;
    out.q = f.q;
    out.p = f.p + shift * f.q;
    out.distance = std::fabs(x - static_cast<double>(static_cast<long double>(f.p) / f.q));
    return out;
  };

  Fraction left{0, 1};
  Fraction right{1, 1};
  if (locate(x, delta, left) == Side::Inside) return finish(left);
  if (locate(x, delta, right) == Side::Inside) return finish(right);

  for (int step = 0; step < kMaxDescentSteps; ++step) {
    const Fraction mediant = advance_by(left, right, 1);
    const Side side = locate(x, delta, mediant);
    if (side == Side::Inside) return finish(mediant);
    if (side == Side::Below) {
      left = advance_by(left, right, run_length(x, delta, left, right, Side::Below));
    } else {
      right = advance_by(right, left, run_length(x, delta, right, left, Side::Above));
    }
  }
  throw CapacityError("qmin: descent did not terminate");
}

void IrrationalityConfig::validate() const {
  if (!(delta > 0.0 && delta < 0.5)) throw std::invalid_argument("irrationality: delta must lie in (0, 1/2)");
  if (!(s > 0.0)) throw std::invalid_argument("irrationality: s must be > 0");
}

double IrrationalityConfig::lower_denominator() const {
  return std::pow(10.0, -0.5 * std::log10(delta) - s);
}

double IrrationalityConfig::upper_denominator() const {
  return std::pow(10.0, -0.5 * std::log10(delta) + s);
}

bool is_effectively_irrational(std::int64_t q_min, const IrrationalityConfig& cfg) {
  if (q_min < 1) throw std::invalid_argument("is_effectively_irrational: q_min must be positive");
  return std::fabs(std::log10(static_cast<double>(q_min)) + 0.5 * std::log10(cfg.delta)) < cfg.s;
}

bool is_effectively_irrational(double omega, const IrrationalityConfig& cfg) {
  cfg.validate();
  return is_effectively_irrational(qmin(omega, cfg.delta).q, cfg);
}

DenominatorStatistics qmin_statistics(std::size_t n, double delta, std::uint64_t seed, unsigned workers) {
  if (n < 1000) throw std::invalid_argument("qmin_statistics: need at least 1000 samples");
  const std::vector<double> omegas = UniformSampler(seed).open_unit(n);
  std::vector<double> logs(n);
  parallel_for(n, workers, [&](std::size_t i) {
    logs[i] = std::log10(static_cast<double>(qmin(omegas[i], delta).q));
  });

  const IrrationalityConfig band{delta, IrrationalityConfig{}.s};
  double sum = 0.0;
  std::size_t rejected = 0;
  for (double v : logs) {
    sum += v;
    if (!(std::fabs(v + 0.5 * std::log10(delta)) < band.s)) ++rejected;
  }
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (double v : logs) sq += (v - mean) * (v - mean);

  DenominatorStatistics out;
  out.mean_log10 = mean;
  out.sigma = std::sqrt(sq / static_cast<double>(n - 1));
  out.rejected_fraction = static_cast<double>(rejected) / static_cast<double>(n);
  return out;
}

}  // namespace torus
