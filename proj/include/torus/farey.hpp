#pragma once

#include <cstddef>
#include <cstdint>

namespace torus {

/// p/q with the smallest q inside the open ball (omega - delta, omega + delta).
struct RationalApprox {
  std::int64_t p = 0;
  std::int64_t q = 1;
  double distance = 0.0;  ///< |omega - p/q|
};

/// Effective-irrationality test: |log10 q_min + log10(delta)/2| < s.
struct IrrationalityConfig {
  double delta = 1e-9;
  double s = 1.6875;

  void validate() const;

  /// Open interval of q_min values accepted as irrational, (lower, upper).
  double lower_denominator() const;
  double upper_denominator() const;
};

/// Minimal-denominator rational within delta of omega, by Stern-Brocot
/// descent from 0/1 and 1/1 applied to the fractional part of omega. Runs of
/// same-direction steps are taken in one jump, so the cost is proportional to
/// the number of direction changes rather than to q. The returned p refers to
/// omega itself (integer part restored).
///
/// Throws std::invalid_argument unless 0 < delta < 1/2 and omega is finite, and
/// CapacityError if denominators would exceed 2^62.
RationalApprox qmin(double omega, double delta);

/// Membership in the open ball, evaluated as |q omega - p| < q delta.
bool in_ball(double omega, double delta, std::int64_t p, std::int64_t q);

bool is_effectively_irrational(std::int64_t q_min, const IrrationalityConfig& cfg);
bool is_effectively_irrational(double omega, const IrrationalityConfig& cfg);

struct DenominatorStatistics {
  double mean_log10 = 0.0;
  double sigma = 0.0;
  /// Fraction of samples outside the irrational band at s = 1.6875.
  double rejected_fraction = 0.0;
};

/// Sample mean and standard deviation of log10 q_min(omega, delta) over n
/// uniform omega in (0,1) drawn from UniformSampler(seed).
DenominatorStatistics qmin_statistics(std::size_t n, double delta, std::uint64_t seed, unsigned workers = 0);

}  // namespace torus
