#pragma once

#include "torus/averaging.hpp"
#include "torus/farey.hpp"
#include "torus/maps.hpp"
#include "torus/resonance.hpp"

#include <Eigen/Core>

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace torus {

/// Golden mean (sqrt 5 - 1)/2.
inline constexpr double golden_mean = 0.61803398874989484820458683436563812;

struct ClassifierConfig {
  ChaosThreshold chaos = ChaosThreshold::circle();
  IrrationalityConfig farey;
  ResonanceConfig resonance;
};

/// One classified grid point. `orbit` is empty when the orbit failed
/// numerically; such rows are written with class "error".
struct ScanRecord {
  std::variant<CircleParams<double>, Torus2Params<double>> params;
  Eigen::VectorXd rotation;  ///< omega_T, size 1 or 2 (empty on error)
  double digits = 0.0;
  std::optional<OrbitClass> orbit;
  std::optional<LyapunovPair> lyapunov;

  int dim() const { return std::holds_alternative<CircleParams<double>>(params) ? 1 : 2; }
  /// a for circle maps, eps for torus maps.
  double strength() const;
  /// Omega padded with NaN in the second slot for circle maps.
  Eigen::Vector2d drive() const;
};

struct ScanOptions {
  ClassifierConfig classifier;
  bool lyapunov = false;  ///< torus scans only; doubles the cost
  unsigned workers = 0;   ///< 0 = default_workers()
};

/// Omega_i = (i + shift)/n, i = 0..n-1.
std::vector<double> shifted_grid(std::size_t n, double shift = golden_mean / 2.0);

/// n uniform points of [0,1)^2 from UniformSampler(seed), drawn as (x, y) pairs.
std::vector<Eigen::Vector2d> random_drives(std::size_t n, std::uint64_t seed);

/// (Omega_1 grid, fixed Omega_2): the fixed-Omega_2 slice used for the
/// golden-mean staircase.
std::vector<Eigen::Vector2d> slice_drives(std::size_t n, double omega2, double shift = golden_mean / 2.0);

/// Arnold circle map over a_values x shifted_grid(n_omega, shift); records are
/// a-major. Classes: chaotic, periodic (rational) or nonresonant (irrational).
std::vector<ScanRecord> scan_circle(const std::vector<double>& a_values, std::size_t n_omega,
                                    const OrbitSpec<double, 1>& spec, const ScanOptions& options,
                                    double shift = golden_mean / 2.0);

/// Torus map with the amplitudes/phases of `base` over eps_values x drives;
/// records are eps-major.
std::vector<ScanRecord> scan_torus(const Torus2Params<double>& base, const std::vector<double>& eps_values,
                                   const std::vector<Eigen::Vector2d>& drives, const OrbitSpec<double, 2>& spec,
                                   const ScanOptions& options);

/// Catalogue case with omega_samples random drives from `seed`, reused for
/// every eps.
std::vector<ScanRecord> scan_torus(int case_id, const std::vector<double>& eps_values, std::size_t omega_samples,
                                   std::uint64_t seed, const OrbitSpec<double, 2>& spec,
                                   const ScanOptions& options);

/// Classifies a single orbit; numeric failures give an empty `orbit`.
ScanRecord classify_orbit(const CircleParams<double>& params, const OrbitSpec<double, 1>& spec,
                          const BumpWeights<double>& weights, const ClassifierConfig& cfg);
ScanRecord classify_orbit(const Torus2Params<double>& params, const OrbitSpec<double, 2>& spec,
                          const BumpWeights<double>& weights, const ClassifierConfig& cfg, bool lyapunov);

// ---------------------------------------------------------------------------
// Aggregation

struct Proportions {
  std::array<std::size_t, 4> counts{};  ///< indexed by OrbitType
  std::size_t total = 0;                ///< classified records
  std::size_t errors = 0;               ///< numeric failures, not in total

  double fraction(OrbitType type) const;
  double chaotic() const { return fraction(OrbitType::Chaotic); }
  double periodic() const { return fraction(OrbitType::Periodic); }
  double resonant() const { return fraction(OrbitType::Resonant); }
  double nonresonant() const { return fraction(OrbitType::Nonresonant); }
  /// Nonresonant (circle maps: irrational) proportion.
  double mu() const { return nonresonant(); }
};

/// Class counts over all records. Throws std::invalid_argument when empty.
Proportions proportions(const std::vector<ScanRecord>& records);

/// Proportions per distinct strength (a or eps), in order of first appearance.
std::vector<std::pair<double, Proportions>> proportions_by_strength(const std::vector<ScanRecord>& records);

struct FitResult {
  double p1 = 0.0;
  double p2 = 0.0;
  double rms = 0.0;  ///< on mu itself, not log mu
  std::size_t points = 0;
};

/// Least squares of log mu on {log(1-a), (1-a) log(1-a)} (first column only
/// when two_term is false), i.e. mu = (1-a)^(p1 + p2 (1-a)).
/// Requires 0 < a < 1 and mu > 0 for every point and at least two points.
FitResult fit_power_law(const std::vector<std::pair<double, double>>& points, bool two_term);

/// (a, mu) pairs with a in [a_min, a_max] and mu > 0.
std::vector<std::pair<double, double>> fit_points(const std::vector<std::pair<double, Proportions>>& by_strength,
                                                  double a_min = 0.02, double a_max = 0.99);

struct DigitsHistogram {
  std::vector<double> edges;    ///< bin edges over [0, 16]
  std::vector<double> heights;  ///< probability mass per bin
  double terminal = 0.0;        ///< mass at dig_T = 16
  double mean = 0.0;
  std::size_t samples = 0;

  /// Mass with dig_T < cutoff.
  double below(double cutoff) const;

 private:
  friend DigitsHistogram histogram_digits(const std::vector<ScanRecord>&, double);
  std::vector<double> values_;
};

/// Probability-normalised histogram of dig_T with a separate terminal bin
/// for dig_T = 16. Failed orbits are skipped.
DigitsHistogram histogram_digits(const std::vector<ScanRecord>& records, double bin_width);

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* csv_header = "omega1,omega2,a_or_eps,rot1,rot2,digT,class,m1,m2,n,M,lyap1,lyap2";

/// One row per record under csv_header; reals with 17 significant digits and
/// empty fields where a column does not apply.
void write_csv(std::ostream& out, const std::vector<ScanRecord>& records);

struct CsvRow {
  std::optional<double> omega1, omega2, strength, rot1, rot2, digits;
  std::string orbit_class;
  std::optional<std::int64_t> m1, m2, n, order;
  std::optional<double> lyap1, lyap2;
};

/// Parses write_csv output. Throws std::invalid_argument on a bad header or
/// malformed row.
std::vector<CsvRow> read_csv(std::istream& in);

}  // namespace torus
