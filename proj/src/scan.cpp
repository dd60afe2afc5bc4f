#include "torus/scan.hpp"

#include "torus/errors.hpp"
#include "torus/parallel.hpp"
#include "torus/random.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iterator>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace torus {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t type_index(OrbitType t) { return static_cast<std::size_t>(t); }

}  // namespace

double ScanRecord::strength() const {
  if (const auto* c = std::get_if<CircleParams<double>>(&params)) return c->a;
  return std::get<Torus2Params<double>>(params).eps;
}

Eigen::Vector2d ScanRecord::drive() const {
  if (const auto* c = std::get_if<CircleParams<double>>(&params)) return {c->omega, kNaN};
  return std::get<Torus2Params<double>>(params).omega;
}

std::vector<double> shifted_grid(std::size_t n, double shift) {
  if (n < 1) throw std::invalid_argument("grid: need at least one point");
  if (!(shift >= 0.0 && shift < 1.0)) throw std::invalid_argument("grid: shift must lie in [0,1)");
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (static_cast<double>(i) + shift) / static_cast<double>(n);
  return out;
}

std::vector<Eigen::Vector2d> random_drives(std::size_t n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("random drives: need at least one sample");
  UniformSampler sampler(seed);
  std::vector<Eigen::Vector2d> out(n);
  for (auto& w : out) {
    w(0) = sampler.half_open_unit();
    w(1) = sampler.half_open_unit();
  }
  return out;
}

std::vector<Eigen::Vector2d> slice_drives(std::size_t n, double omega2, double shift) {
  std::vector<Eigen::Vector2d> out;
  out.reserve(n);
  for (double w1 : shifted_grid(n, shift)) out.emplace_back(w1, omega2);
  return out;
}

// ---------------------------------------------------------------------------

ScanRecord classify_orbit(const CircleParams<double>& params, const OrbitSpec<double, 1>& spec,
                          const BumpWeights<double>& weights, const ClassifierConfig& cfg) {
  ScanRecord rec;
  rec.params = params;
  try {
    const auto r = rotation_and_digits(CircleMap<double>(params), spec, weights);
    rec.rotation = r.omega;
    rec.digits = r.digits;
    rec.orbit = classify_rotation_number(r, cfg.chaos, cfg.farey);
  } catch (const NumericFailure&) {
    rec.rotation.resize(0);
    rec.orbit.reset();
  }
  return rec;
}

ScanRecord classify_orbit(const Torus2Params<double>& params, const OrbitSpec<double, 2>& spec,
                          const BumpWeights<double>& weights, const ClassifierConfig& cfg, bool lyapunov) {
  ScanRecord rec;
  rec.params = params;
  try {
    const Torus2Map<double> map(params);
    const auto r = rotation_and_digits(map, spec, weights);
    rec.rotation = r.omega;
    rec.digits = r.digits;
    rec.orbit = classify_rotation_vector(r, cfg.chaos, cfg.farey, cfg.resonance);
    if (lyapunov) rec.lyapunov = lyapunov_spectrum(map, spec);
  } catch (const NumericFailure&) {
    rec.rotation.resize(0);
    rec.orbit.reset();
    rec.lyapunov.reset();
  }
  return rec;
}

std::vector<ScanRecord> scan_circle(const std::vector<double>& a_values, std::size_t n_omega,
                                    const OrbitSpec<double, 1>& spec, const ScanOptions& options, double shift) {
  spec.validate();
  const std::vector<double> grid = shifted_grid(n_omega, shift);
  for (double a : a_values) CircleParams<double>{0.0, a}.validate();
  const BumpWeights<double> weights(spec.length);

  std::vector<ScanRecord> records(a_values.size() * n_omega);
  parallel_for(records.size(), options.workers, [&](std::size_t k) {
    const CircleParams<double> params{grid[k % n_omega], a_values[k / n_omega]};
    records[k] = classify_orbit(params, spec, weights, options.classifier);
  });
  return records;
}

std::vector<ScanRecord> scan_torus(const Torus2Params<double>& base, const std::vector<double>& eps_values,
                                   const std::vector<Eigen::Vector2d>& drives, const OrbitSpec<double, 2>& spec,
                                   const ScanOptions& options) {
  spec.validate();
  if (drives.empty()) throw std::invalid_argument("scan_torus: need at least one drive");
  for (double e : eps_values)
    for (const auto& w : drives) base.with(e, w).validate();
  const BumpWeights<double> weights(spec.length);

  const std::size_t per_eps = drives.size();
  std::vector<ScanRecord> records(eps_values.size() * per_eps);
  parallel_for(records.size(), options.workers, [&](std::size_t k) {
    const Torus2Params<double> params = base.with(eps_values[k / per_eps], drives[k % per_eps]);
    records[k] = classify_orbit(params, spec, weights, options.classifier, options.lyapunov);
  });
  return records;
}

std::vector<ScanRecord> scan_torus(int case_id, const std::vector<double>& eps_values, std::size_t omega_samples,
                                   std::uint64_t seed, const OrbitSpec<double, 2>& spec,
                                   const ScanOptions& options) {
  return scan_torus(parameter_catalog(case_id), eps_values, random_drives(omega_samples, seed), spec, options);
}

// ---------------------------------------------------------------------------

double Proportions::fraction(OrbitType type) const {
  if (total == 0) return 0.0;
  return static_cast<double>(counts[type_index(type)]) / static_cast<double>(total);
}

Proportions proportions(const std::vector<ScanRecord>& records) {
  if (records.empty()) throw std::invalid_argument("proportions: no records");
  Proportions out;
  for (const auto& r : records) {
    if (!r.orbit) {
      ++out.errors;
      continue;
    }
    ++out.counts[type_index(r.orbit->type)];
    ++out.total;
  }
  return out;
}

std::vector<std::pair<double, Proportions>> proportions_by_strength(const std::vector<ScanRecord>& records) {
  std::vector<std::pair<double, Proportions>> out;
  for (const auto& r : records) {
    const double s = r.strength();
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.first == s; });
    if (it == out.end()) {
      out.push_back({s, Proportions{}});
      it = std::prev(out.end());
    }
    if (!r.orbit) {
      ++it->second.errors;
      continue;
    }
    ++it->second.counts[type_index(r.orbit->type)];
    ++it->second.total;
  }
  return out;
}

FitResult fit_power_law(const std::vector<std::pair<double, double>>& points, bool two_term) {
  if (points.size() < 2) throw std::invalid_argument("fit_power_law: need at least two points");
  const auto n = static_cast<Eigen::Index>(points.size());
  const Eigen::Index k = two_term ? 2 : 1;
  Eigen::MatrixXd basis(n, k);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto [a, mu] = points[static_cast<std::size_t>(i)];
    if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("fit_power_law: a must lie in (0,1)");
    if (!(mu > 0.0)) throw std::invalid_argument("fit_power_law: mu must be positive");
    const double log_gap = std::log1p(-a);
    basis(i, 0) = log_gap;
    if (two_term) basis(i, 1) = (1.0 - a) * log_gap;
    target(i) = std::log(mu);
  }
  const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(target);

  FitResult out;
  out.p1 = coef(0);
  out.p2 = two_term ? coef(1) : 0.0;
  out.points = points.size();
  double sq = 0.0;
  for (const auto& [a, mu] : points) {
    const double model = std::pow(1.0 - a, out.p1 + out.p2 * (1.0 - a));
    sq += (mu - model) * (mu - model);
  }
  out.rms = std::sqrt(sq / static_cast<double>(points.size()));
  return out;
}

std::vector<std::pair<double, double>> fit_points(const std::vector<std::pair<double, Proportions>>& by_strength,
                                                  double a_min, double a_max) {
  std::vector<std::pair<double, double>> out;
  for (const auto& [a, p] : by_strength)
    if (a >= a_min && a <= a_max && a > 0.0 && a < 1.0 && p.total > 0 && p.mu() > 0.0) out.push_back({a, p.mu()});
  return out;
}

double DigitsHistogram::below(double cutoff) const {
  if (values_.empty()) return 0.0;
  std::size_t n = 0;
  for (double v : values_)
    if (v < cutoff) ++n;
  return static_cast<double>(n) / static_cast<double>(values_.size());
}

DigitsHistogram histogram_digits(const std::vector<ScanRecord>& records, double bin_width) {
  if (!(bin_width > 0.0)) throw std::invalid_argument("histogram_digits: bin width must be > 0");
  DigitsHistogram h;
  const auto bins = static_cast<std::size_t>(std::ceil(max_digits / bin_width));
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(std::min(max_digits, static_cast<double>(i) * bin_width));
  h.heights.assign(bins, 0.0);

  double sum = 0.0;
  std::size_t terminal = 0;
  for (const auto& r : records) {
    if (!r.orbit) continue;
    h.values_.push_back(r.digits);
    sum += r.digits;
    if (r.digits >= max_digits) {
      ++terminal;
      continue;
    }
    const auto bin = std::min(bins - 1, static_cast<std::size_t>(std::max(0.0, r.digits) / bin_width));
    h.heights[bin] += 1.0;
  }
  h.samples = h.values_.size();
  if (h.samples == 0) return h;
  const double n = static_cast<double>(h.samples);
  for (double& v : h.heights) v /= n;
  h.terminal = static_cast<double>(terminal) / n;
  h.mean = sum / n;
  return h;
}

// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, const std::vector<ScanRecord>& records) {
  out << csv_header << '\n';
  for (const auto& r : records) {
    const bool circle = r.dim() == 1;
    const Eigen::Vector2d drive = r.drive();
    out << format_real(drive(0)) << ',' << (circle ? "" : format_real(drive(1))) << ','
        << format_real(r.strength()) << ',';
    if (!r.orbit) {
      out << ",,,error,,,,,,\n";
      continue;
    }
    out << format_real(r.rotation(0)) << ',' << (circle ? "" : format_real(r.rotation(1))) << ','
        << format_real(r.digits) << ',' << to_string(r.orbit->type) << ',';
    if (const auto& hit = r.orbit->resonance) {
      out << hit->m[0] << ',';
      if (!circle) out << hit->m[1];
      out << ',' << hit->n << ',' << hit->order << ',';
    } else {
      out << ",,,,";
    }
    if (r.lyapunov) out << format_real(r.lyapunov->largest) << ',' << format_real(r.lyapunov->smallest);
    else out << ',';
    out << '\n';
  }
}

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::optional<double> parse_optional_real(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("csv: bad number '" + s + "'");
  return v;
}

std::optional<std::int64_t> parse_optional_int(const std::string& s) {
  if (s.empty()) return std::nullopt;
  std::size_t used = 0;
  const long long v = std::stoll(s, &used);
  if (used != s.size()) throw std::invalid_argument("csv: bad integer '" + s + "'");
  return v;
}

}  // namespace

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != csv_header) throw std::invalid_argument("csv: unexpected header '" + line + "'");
  std::vector<CsvRow> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != 13) throw std::invalid_argument("csv line " + std::to_string(lineno) + ": expected 13 fields");
    try {
      CsvRow r;
      r.omega1 = parse_optional_real(f[0]);
      r.omega2 = parse_optional_real(f[1]);
      r.strength = parse_optional_real(f[2]);
      r.rot1 = parse_optional_real(f[3]);
      r.rot2 = parse_optional_real(f[4]);
      r.digits = parse_optional_real(f[5]);
      r.orbit_class = f[6];
      r.m1 = parse_optional_int(f[7]);
      r.m2 = parse_optional_int(f[8]);
      r.n = parse_optional_int(f[9]);
      r.order = parse_optional_int(f[10]);
      r.lyap1 = parse_optional_real(f[11]);
      r.lyap2 = parse_optional_real(f[12]);
      if (r.orbit_class != "error") orbit_type_from_string(r.orbit_class);
      rows.push_back(std::move(r));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("csv line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::out_of_range&) {
      throw std::invalid_argument("csv line " + std::to_string(lineno) + ": value out of range");
    }
  }
  return rows;
}

}  // namespace torus
