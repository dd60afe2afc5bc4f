#include "cli.hpp"

#include "torus/critical.hpp"
#include "torus/errors.hpp"
#include "torus/farey.hpp"
#include "torus/maps.hpp"
#include "torus/parallel.hpp"
#include "torus/resonance.hpp"
#include "torus/scan.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace torus::cli {

namespace {

using Json = nlohmann::ordered_json;

const std::vector<std::string> kSubcommands = {"scan1d", "scan2d", "epscrit", "stats-farey",
                                               "stats-resonance", "fit", "orbit"};

// Thrown for semantically invalid settings; mapped to exit 2.
struct InvalidConfig : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw InvalidConfig(what + ": not a number: '" + s + "'");
  }
  if (used != s.size()) throw InvalidConfig(what + ": not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(trim(item), what));
  if (out.empty()) throw InvalidConfig(what + ": empty list");
  return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i)
    v[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

// ---------------------------------------------------------------------------
// Option registry: every registered option serialises its resolved value, so
// the run can be written back as a config file and as the JSON config block.

class Registry {
 public:
  explicit Registry(CLI::App* app) : app_(app) {}

  CLI::App* app() const { return app_; }

  template <typename T>
  CLI::Option* add(const std::string& flags, T& var, const std::string& desc, bool persist = true) {
    CLI::Option* opt = app_->add_option(flags, var, desc)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    if (persist) entries_.push_back({opt->get_single_name(), [&var]() -> std::optional<std::string> {
                                      return serialise(var);
                                    }});
    return opt;
  }

  CLI::Option* flag(const std::string& flags, bool& var, const std::string& desc, bool persist = true) {
    CLI::Option* opt = app_->add_flag(flags, var, desc)->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    if (persist)
      entries_.push_back({opt->get_single_name(), [&var]() -> std::optional<std::string> {
                            return std::string(var ? "true" : "false");
                          }});
    return opt;
  }

  bool given(const std::string& name) const { return app_->get_option("--" + name)->count() > 0; }

  std::vector<std::pair<std::string, std::string>> resolved() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : entries_)
      if (auto v = e.second()) out.emplace_back(e.first, *v);
    return out;
  }

 private:
  static std::optional<std::string> serialise(const double& v) { return format_real(v); }
  static std::optional<std::string> serialise(const std::string& v) {
    if (v.empty()) return std::nullopt;
    return v;
  }
  static std::optional<std::string> serialise(const std::optional<double>& v) {
    if (!v) return std::nullopt;
    return format_real(*v);
  }
  template <typename I>
    requires std::is_integral_v<I>
  static std::optional<std::string> serialise(const I& v) {
    return std::to_string(v);
  }

  CLI::App* app_;
  std::vector<std::pair<std::string, std::function<std::optional<std::string>()>>> entries_;
};

// ---------------------------------------------------------------------------
// Settings shared by the subcommands.

struct Common {
  std::string out_dir;
  unsigned threads = 0;
};

struct Classifier {
  double delta = 1e-9;
  double s = 1.6875;
  double cutoff = 9.0;
  std::int64_t order_cap = 3000;

  void add_to(Registry& r, bool with_resonance) {
    r.add("--delta", delta, "ball radius for Farey and resonance tests")->check(CLI::PositiveNumber);
    r.add("--s", s, "half-width of the irrational band in log10 q");
    r.add("--digits-cutoff", cutoff, "dig_T below this is chaotic");
    if (with_resonance) r.add("--order-cap", order_cap, "largest resonance order searched");
  }

  ClassifierConfig config(std::size_t length) const {
    ClassifierConfig c;
    c.chaos = {length, cutoff};
    c.farey.delta = delta;
    c.farey.s = s;
    c.farey.validate();
    c.resonance.delta = delta;
    c.resonance.cap = order_cap;
    c.resonance.band = ResonanceBand::from_mean_log(delta);
    c.resonance.validate();
    return c;
  }
};

struct Orbit {
  std::size_t length = 100000;
  std::size_t transient = default_transient;
  std::string x0;

  void add_to(Registry& r) {
    r.add("-T,--length", length, "averaging window T")->check(CLI::PositiveNumber);
    r.add("--transient", transient, "iterates discarded first");
    r.add("--x0", x0, "initial point, comma separated (default 0.117789164297101 per component)");
  }

  template <int Dim>
  OrbitSpec<double, Dim> spec() const {
    OrbitSpec<double, Dim> s;
    s.length = length;
    s.transient = transient;
    if (!x0.empty()) {
      const auto v = parse_list(x0, "x0");
      if (v.size() == 1) s.x0.setConstant(v[0]);
      else if (v.size() == static_cast<std::size_t>(Dim))
        for (int i = 0; i < Dim; ++i) s.x0(i) = v[static_cast<std::size_t>(i)];
      else throw InvalidConfig("x0: expected 1 or " + std::to_string(Dim) + " components");
    }
    s.validate();
    return s;
  }
};

Json proportions_json(const Proportions& p) {
  Json j;
  j["total"] = p.total;
  j["errors"] = p.errors;
  j["chaotic"] = p.chaotic();
  j["periodic"] = p.periodic();
  j["resonant"] = p.resonant();
  j["nonresonant"] = p.nonresonant();
  return j;
}

Json config_json(const std::vector<std::pair<std::string, std::string>>& resolved) {
  Json j = Json::object();
  for (const auto& [k, v] : resolved) j[k] = v;
  return j;
}

std::size_t count_errors(const std::vector<ScanRecord>& records) {
  return static_cast<std::size_t>(
      std::count_if(records.begin(), records.end(), [](const ScanRecord& r) { return !r.orbit; }));
}

std::vector<ScanRecord> records_at(const std::vector<ScanRecord>& records, double strength) {
  std::vector<ScanRecord> out;
  for (const auto& r : records)
    if (r.strength() == strength) out.push_back(r);
  return out;
}

Json fit_json(const std::vector<std::pair<double, Proportions>>& by_strength, double a_min, double a_max) {
  const auto points = fit_points(by_strength, a_min, a_max);
  Json j;
  j["a_min"] = a_min;
  j["a_max"] = a_max;
  j["points"] = points.size();
  if (points.size() < 2) {
    j["two_term"] = nullptr;
    j["one_term"] = nullptr;
    return j;
  }
  const FitResult two = fit_power_law(points, true);
  const FitResult one = fit_power_law(points, false);
  j["two_term"] = {{"p1", two.p1}, {"p2", two.p2}, {"rms", two.rms}};
  j["one_term"] = {{"p1", one.p1}, {"rms", one.rms}};
  return j;
}

// ---------------------------------------------------------------------------
// Subcommands. Each returns the "results" block of the summary and may fill
// `records` for records.csv.

struct Context {
  std::ostream& out;
  std::ostream& err;
  unsigned workers;
  std::vector<ScanRecord> records;
  bool has_records = false;
};

struct Scan1d {
  Classifier cls;
  Orbit orbit;
  std::string a = "0.8";
  std::string a_range;
  std::size_t n_omega = 2000;
  double shift = golden_mean / 2.0;
  double bin_width = 0.25;
  double a_min = 0.02;
  double a_max = 0.99;
  bool full_scale = false;

  void add_to(Registry& r) {
    cls.add_to(r, false);
    orbit.add_to(r);
    r.add("--a", a, "comma-separated forcing amplitudes");
    r.add("--a-range", a_range, "lo,hi,count: evenly spaced amplitudes (overrides --a)");
    r.add("--n-omega", n_omega, "Omega grid points")->check(CLI::PositiveNumber);
    r.add("--shift", shift, "grid offset: Omega_i = (i + shift)/n");
    r.add("--bin-width", bin_width, "dig_T histogram bin width")->check(CLI::PositiveNumber);
    r.add("--a-min", a_min, "fit range lower end");
    r.add("--a-max", a_max, "fit range upper end");
    r.flag("--full-scale", full_scale, "full-resolution grid (n-omega 10000)", false);
  }

  void resolve(const Registry& r) {
    if (full_scale && !r.given("n-omega")) n_omega = 10000;
  }

  std::vector<double> amplitudes() const {
    if (a_range.empty()) return parse_list(a, "a");
    const auto v = parse_list(a_range, "a-range");
    if (v.size() != 3 || v[2] < 1 || v[2] != std::floor(v[2])) throw InvalidConfig("a-range: expected lo,hi,count");
    return linspace(v[0], v[1], static_cast<std::size_t>(v[2]));
  }

  Json run(Context& ctx) const {
    const auto as = amplitudes();
    const auto spec = orbit.spec<1>();
    ScanOptions opt;
    opt.classifier = cls.config(orbit.length);
    opt.workers = ctx.workers;
    ctx.records = scan_circle(as, n_omega, spec, opt, shift);
    ctx.has_records = true;

    const auto by = proportions_by_strength(ctx.records);
    Json rows = Json::array();
    for (const auto& [a_val, p] : by) {
      Json row;
      row["a"] = a_val;
      const auto h = histogram_digits(records_at(ctx.records, a_val), bin_width);
      row["digits16"] = h.terminal;
      row["chaotic"] = p.chaotic();
      row["rational"] = p.periodic();
      row["irrational"] = p.nonresonant();
      row["total"] = p.total;
      row["errors"] = p.errors;
      row["mean_digits"] = h.mean;
      row["histogram"] = {{"edges", h.edges}, {"heights", h.heights}, {"terminal", h.terminal}};
      rows.push_back(std::move(row));
    }
    Json results;
    results["by_a"] = std::move(rows);
    results["fit"] = fit_json(by, a_min, a_max);
    return results;
  }
};

struct Scan2d {
  Classifier cls;
  Orbit orbit;
  int case_id = 0;
  std::string eps;
  std::size_t eps_count = 40;
  double eps_max_factor = 1.2;
  std::size_t omega_samples = 500;
  std::uint64_t seed = 1;
  std::optional<double> omega2;
  std::size_t n_omega1 = 500;
  double shift = golden_mean / 2.0;
  bool lyapunov = false;
  bool full_scale = false;

  void add_to(Registry& r) {
    cls.add_to(r, true);
    orbit.add_to(r);
    r.add("--case", case_id, "catalogue case 0-7")->check(CLI::Range(0, catalog_size - 1));
    r.add("--eps", eps, "comma-separated eps values (overrides --eps-count)");
    r.add("--eps-count", eps_count, "eps values evenly spaced on [0, factor * eps_crit]")->check(CLI::PositiveNumber);
    r.add("--eps-max-factor", eps_max_factor, "upper eps as a multiple of eps_crit");
    r.add("--omega-samples", omega_samples, "random drives in [0,1)^2")->check(CLI::PositiveNumber);
    r.add("--seed", seed, "seed for the random drives");
    r.add("--omega2", omega2, "fix Omega_2 and scan a shifted Omega_1 grid instead");
    r.add("--n-omega1", n_omega1, "Omega_1 grid points with --omega2")->check(CLI::PositiveNumber);
    r.add("--shift", shift, "Omega_1 grid offset with --omega2");
    r.flag("--lyapunov", lyapunov, "also compute Lyapunov exponents");
    r.flag("--full-scale", full_scale, "2500 drives, 402 eps values, T = 1e6", false);
  }

  void resolve(const Registry& r) {
    if (!full_scale) return;
    if (!r.given("omega-samples")) omega_samples = 2500;
    if (!r.given("eps-count")) eps_count = 402;
    if (!r.given("length")) orbit.length = 1000000;
  }

  Json run(Context& ctx) const {
    const Torus2Params<double> base = parameter_catalog(case_id);
    std::optional<double> crit;
    if (!has_no_critical_value(base)) crit = eps_crit(base).eps_crit;

    std::vector<double> eps_values;
    if (!eps.empty()) {
      eps_values = parse_list(eps, "eps");
    } else {
      if (!crit) throw InvalidConfig("case " + std::to_string(case_id) + " has no eps_crit; pass --eps");
      eps_values = linspace(0.0, eps_max_factor * *crit, eps_count);
    }
    const auto drives = omega2 ? slice_drives(n_omega1, *omega2, shift) : random_drives(omega_samples, seed);

    ScanOptions opt;
    opt.classifier = cls.config(orbit.length);
    opt.lyapunov = lyapunov;
    opt.workers = ctx.workers;
    ctx.records = scan_torus(base, eps_values, drives, orbit.spec<2>(), opt);
    ctx.has_records = true;

    Json results;
    results["case"] = case_id;
    results["eps_crit"] = crit ? Json(*crit) : Json(nullptr);
    Json rows = Json::array();
    for (const auto& [e, p] : proportions_by_strength(ctx.records)) {
      Json row = proportions_json(p);
      row["eps"] = e;
      rows.push_back(std::move(row));
    }
    results["by_eps"] = std::move(rows);
    return results;
  }
};

struct EpsCrit {
  std::string cases;
  CriticalOptions copt;

  void add_to(Registry& r) {
    r.add("--case", cases, "comma-separated catalogue cases (default: all)");
    r.add("--grid", copt.grid, "coarse grid points per axis")->check(CLI::Range(4, 1 << 14));
    r.add("--candidates", copt.candidates, "grid minima refined locally")->check(CLI::PositiveNumber);
    r.add("--eps-tolerance", copt.eps_tolerance, "bisection width")->check(CLI::PositiveNumber);
  }

  Json run(Context&) const {
    std::vector<int> ids;
    if (cases.empty()) {
      for (int i = 0; i < catalog_size; ++i) ids.push_back(i);
    } else {
      for (double v : parse_list(cases, "case")) {
        if (v != std::floor(v) || v < 0 || v >= catalog_size) throw InvalidConfig("case: expected integers 0-7");
        ids.push_back(static_cast<int>(v));
      }
    }
    Json rows = Json::array();
    for (int id : ids) {
      const auto params = parameter_catalog(id);
      Json row;
      row["case"] = id;
      if (has_no_critical_value(params)) {
        row["eps_crit"] = nullptr;
      } else {
        const CriticalResult r = eps_crit(params, copt);
        row["eps_crit"] = r.eps_crit;
        row["argmin"] = {r.argmin_x(0), r.argmin_x(1)};
        row["residual"] = r.residual;
      }
      rows.push_back(std::move(row));
    }
    return {{"cases", std::move(rows)}};
  }
};

struct StatsFarey {
  double delta = 1e-9;
  std::size_t n = 100000;
  std::uint64_t seed = 1;

  void add_to(Registry& r) {
    r.add("--delta", delta, "ball radius")->check(CLI::PositiveNumber);
    r.add("-n,--samples", n, "number of samples")->check(CLI::Range(std::size_t{1000}, std::size_t{1} << 40));
    r.add("--seed", seed, "sampler seed");
  }

  Json run(Context& ctx) const {
    const auto st = qmin_statistics(n, delta, seed, ctx.workers);
    const IrrationalityConfig band{delta, 1.6875};
    return {{"mean_log10_qmin", st.mean_log10},
            {"sigma", st.sigma},
            {"rejected_fraction", st.rejected_fraction},
            {"band", {band.lower_denominator(), band.upper_denominator()}}};
  }
};

struct StatsResonance {
  double delta = 1e-9;
  std::int64_t order_cap = 3000;
  std::size_t n = 10000;
  std::uint64_t seed = 1;

  void add_to(Registry& r) {
    r.add("--delta", delta, "ball radius")->check(CLI::PositiveNumber);
    r.add("--order-cap", order_cap, "largest resonance order searched");
    r.add("-n,--samples", n, "number of samples")->check(CLI::PositiveNumber);
    r.add("--seed", seed, "sampler seed");
  }

  Json run(Context& ctx) const {
    ResonanceConfig cfg;
    cfg.delta = delta;
    cfg.cap = order_cap;
    cfg.band = ResonanceBand::from_mean_log(delta);
    cfg.validate();
    const auto st = resonance_statistics(n, cfg, seed, ctx.workers);
    return {{"mean_log10_order", st.mean_log10},
            {"sigma", st.sigma},
            {"misclassified_fraction", st.misclassified_fraction},
            {"below_fraction", st.below_fraction},
            {"above_fraction", st.above_fraction},
            {"beyond_cap", st.beyond_cap},
            {"band", {cfg.band.lower, cfg.band.upper}}};
  }
};

struct Fit {
  std::string input;
  double a_min = 0.02;
  double a_max = 0.99;

  void add_to(Registry& r) {
    r.add("--input", input, "records.csv from scan1d")->required();
    r.add("--a-min", a_min, "fit range lower end");
    r.add("--a-max", a_max, "fit range upper end");
  }

  Json run(Context&) const {
    std::ifstream in(input);
    if (!in) throw InvalidConfig("cannot open " + input);
    std::vector<std::pair<double, Proportions>> by;
    for (const CsvRow& row : read_csv(in)) {
      if (!row.strength) throw InvalidConfig("fit: row without a_or_eps");
      const double a = *row.strength;
      auto it = std::find_if(by.begin(), by.end(), [a](const auto& e) { return e.first == a; });
      if (it == by.end()) it = by.insert(by.end(), {a, Proportions{}});
      if (row.orbit_class == "error") {
        ++it->second.errors;
      } else {
        ++it->second.counts[static_cast<std::size_t>(orbit_type_from_string(row.orbit_class))];
        ++it->second.total;
      }
    }
    if (by.empty()) throw InvalidConfig("fit: no records in " + input);
    Json mu = Json::array();
    for (const auto& [a, p] : by) mu.push_back({{"a", a}, {"mu", p.mu()}, {"total", p.total}});
    Json results = fit_json(by, a_min, a_max);
    results["mu"] = std::move(mu);
    return results;
  }
};

struct OrbitCmd {
  Classifier cls;
  Orbit orbit;
  std::string map = "torus";
  int case_id = 0;
  double eps = 0.0;
  double a = 0.0;
  std::string omega;
  bool lyapunov = false;

  void add_to(Registry& r) {
    cls.add_to(r, true);
    orbit.add_to(r);
    r.add("--map", map, "torus or circle")->check(CLI::IsMember({"torus", "circle"}));
    r.add("--case", case_id, "catalogue case 0-7 (torus)")->check(CLI::Range(0, catalog_size - 1));
    r.add("--eps", eps, "coupling strength (torus)");
    r.add("--a", a, "forcing amplitude (circle)");
    r.add("--omega", omega, "drive: Omega (circle) or Omega1,Omega2 (torus)")->required();
    r.flag("--lyapunov", lyapunov, "also compute Lyapunov exponents (torus)");
  }

  void resolve(const Registry& r) {
    if (map == "torus" && !r.given("length")) orbit.length = 1000000;
  }

  Json run(Context& ctx) const {
    const auto w = parse_list(omega, "omega");
    const ClassifierConfig cfg = cls.config(orbit.length);
    const BumpWeights<double> weights(orbit.length);
    ScanRecord rec;
    if (map == "circle") {
      if (w.size() != 1) throw InvalidConfig("omega: circle map takes one value");
      const CircleParams<double> p{w[0], a};
      p.validate();
      rec = classify_orbit(p, orbit.spec<1>(), weights, cfg);
    } else {
      if (w.size() != 2) throw InvalidConfig("omega: torus map takes Omega1,Omega2");
      const auto p = parameter_catalog(case_id).with(eps, Eigen::Vector2d(w[0], w[1]));
      p.validate();
      rec = classify_orbit(p, orbit.spec<2>(), weights, cfg, lyapunov);
    }
    ctx.records = {rec};
    ctx.has_records = true;

    Json results;
    if (!rec.orbit) {
      ctx.out << "class    = error\n";
      results["class"] = "error";
      return results;
    }
    char buf[128];
    std::string rot;
    for (Eigen::Index i = 0; i < rec.rotation.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%s%.14f", i ? ", " : "", rec.rotation(i));
      rot += buf;
    }
    ctx.out << "omega_T  = (" << rot << ")\n";
    std::snprintf(buf, sizeof buf, "%.4f", rec.digits);
    ctx.out << "dig_T    = " << buf << "\n";

    const OrbitClass& oc = *rec.orbit;
    ctx.out << "class    = " << to_string(oc.type);
    if (oc.resonance && oc.type != OrbitType::Chaotic) {
      const auto& h = *oc.resonance;
      if (rec.dim() == 2)
        ctx.out << " (" << h.m[0] << ", " << h.m[1] << ", " << h.n << ") order " << h.order;
      else
        ctx.out << " " << h.n << "/" << h.order;
    }
    ctx.out << "\n";
    if (rec.lyapunov) {
      std::snprintf(buf, sizeof buf, "%.4f, %.4f", rec.lyapunov->largest, rec.lyapunov->smallest);
      ctx.out << "lyapunov = (" << buf << ")\n";
    }

    results["rotation"] = std::vector<double>(rec.rotation.data(), rec.rotation.data() + rec.rotation.size());
    results["digits"] = rec.digits;
    results["class"] = std::string(to_string(oc.type));
    if (oc.resonance) {
      const auto& h = *oc.resonance;
      results["resonance"] = {{"m", {h.m[0], h.m[1]}}, {"n", h.n}, {"order", h.order}, {"distance", h.distance}};
    }
    if (rec.lyapunov) results["lyapunov"] = {rec.lyapunov->largest, rec.lyapunov->smallest};
    return results;
  }
};

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path, std::string& subcommand) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot read config file " + path);
  std::vector<std::string> tokens;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": empty key");
    if (key == "subcommand") subcommand = value;
    else tokens.push_back("--" + key + "=" + value);
  }
  return tokens;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  // Splice --config FILE into the argument list: subcommand first, then the
  // file's settings, then the remaining command-line arguments, so that later
  // (command-line) values win.
  std::vector<std::string> rest;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) {
        err << "error: --config requires a file\n";
        return exit_invalid_config;
      }
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  std::string sub_name;
  if (!rest.empty() && std::find(kSubcommands.begin(), kSubcommands.end(), rest.front()) != kSubcommands.end()) {
    sub_name = rest.front();
    rest.erase(rest.begin());
  }
  std::vector<std::string> file_tokens;
  if (!config_path.empty()) {
    std::string file_sub;
    try {
      file_tokens = config_tokens(config_path, file_sub);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return exit_invalid_config;
    }
    if (!file_sub.empty() && !sub_name.empty() && file_sub != sub_name) {
      err << "error: config file is for '" << file_sub << "', not '" << sub_name << "'\n";
      return exit_invalid_config;
    }
    if (sub_name.empty()) sub_name = file_sub;
  }

  CLI::App app{"Classify orbits of circle and two-torus maps by weighted Birkhoff averages.", "torus-scan"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "help for every subcommand");
  Common common;

  Scan1d scan1d;
  Scan2d scan2d;
  EpsCrit epscrit;
  StatsFarey stats_farey;
  StatsResonance stats_resonance;
  Fit fit;
  OrbitCmd orbit;

  std::map<std::string, Registry> registries;
  auto make = [&](const std::string& name, const std::string& desc) -> Registry& {
    CLI::App* sub = app.add_subcommand(name, desc);
    Registry& r = registries.emplace(name, Registry(sub)).first->second;
    r.add("--out", common.out_dir, "output directory for records.csv, summary.json, resolved.cfg", false);
    r.add("--threads", common.threads, "worker threads (default: TORUS_SCAN_THREADS or all cores)", false);
    sub->add_option("--config", config_path, "flat key = value settings file (command line overrides)");
    return r;
  };
  scan1d.add_to(make("scan1d", "Arnold circle map over an (Omega, a) grid"));
  scan2d.add_to(make("scan2d", "two-torus map over random drives and an eps grid"));
  epscrit.add_to(make("epscrit", "critical eps where det(Df) first vanishes"));
  stats_farey.add_to(make("stats-farey", "statistics of minimal Farey denominators"));
  stats_resonance.add_to(make("stats-resonance", "statistics of resonance orders"));
  fit.add_to(make("fit", "power-law fit of the irrational fraction from scan1d records"));
  orbit.add_to(make("orbit", "classify a single orbit"));

  std::vector<std::string> argv;
  if (!sub_name.empty()) argv.push_back(sub_name);
  argv.insert(argv.end(), file_tokens.begin(), file_tokens.end());
  argv.insert(argv.end(), rest.begin(), rest.end());
  std::reverse(argv.begin(), argv.end());  // CLI11 consumes a reversed vector

  try {
    app.parse(argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_invalid_config;
  }

  CLI::App* chosen = app.get_subcommands().front();
  const std::string name = chosen->get_name();
  const Registry& reg = registries.at(name);
  if (name == "scan1d") scan1d.resolve(reg);
  if (name == "scan2d") scan2d.resolve(reg);
  if (name == "orbit") orbit.resolve(reg);

  Context ctx{out, err, common.threads ? common.threads : default_workers(), {}, false};
  Json results;
  try {
    if (name == "scan1d") results = scan1d.run(ctx);
    else if (name == "scan2d") results = scan2d.run(ctx);
    else if (name == "epscrit") results = epscrit.run(ctx);
    else if (name == "stats-farey") results = stats_farey.run(ctx);
    else if (name == "stats-resonance") results = stats_resonance.run(ctx);
    else if (name == "fit") results = fit.run(ctx);
    else results = orbit.run(ctx);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return exit_invalid_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_failure;
  }

  const auto resolved = reg.resolved();
  const std::size_t failures = ctx.has_records ? count_errors(ctx.records) : 0;

  Json summary;
  summary["schema"] = 1;
  summary["subcommand"] = name;
  summary["config"] = config_json(resolved);
  summary["failed_orbits"] = failures;
  summary["results"] = std::move(results);
  const std::string summary_text = summary.dump(2) + "\n";

  std::string cfg_text = "subcommand = " + name + "\n";
  for (const auto& [k, v] : resolved) cfg_text += k + " = " + v + "\n";

  if (name != "orbit") out << summary_text;
  if (failures) err << "warning: " << failures << " orbit(s) failed numerically and were recorded as 'error'\n";

  if (!common.out_dir.empty()) {
    try {
      const std::filesystem::path dir(common.out_dir);
      std::filesystem::create_directories(dir);
      write_text(dir / "summary.json", summary_text);
      write_text(dir / "resolved.cfg", cfg_text);
      if (ctx.has_records) {
        std::ostringstream csv;
        write_csv(csv, ctx.records);
        write_text(dir / "records.csv", csv.str());
      }
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return exit_failure;
    }
  }
  return exit_ok;
}

}  // namespace torus::cli
