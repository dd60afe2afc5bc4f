#include "torus/maps.hpp"

#include <array>
#include <cstdio>
#include <map>
#include <sstream>
#include <string_view>

namespace torus {

namespace {

struct CatalogRow {
  std::array<double, 4> amps;
  std::array<double, 4> phases;
};

// Values to the printed precision, including the shorter phi_2 in case 5.
constexpr std::array<CatalogRow, catalog_size> kCatalog = {{
    {{0.221320306832860, 0.220593736048273, 0.152270586812051, 0.405815370306816},
     {0.369246781120215, 0.111202755293787, 0.780252068321138, 0.389738836961253}},
    {{0.406588842221655, 0.062715680327705, 0.179066359898821, 0.351629117551819},
     {0.957506835434298, 0.964888535199277, 0.157613081677548, 0.970592781760616}},
    {{0.211681398612178, 0.317651811580494, 0.375591536887180, 0.095075252920149},
     {0.273022072458714, 0.542430207288253, 0.431224181579691, 0.153093675447227}},
    {{0.012536281513538, 0.465737538631897, 0.503609970119032, 0.018116209735533},
     {0.739790415703666, 0.023926884448995, 0.490328482174893, 0.304888898615625}},
    {{0.760566444256527, 0.0, 0.0, 0.239433555743473},
     {0.739790415703666, 0.023926884448995, 0.490328482174893, 0.304888898615625}},
    {{0.0, 0.760566444256527, 0.239433555743473, 0.0},
     {0.739790415703666, 0.02392688444899, 0.490328482174893, 0.304888898615625}},
    {{0.007280035519179, 0.942703650246408, 0.039647117954398, 0.010369196280015},
     {0.384398913909761, 0.203897175276146, 0.913862879483257, 0.191420654770675}},
    {{0.0, 0.352156017226267, 0.0, 0.647843982773733},
     {0.369246781120215, 0.111202755293787, 0.780252068321138, 0.389738836961253}},
}};

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("parameter file line " + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r");
      auto e = s.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

double parse_real(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw std::invalid_argument("parameter '" + key + "': not a number: '" + value + "'");
  return v;
}

}  // namespace

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Torus2Params<double> parameter_catalog(int case_id) {
  if (case_id < 0 || case_id >= catalog_size)
    throw std::invalid_argument("unknown catalogue case " + std::to_string(case_id) + " (expected 0..7)");
  const CatalogRow& row = kCatalog[static_cast<std::size_t>(case_id)];
  Torus2Params<double> p;
  for (int i = 0; i < 4; ++i) {
    p.amps(i) = row.amps[static_cast<std::size_t>(i)];
    p.phases(i) = row.phases[static_cast<std::size_t>(i)];
  }
  p.reduce_phases();
  return p;
}

std::string to_config(const Torus2Params<double>& params) {
  std::ostringstream out;
  out << "omega1 = " << format_real(params.omega(0)) << '\n'
      << "omega2 = " << format_real(params.omega(1)) << '\n'
      << "eps = " << format_real(params.eps) << '\n';
  for (int i = 0; i < 4; ++i) out << 'a' << i + 1 << " = " << format_real(params.amps(i)) << '\n';
  for (int i = 0; i < 4; ++i) out << "phi" << i + 1 << " = " << format_real(params.phases(i)) << '\n';
  return out.str();
}

std::string to_config(const CircleParams<double>& params) {
  std::ostringstream out;
  out << "omega = " << format_real(params.omega) << '\n' << "a = " << format_real(params.a) << '\n';
  return out.str();
}

Torus2Params<double> torus_params_from_config(const std::string& text) {
  Torus2Params<double> p;
  for (const auto& [key, value] : parse_key_values(text)) {
    double v = parse_real(key, value);
    if (key == "omega1") p.omega(0) = v;
    else if (key == "omega2") p.omega(1) = v;
    else if (key == "eps") p.eps = v;
    else if (key.size() == 2 && key[0] == 'a' && key[1] >= '1' && key[1] <= '4') p.amps(key[1] - '1') = v;
    else if (key.size() == 4 && key.rfind("phi", 0) == 0 && key[3] >= '1' && key[3] <= '4') p.phases(key[3] - '1') = v;
    else throw std::invalid_argument("unknown torus parameter '" + key + "'");
  }
  p.reduce_phases();
  p.validate();
  return p;
}

CircleParams<double> circle_params_from_config(const std::string& text) {
  CircleParams<double> p;
  for (const auto& [key, value] : parse_key_values(text)) {
    double v = parse_real(key, value);
    if (key == "omega") p.omega = v;
    else if (key == "a") p.a = v;
    else throw std::invalid_argument("unknown circle parameter '" + key + "'");
  }
  p.validate();
  return p;
}

}  // namespace torus
