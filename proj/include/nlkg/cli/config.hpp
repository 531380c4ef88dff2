#pragma once

// Run configuration: flat `key = value` text, '#' starts a comment.
// Lists are comma separated ("64, 64").

#include "nlkg/evolve/evolve.hpp"
#include "nlkg/exponents/exponents.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace nlkg {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class HorizonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class DataKind { gaussian, bump, file };

inline const char* to_string(DataKind k) {
  switch (k) {
    case DataKind::gaussian: return "gaussian";
    case DataKind::bump: return "bump";
    case DataKind::file: return "file";
  }
  return "?";
}

inline const char* sign_name(Sign s) {
  switch (s) {
    case Sign::defocusing: return "-1";
    case Sign::off: return "0";
    case Sign::focusing: return "+1";
  }
  return "?";
}

struct RunConfig {
  DomainSpec domain;
  Rational p_exact{3};
  EvolveConfig evolve;
  DataKind data_kind = DataKind::bump;
  double data_amplitude = 0.01;
  double data_radius = 5.0;
  std::string data_file;
  std::uint64_t seed = 0;
  std::string output_dir = "run";
  double tol = 1e-10;
  int max_iter = 50;
  bool unsafe_horizon = false;
  std::optional<double> gamma;  // weighted scattering report

  std::vector<std::string> warnings;
  TheoremVerdicts verdicts;
};

using ConfigMap = std::map<std::string, std::string>;

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "d",         "k",         "p",          "sign",           "box_lengths",    "torus_lengths", "nx",
      "ny",        "dt",        "T",          "snapshot_stride", "data_kind",     "data_amplitude", "data_radius",
      "data_file", "seed",      "output_dir", "tol",            "max_iter",       "unsafe_horizon", "gamma",
      "blowup_ceiling"};
  return keys;
}

inline const std::vector<std::string>& required_config_keys() {
  static const std::vector<std::string> keys = {"d",  "k",  "p",  "sign", "box_lengths", "torus_lengths",
                                                "nx", "ny", "dt", "T"};
  return keys;
}

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline bool is_known_key(const std::string& k) {
  for (const auto& key : config_keys())
    if (key == k) return true;
  return false;
}

inline double as_real(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size() || !std::isfinite(x)) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected a real number, got '" + v + "'");
  }
}

inline long long as_integer(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("config key '" + key + "': expected an integer, got '" + v + "'");
  }
}

inline bool as_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

inline std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline std::vector<double> as_real_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& s : split_list(v)) out.push_back(as_real(key, s));
  return out;
}

inline std::vector<int> as_int_list(const std::string& key, const std::string& v) {
  std::vector<int> out;
  for (const auto& s : split_list(v)) out.push_back(static_cast<int>(as_integer(key, s)));
  return out;
}

inline Sign as_sign(const std::string& v) {
  if (v == "+1" || v == "1" || v == "focusing") return Sign::focusing;
  if (v == "-1" || v == "defocusing") return Sign::defocusing;
  if (v == "0" || v == "off") return Sign::off;
  throw ConfigError("config key 'sign': expected +1, -1 or 0, got '" + v + "'");
}

}  // namespace detail

inline ConfigMap parse_config_text(const std::string& text) {
  ConfigMap out;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (!detail::is_known_key(key)) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (out.count(key)) throw ConfigError("config key '" + key + "' given twice");
    out[key] = value;
  }
  return out;
}

inline ConfigMap read_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

/// Radius outside which the initial data is negligible (< 1e-8 relative).
inline double effective_radius(DataKind kind, double radius) {
  return kind == DataKind::gaussian ? radius * std::sqrt(std::log(1e8)) : radius;
}

/// Finite-speed bound (min box length - 2R)/2 for data supported in radius R.
inline double validity_horizon(const DomainSpec& s, double support_radius) {
  double lmin = s.box_lengths.front();
  for (double l : s.box_lengths) lmin = std::min(lmin, l);
  return 0.5 * (lmin - 2.0 * support_radius);
}

inline RunConfig build_config(const ConfigMap& m) {
  for (const auto& [key, value] : m)
    if (!detail::is_known_key(key)) throw ConfigError("unknown config key '" + key + "'");
  for (const auto& key : required_config_keys())
    if (!m.count(key)) throw ConfigError("missing required config key '" + key + "'");
  auto get = [&](const char* key) -> const std::string& { return m.at(key); };

  RunConfig c;
  c.domain.d = static_cast<int>(detail::as_integer("d", get("d")));
  c.domain.k = static_cast<int>(detail::as_integer("k", get("k")));
  c.domain.box_lengths = detail::as_real_list("box_lengths", get("box_lengths"));
  c.domain.torus_lengths = detail::as_real_list("torus_lengths", get("torus_lengths"));
  c.domain.nx = detail::as_int_list("nx", get("nx"));
  c.domain.ny = detail::as_int_list("ny", get("ny"));
  try {
    validate(c.domain);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  try {
    c.p_exact = parse_rational(get("p"));
  } catch (const std::exception&) {
    throw ConfigError("config key 'p': expected a rational or finite decimal, got '" + get("p") + "'");
  }
  c.evolve.p = to_double(c.p_exact);
  c.evolve.sign = detail::as_sign(get("sign"));
  c.evolve.dt = detail::as_real("dt", get("dt"));
  c.evolve.T = detail::as_real("T", get("T"));
  if (m.count("snapshot_stride"))
    c.evolve.snapshot_stride = static_cast<int>(detail::as_integer("snapshot_stride", get("snapshot_stride")));
  if (m.count("blowup_ceiling")) c.evolve.blowup_ceiling = detail::as_real("blowup_ceiling", get("blowup_ceiling"));
  try {
    c.evolve.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (m.count("data_kind")) {
    const auto& v = get("data_kind");
    if (v == "gaussian")
      c.data_kind = DataKind::gaussian;
    else if (v == "bump")
      c.data_kind = DataKind::bump;
    else if (v == "file")
      c.data_kind = DataKind::file;
    else
      throw ConfigError("config key 'data_kind': expected gaussian, bump or file, got '" + v + "'");
  }
  if (m.count("data_amplitude")) c.data_amplitude = detail::as_real("data_amplitude", get("data_amplitude"));
  if (m.count("data_radius")) c.data_radius = detail::as_real("data_radius", get("data_radius"));
  if (!(c.data_radius > 0.0)) throw ConfigError("config key 'data_radius': must be positive");
  if (m.count("data_file")) c.data_file = get("data_file");
  if (c.data_kind == DataKind::file && c.data_file.empty())
    throw ConfigError("config key 'data_file' is required when data_kind = file");
  if (m.count("seed")) {
    const auto s = detail::as_integer("seed", get("seed"));
    if (s < 0) throw ConfigError("config key 'seed': must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (m.count("output_dir")) c.output_dir = get("output_dir");
  if (m.count("tol")) c.tol = detail::as_real("tol", get("tol"));
  if (!(c.tol > 0.0)) throw ConfigError("config key 'tol': must be positive");
  if (m.count("max_iter")) c.max_iter = static_cast<int>(detail::as_integer("max_iter", get("max_iter")));
  if (c.max_iter < 1) throw ConfigError("config key 'max_iter': must be >= 1");
  if (m.count("unsafe_horizon")) c.unsafe_horizon = detail::as_bool("unsafe_horizon", get("unsafe_horizon"));
  if (m.count("gamma")) {
    c.gamma = detail::as_real("gamma", get("gamma"));
    if (!(*c.gamma >= 0.0)) throw ConfigError("config key 'gamma': must be >= 0");
  }

  std::optional<Rational> gamma_exact;
  if (m.count("gamma")) {
    try {
      gamma_exact = parse_rational(get("gamma"));
    } catch (const std::exception&) {
    }
  }
  c.verdicts = theorem_applicability(c.domain.d, c.domain.k, c.p_exact, gamma_exact);
  const auto describe = [](const char* name, const Verdict& v) {
    std::string s = std::string(name) + " not applicable:";
    for (const auto& f : v.failed_conditions) s += " " + f;
    return s;
  };
  if (!c.verdicts.thm1.applicable) c.warnings.push_back(describe("thm1 (energy-space scattering)", c.verdicts.thm1));
  if (!c.verdicts.thm2.applicable) c.warnings.push_back(describe("thm2 (anisotropic scattering)", c.verdicts.thm2));
  if (c.verdicts.thm1.applicable && c.verdicts.thm1.route == Route::MorreyFiniteVolume)
    c.warnings.push_back("p below p_sob: compact-factor route is MorreyFiniteVolume (k < 2 gamma)");
  return c;
}

/// Throws HorizonError when T exceeds the finite-speed bound and the override is off.
/// `support_radius` overrides the generator radius (used for file data).
inline void check_horizon(const RunConfig& c, std::optional<double> support_radius = std::nullopt) {
  const double r = support_radius ? *support_radius : effective_radius(c.data_kind, c.data_radius);
  const double horizon = validity_horizon(c.domain, r);
  if (c.evolve.T > horizon + 1e-12 && !c.unsafe_horizon) {
    std::ostringstream os;
    os << "T = " << c.evolve.T << " exceeds the finite-speed horizon " << horizon << " (box " << c.domain.box_lengths.front()
       << ", support radius " << r << "); set unsafe_horizon = true to override";
    throw HorizonError(os.str());
  }
}

inline RunConfig parse_config(const std::string& path) { return build_config(read_config_file(path)); }

}  // namespace nlkg
