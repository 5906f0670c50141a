#include "cellforce/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "cellforce/errors.hpp"

namespace cellforce {

namespace {

std::string trim(const std::string& s) {
  auto is_space = [](unsigned char c) { return std::isspace(c) != 0; };
  auto b = std::find_if_not(s.begin(), s.end(), is_space);
  auto e = std::find_if_not(s.rbegin(), s.rend(), is_space).base();
  return b < e ? std::string(b, e) : std::string();
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'");
  return out;
}

long long to_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  const std::string s = lower(v);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(v);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

Approach parse_approach(const std::string& v) {
  const std::string s = lower(v);
  if (s == "immersed") return Approach::Immersed;
  if (s == "hole") return Approach::Hole;
  if (s == "adjusted" || s == "adjusted_immersed") return Approach::AdjustedImmersed;
  throw ConfigError("unknown approach '" + v + "'");
}

}  // namespace

ExperimentKind parse_kind(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  if (s == "IMMERSED") return ExperimentKind::Immersed;
  if (s == "HOLE") return ExperimentKind::Hole;
  if (s == "ADJUSTED_IMMERSED") return ExperimentKind::AdjustedImmersed;
  if (s == "GAMMA_SWEEP") return ExperimentKind::GammaSweep;
  if (s == "POLY_DEGREE_SWEEP") return ExperimentKind::PolyDegreeSweep;
  if (s == "MULTICELL") return ExperimentKind::Multicell;
  if (s == "CONVERGENCE_STUDY") return ExperimentKind::ConvergenceStudy;
  if (s == "GREENS_DIVERGENCE") return ExperimentKind::GreensDivergence;
  throw ConfigError("unknown experiment kind '" + text + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Immersed: return "IMMERSED";
    case ExperimentKind::Hole: return "HOLE";
    case ExperimentKind::AdjustedImmersed: return "ADJUSTED_IMMERSED";
    case ExperimentKind::GammaSweep: return "GAMMA_SWEEP";
    case ExperimentKind::PolyDegreeSweep: return "POLY_DEGREE_SWEEP";
    case ExperimentKind::Multicell: return "MULTICELL";
    case ExperimentKind::ConvergenceStudy: return "CONVERGENCE_STUDY";
    case ExperimentKind::GreensDivergence: return "GREENS_DIVERGENCE";
  }
  return "?";
}

std::string to_string(Approach approach) {
  switch (approach) {
    case Approach::Immersed: return "immersed";
    case Approach::Hole: return "hole";
    case Approach::AdjustedImmersed: return "adjusted";
  }
  return "?";
}

void ExperimentConfig::validate() const {
  auto positive = [](const char* name, double v) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  positive("half_length", half_length);
  positive("omega_w", omega_w);
  if (omega_w >= half_length) throw ConfigError("omega_w must be smaller than half_length");
  positive("E", E);
  if (!(nu >= 0.0 && nu < 0.5)) throw ConfigError("nu must lie in [0, 0.5)");
  if (!(kappa >= 0.0)) throw ConfigError("kappa must be non-negative");
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be non-negative");
  if (!(P >= 0.0)) throw ConfigError("P must be non-negative");
  positive("R", R);
  positive("lambda", lambda);
  if (n_polygon < 3) throw ConfigError("n_polygon must be at least 3");
  positive("h", h);
  if (levels < 1 || levels > 8) throw ConfigError("levels must lie in [1, 8]");
  if (kind == ExperimentKind::ConvergenceStudy && levels < 3)
    throw ConfigError("a convergence study needs at least 3 levels");
  if (repeats < 1) throw ConfigError("repeats must be at least 1");
  if (gammas.empty()) throw ConfigError("gammas must not be empty");
  for (double g : gammas)
    if (!(g > 0.0)) throw ConfigError("gammas must be positive");
  if (degrees.empty()) throw ConfigError("degrees must not be empty");
  for (int d : degrees)
    if (d < 3) throw ConfigError("degrees must be at least 3");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig c;
  c.kind = kind;
  switch (kind) {
    case ExperimentKind::Multicell:
    case ExperimentKind::PolyDegreeSweep:
      c.P = 10.0;
      c.R = 0.1;
      c.lambda = 15.0;
      c.n_polygon = 8;
      c.equal_area = true;
      c.conserve_total = true;
      c.h = 0.25;
      c.repeats = 5;
      break;
    case ExperimentKind::ConvergenceStudy:
      c.levels = 3;
      break;
    case ExperimentKind::GreensDivergence:
      c.h = 1.0;
      c.levels = 4;
      c.nu = 0.3;
      break;
    default:
      break;
  }
  return c;
}

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (kv.count(key)) throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    kv[key] = value;
  }
  return kv;
}

ExperimentConfig build_config(const KeyValues& values, std::optional<ExperimentKind> fallback_kind) {
  ExperimentKind kind = fallback_kind.value_or(ExperimentKind::Hole);
  if (auto it = values.find("kind"); it != values.end()) kind = parse_kind(it->second);
  ExperimentConfig c = default_config(kind);

  for (const auto& [key, v] : values) {
    if (key == "kind") continue;
    if (key == "seed") {
      const long long s = to_integer(key, v);
      if (s < 0) throw ConfigError("seed must be non-negative");
      c.seed = static_cast<std::uint64_t>(s);
    } else if (key == "out_dir") {
      c.out_dir = v;
    } else if (key == "half_length") {
      c.half_length = to_double(key, v);
    } else if (key == "omega_w") {
      c.omega_w = to_double(key, v);
    } else if (key == "E") {
      c.E = to_double(key, v);
    } else if (key == "nu") {
      c.nu = to_double(key, v);
    } else if (key == "kappa") {
      c.kappa = to_double(key, v);
    } else if (key == "gamma") {
      c.gamma = to_double(key, v);
    } else if (key == "P") {
      c.P = to_double(key, v);
    } else if (key == "R") {
      c.R = to_double(key, v);
    } else if (key == "lambda") {
      c.lambda = to_double(key, v);
    } else if (key == "placement") {
      const std::string s = lower(v);
      if (s == "omega_w") {
        c.placement = Placement::OmegaW;
      } else if (s == "domain") {
        c.placement = Placement::Domain;
      } else {
        throw ConfigError("placement must be omega_w or domain");
      }
    } else if (key == "n_polygon") {
      c.n_polygon = static_cast<int>(to_integer(key, v));
    } else if (key == "equal_area") {
      c.equal_area = to_bool(key, v);
    } else if (key == "conserve_total") {
      c.conserve_total = to_bool(key, v);
    } else if (key == "phase") {
      c.phase = to_double(key, v);
    } else if (key == "cells_file") {
      c.cells_file = v;
    } else if (key == "h") {
      c.h = to_double(key, v);
    } else if (key == "levels") {
      c.levels = static_cast<int>(to_integer(key, v));
    } else if (key == "gammas") {
      c.gammas.clear();
      for (const auto& item : split_list(v)) c.gammas.push_back(to_double(key, item));
    } else if (key == "degrees") {
      c.degrees.clear();
      for (const auto& item : split_list(v)) c.degrees.push_back(static_cast<int>(to_integer(key, item)));
    } else if (key == "approach") {
      c.approach = parse_approach(v);
    } else if (key == "load") {
      const std::string s = lower(v);
      if (s == "cell") {
        c.load = StudyLoadKind::Cell;
      } else if (s == "manufactured") {
        c.load = StudyLoadKind::Manufactured;
      } else {
        throw ConfigError("load must be cell or manufactured");
      }
    } else if (key == "repeats") {
      c.repeats = static_cast<int>(to_integer(key, v));
    } else {
      throw ConfigError("unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

std::pair<std::string, std::string> split_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + text + "' is not key=value");
  std::string key = trim(text.substr(0, eq));
  if (key.empty()) throw ConfigError("override '" + text + "' has an empty key");
  return {key, trim(text.substr(eq + 1))};
}

ExperimentConfig load_config(const std::string& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  KeyValues kv = parse_key_values(in);
  for (const auto& o : overrides) {
    auto [k, v] = split_override(o);
    kv[k] = v;
  }
  return build_config(kv);
}

std::string config_snapshot(const ExperimentConfig& c) {
  std::ostringstream out;
  out << std::setprecision(17);
  auto join = [](const auto& xs) {
    std::ostringstream s;
    s << std::setprecision(17);
    for (std::size_t i = 0; i < xs.size(); ++i) s << (i ? "," : "") << xs[i];
    return s.str();
  };
  out << "kind = " << to_string(c.kind) << '\n'
      << "seed = " << c.seed << '\n'
      << "half_length = " << c.half_length << '\n'
      << "omega_w = " << c.omega_w << '\n'
      << "E = " << c.E << '\n'
      << "nu = " << c.nu << '\n'
      << "kappa = " << c.kappa << '\n'
      << "gamma = " << c.gamma << '\n'
      << "P = " << c.P << '\n'
      << "R = " << c.R << '\n'
      << "lambda = " << c.lambda << '\n'
      << "placement = " << (c.placement == Placement::OmegaW ? "omega_w" : "domain") << '\n'
      << "n_polygon = " << c.n_polygon << '\n'
      << "equal_area = " << (c.equal_area ? "true" : "false") << '\n'
      << "conserve_total = " << (c.conserve_total ? "true" : "false") << '\n'
      << "phase = " << c.phase << '\n'
      << "cells_file = " << c.cells_file << '\n'
      << "h = " << c.h << '\n'
      << "levels = " << c.levels << '\n'
      << "gammas = " << join(c.gammas) << '\n'
      << "degrees = " << join(c.degrees) << '\n'
      << "approach = " << to_string(c.approach) << '\n'
      << "load = " << (c.load == StudyLoadKind::Cell ? "cell" : "manufactured") << '\n'
      << "repeats = " << c.repeats << '\n';
  return out.str();
}

}  // namespace cellforce
