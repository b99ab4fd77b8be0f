#include "rishp/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

#include <fmt/format.h>

namespace rishp {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError(fmt::format("invalid value '{}' for key '{}'", value, key));
  }
  return out;
}

// std::from_chars for double is unavailable on older libstdc++.
double parse_real(std::string_view key, std::string_view value) {
  const std::string text(value);
  std::size_t used = 0;
  double out = 0.0;
  try {
    out = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw ConfigError(fmt::format("invalid value '{}' for key '{}'", value, key));
  }
  return out;
}

}  // namespace

int exact_sqrt(int n) {
  if (n < 0) return -1;
  int root = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return root * root == n ? root : -1;
}

SystemConfig validate_config(const SystemConfig& cfg) {
  if (cfg.M < 1) throw ConfigError("M >= 1 violated");
  if (cfg.K < 1) throw ConfigError("K >= 1 violated");
  if (cfg.K > cfg.N_RF) throw ConfigError("K ≤ N_RF violated");
  if (cfg.N_RF > cfg.M) throw ConfigError("N_RF ≤ M violated");
  if (cfg.R < 1) throw ConfigError("R >= 1 violated");
  if (exact_sqrt(cfg.R) < 0) throw ConfigError("R not a perfect square");
  if (cfg.L_B < 1) throw ConfigError("L_B >= 1 violated");
  if (cfg.L_I < 1) throw ConfigError("L_I >= 1 violated");
  if (!(cfg.P > 0.0) || !std::isfinite(cfg.P)) throw ConfigError("P > 0 violated");
  if (!std::isfinite(cfg.snr_db)) throw ConfigError("snr_db must be finite");
  if (!(cfg.d_over_lambda > 0.0) || !std::isfinite(cfg.d_over_lambda)) {
    throw ConfigError("d_over_lambda > 0 violated");
  }
  if (cfg.analog_structure == AnalogStructure::PartiallyConnected && cfg.M % cfg.N_RF != 0) {
    throw ConfigError("N_RF divides M violated (partially connected)");
  }
  if (cfg.max_iters < 1) throw ConfigError("max_iters >= 1 violated");
  if (!(cfg.tol >= 0.0)) throw ConfigError("tol >= 0 violated");
  return cfg;
}

double noise_variance(double snr_db, int K) {
  if (K < 1) throw ConfigError("K >= 1 violated");
  return std::pow(10.0, -snr_db / 10.0) / K;
}

std::string to_string(AnalogStructure s) {
  return s == AnalogStructure::FullyConnected ? "full" : "pcs";
}

AnalogStructure parse_analog_structure(std::string_view s) {
  if (s == "full" || s == "FullyConnected") return AnalogStructure::FullyConnected;
  if (s == "pcs" || s == "PartiallyConnected") return AnalogStructure::PartiallyConnected;
  throw ConfigError(fmt::format("unknown analog_structure '{}'", s));
}

void apply_setting(SystemConfig& cfg, std::string_view key, std::string_view value) {
  value = trim(value);
  if (key == "M") cfg.M = parse_number<int>(key, value);
  else if (key == "N_RF") cfg.N_RF = parse_number<int>(key, value);
  else if (key == "K") cfg.K = parse_number<int>(key, value);
  else if (key == "R") cfg.R = parse_number<int>(key, value);
  else if (key == "L_B") cfg.L_B = parse_number<int>(key, value);
  else if (key == "L_I") cfg.L_I = parse_number<int>(key, value);
  else if (key == "P") cfg.P = parse_real(key, value);
  else if (key == "snr_db") cfg.snr_db = parse_real(key, value);
  else if (key == "d_over_lambda") cfg.d_over_lambda = parse_real(key, value);
  else if (key == "analog_structure") cfg.analog_structure = parse_analog_structure(value);
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "max_iters") cfg.max_iters = parse_number<int>(key, value);
  else if (key == "tol") cfg.tol = parse_real(key, value);
  else throw ConfigError(fmt::format("unknown config key '{}'", key));
}

SystemConfig parse_config(std::istream& in) {
  SystemConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value'", lineno));
    }
    apply_setting(cfg, trim(view.substr(0, eq)), view.substr(eq + 1));
  }
  return validate_config(cfg);
}

SystemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot open config file '{}'", path));
  return parse_config(in);
}

std::vector<std::pair<std::string, std::string>> config_entries(const SystemConfig& cfg) {
  return {
      {"M", std::to_string(cfg.M)},
      {"N_RF", std::to_string(cfg.N_RF)},
      {"K", std::to_string(cfg.K)},
      {"R", std::to_string(cfg.R)},
      {"L_B", std::to_string(cfg.L_B)},
      {"L_I", std::to_string(cfg.L_I)},
      {"P", fmt::format("{:.17g}", cfg.P)},
      {"snr_db", fmt::format("{:.17g}", cfg.snr_db)},
      {"d_over_lambda", fmt::format("{:.17g}", cfg.d_over_lambda)},
      {"analog_structure", to_string(cfg.analog_structure)},
      {"seed", std::to_string(cfg.seed)},
      {"max_iters", std::to_string(cfg.max_iters)},
      {"tol", fmt::format("{:.17g}", cfg.tol)},
  };
}

}  // namespace rishp
