#ifndef RISHP_CONFIG_HPP
#define RISHP_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rishp/types.hpp"

namespace rishp {

enum class AnalogStructure { FullyConnected, PartiallyConnected };

/// Scalar parameters of one simulated system. Defaults are the reference
/// operating point: 48 BS antennas, 6 RF chains serving 6 users, a 10x10
/// RIS, 5 paths per link, unit transmit power, half-wavelength spacing.
struct SystemConfig {
  int M = 48;
  int N_RF = 6;
  int K = 6;
  int R = 100;
  int L_B = 5;
  int L_I = 5;
  double P = 1.0;
  double snr_db = -10.0;
  double d_over_lambda = 0.5;
  AnalogStructure analog_structure = AnalogStructure::FullyConnected;
  std::uint64_t seed = 1;
  int max_iters = 200;
  double tol = 1e-5;

  bool operator==(const SystemConfig&) const = default;
};

/// Checks every invariant and returns `cfg` unchanged. Throws ConfigError
/// naming the first violated invariant.
SystemConfig validate_config(const SystemConfig& cfg);

/// Noise variance from SNR = 10 log10(1 / (K sigma^2)).
double noise_variance(double snr_db, int K);

/// Noise variance implied by `cfg`.
inline double noise_variance(const SystemConfig& cfg) { return noise_variance(cfg.snr_db, cfg.K); }

/// Integer square root of `n` if it is a perfect square, otherwise -1.
int exact_sqrt(int n);

std::string to_string(AnalogStructure s);
AnalogStructure parse_analog_structure(std::string_view s);

/// Sets one field by its key name. Throws ConfigError on unknown keys or
/// unparsable values. Does not validate.
void apply_setting(SystemConfig& cfg, std::string_view key, std::string_view value);

/// Parses `key = value` lines; `#` starts a comment. Result is validated.
SystemConfig parse_config(std::istream& in);
SystemConfig load_config(const std::string& path);

/// Ordered (key, value) echo of every field, in the same spelling accepted by
/// apply_setting.
std::vector<std::pair<std::string, std::string>> config_entries(const SystemConfig& cfg);

}  // namespace rishp

#endif  // RISHP_CONFIG_HPP
