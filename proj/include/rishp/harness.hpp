#ifndef RISHP_HARNESS_HPP
#define RISHP_HARNESS_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rishp/baselines.hpp"
#include "rishp/config.hpp"

namespace rishp {

enum class Scheme { ProposedFull, ProposedPCS, UpBound, FdBsOptRis, HpBsRndRis, HpBsNoRis };
enum class SweepVariable { R, SNR };

std::string to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);
std::string to_string(SweepVariable var);
SweepVariable parse_sweep_variable(std::string_view name);

/// Every scheme, in report order.
std::vector<Scheme> all_schemes();

struct SweepSpec {
  SweepVariable variable = SweepVariable::R;
  std::vector<double> values;
  int trials = 1;
  std::vector<Scheme> schemes;
  std::uint64_t seed = 1;
  int jobs = 1;  // worker threads; results do not depend on it
};

/// Default grids: R over perfect squares up to 100 at -10 dB, and SNR from
/// -30 dB to 0 dB in 5 dB steps at R = 100.
SweepSpec default_sweep(SweepVariable variable);

void validate_sweep(const SweepSpec& spec, const SystemConfig& cfg);

struct SchemeStats {
  double sweep_value = 0.0;
  std::string scheme;
  double mean_se = 0.0;
  double stderr_se = 0.0;
  double mean_mse = 0.0;
  double mean_iters = 0.0;
  int trials = 0;         // trials aggregated
  int failed_trials = 0;  // trials dropped because some scheme failed on them

  bool operator==(const SchemeStats&) const = default;
};

struct Provenance {
  std::string version;
  std::uint64_t seed = 0;
  int trials = 0;
  std::string sweep_var;
  std::vector<double> sweep_values;
  std::vector<std::string> schemes;
  std::vector<std::pair<std::string, std::string>> config;

  bool operator==(const Provenance&) const = default;
};

struct SweepReport {
  std::string sweep_var;
  std::vector<SchemeStats> rows;  // sweep-value major, then scheme in spec order
  Provenance provenance;

  bool operator==(const SweepReport&) const = default;
};

/// Per-trial result, kept for paired statistics and channel-reuse checks.
struct TrialSample {
  int point = 0;  // index into SweepSpec::values
  int trial = 0;
  Scheme scheme = Scheme::ProposedFull;
  double se = 0.0;
  double mse_bar = 0.0;
  int iterations = 0;
  std::uint64_t channel_hash = 0;
  bool ok = false;
};

struct SweepOutcome {
  SweepReport report;
  std::vector<TrialSample> samples;  // point-major, then trial, then scheme
};

/// Runs one trial for one scheme on given channels.
RunResult run_scheme(Scheme scheme, const ChannelSet& channels, const SystemConfig& cfg, Rng& rng);

/// Config for sweep point `value`.
SystemConfig config_at(const SystemConfig& base, SweepVariable variable, double value);

SweepOutcome run_sweep_detailed(const SweepSpec& spec, const SystemConfig& cfg);
SweepReport run_sweep(const SweepSpec& spec, const SystemConfig& cfg);

std::string to_csv(const SweepReport& report);
std::string to_json(const SweepReport& report);
SweepReport report_from_json(std::string_view text);

void emit_csv(const SweepReport& report, const std::string& path);
void emit_json(const SweepReport& report, const std::string& path);

}  // namespace rishp

#endif  // RISHP_HARNESS_HPP
