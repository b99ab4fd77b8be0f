#include "rishp/harness.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

#include "rishp/metrics.hpp"

#ifndef RISHP_VERSION
#define RISHP_VERSION "0.0.0"
#endif

namespace rishp {

namespace {

using json = nlohmann::ordered_json;

constexpr std::uint64_t kChannelPurpose = 0;

std::uint64_t scheme_purpose(Scheme s) { return 1 + static_cast<std::uint64_t>(s); }

bool needs_direct(const std::vector<Scheme>& schemes) {
  for (auto s : schemes) {
    if (s == Scheme::HpBsNoRis) return true;
  }
  return false;
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path));
  out << contents;
  out.flush();
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path));
}

}  // namespace

std::string to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::ProposedFull: return "proposed-full";
    case Scheme::ProposedPCS: return "proposed-pcs";
    case Scheme::UpBound: return to_string(BaselineKind::UpBound);
    case Scheme::FdBsOptRis: return to_string(BaselineKind::FdBsOptRis);
    case Scheme::HpBsRndRis: return to_string(BaselineKind::HpBsRndRis);
    case Scheme::HpBsNoRis: return to_string(BaselineKind::HpBsNoRis);
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (auto s : all_schemes()) {
    if (name == to_string(s)) return s;
  }
  throw ConfigError(fmt::format("unknown scheme '{}'", name));
}

std::string to_string(SweepVariable var) { return var == SweepVariable::R ? "R" : "SNR"; }

SweepVariable parse_sweep_variable(std::string_view name) {
  if (name == "r" || name == "R") return SweepVariable::R;
  if (name == "snr" || name == "SNR") return SweepVariable::SNR;
  throw ConfigError(fmt::format("unknown sweep variable '{}'", name));
}

std::vector<Scheme> all_schemes() {
  return {Scheme::ProposedFull, Scheme::ProposedPCS, Scheme::UpBound,
          Scheme::FdBsOptRis,   Scheme::HpBsRndRis,  Scheme::HpBsNoRis};
}

SweepSpec default_sweep(SweepVariable variable) {
  SweepSpec spec;
  spec.variable = variable;
  if (variable == SweepVariable::R) {
    spec.values = {25, 36, 49, 64, 81, 100};
  } else {
    spec.values = {-30, -25, -20, -15, -10, -5, 0};
  }
  spec.trials = 100;
  spec.schemes = all_schemes();
  return spec;
}

SystemConfig config_at(const SystemConfig& base, SweepVariable variable, double value) {
  SystemConfig cfg = base;
  if (variable == SweepVariable::R) {
    if (value != std::floor(value)) throw ConfigError(fmt::format("R sweep value {} is not an integer", value));
    cfg.R = static_cast<int>(value);
  } else {
    cfg.snr_db = value;
  }
  return cfg;
}

void validate_sweep(const SweepSpec& spec, const SystemConfig& cfg) {
  if (spec.values.empty()) throw ConfigError("sweep needs at least one value");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    if (!(spec.values[i] > spec.values[i - 1])) throw ConfigError("sweep values must be strictly increasing");
  }
  if (spec.trials < 1) throw ConfigError("trial count >= 1 violated");
  if (spec.schemes.empty()) throw ConfigError("at least one scheme is required");
  for (std::size_t i = 0; i < spec.schemes.size(); ++i) {
    for (std::size_t j = i + 1; j < spec.schemes.size(); ++j) {
      if (spec.schemes[i] == spec.schemes[j]) throw ConfigError("duplicate scheme in sweep");
    }
  }
  if (spec.jobs < 1) throw ConfigError("jobs >= 1 violated");
  for (double v : spec.values) {
    SystemConfig point = config_at(cfg, spec.variable, v);
    validate_config(point);
    for (auto s : spec.schemes) {
      if (s == Scheme::ProposedPCS) {
        point.analog_structure = AnalogStructure::PartiallyConnected;
        validate_config(point);
      }
    }
  }
}

RunResult run_scheme(Scheme scheme, const ChannelSet& channels, const SystemConfig& cfg, Rng& rng) {
  switch (scheme) {
    case Scheme::ProposedFull: {
      SystemConfig full = cfg;
      full.analog_structure = AnalogStructure::FullyConnected;
      return solve_joint(channels, full, rng);
    }
    case Scheme::ProposedPCS: {
      SystemConfig pcs = cfg;
      pcs.analog_structure = AnalogStructure::PartiallyConnected;
      return solve_joint(channels, pcs, rng);
    }
    case Scheme::UpBound: return run_upper_bound(channels, cfg, rng);
    case Scheme::FdBsOptRis: return run_fd_opt_ris(channels, cfg, rng);
    case Scheme::HpBsRndRis: return run_rnd_ris(channels, cfg, rng);
    case Scheme::HpBsNoRis: return run_no_ris(channels, cfg, rng);
  }
  throw ConfigError("unknown scheme");
}

SweepOutcome run_sweep_detailed(const SweepSpec& spec, const SystemConfig& cfg) {
  validate_config(cfg);
  validate_sweep(spec, cfg);

  const int points = static_cast<int>(spec.values.size());
  const int schemes = static_cast<int>(spec.schemes.size());
  const bool with_direct = needs_direct(spec.schemes);
  std::vector<TrialSample> samples(static_cast<std::size_t>(points) * spec.trials * schemes);

  auto run_unit = [&](int unit) {
    const int point = unit / spec.trials;
    const int trial = unit % spec.trials;
    const SystemConfig point_cfg = config_at(cfg, spec.variable, spec.values[point]);
    const double sigma2 = noise_variance(point_cfg);
    Rng channel_rng = derive_stream(spec.seed, static_cast<std::uint64_t>(trial), kChannelPurpose);
    const ChannelSet channels = synthesize_channels(point_cfg, channel_rng, with_direct);
    const std::uint64_t hash = fingerprint(channels);
    for (int s = 0; s < schemes; ++s) {
      TrialSample& out = samples[static_cast<std::size_t>(unit) * schemes + s];
      out.point = point;
      out.trial = trial;
      out.scheme = spec.schemes[s];
      out.channel_hash = hash;
      Rng rng = derive_stream(spec.seed, static_cast<std::uint64_t>(trial), scheme_purpose(spec.schemes[s]));
      try {
        const RunResult run = run_scheme(spec.schemes[s], channels, point_cfg, rng);
        const CMatrixXd F = run.solution.F_RF * run.solution.F_BB;
        out.se = sum_spectral_efficiency(sinr_per_user(run.solution.channel, F, point_cfg.P, point_cfg.K, sigma2));
        out.mse_bar = run.solution.mse_bar;
        out.iterations = run.solution.iterations;
        out.ok = true;
      } catch (const std::exception& e) {
        static std::mutex log_mutex;
        std::lock_guard lock(log_mutex);
        std::cerr << fmt::format("error: trial {} at {}={} scheme {}: {}\n", trial, to_string(spec.variable),
                                 spec.values[point], to_string(spec.schemes[s]), e.what());
      }
    }
  };

  const int units = points * spec.trials;
  if (spec.jobs <= 1) {
    for (int u = 0; u < units; ++u) run_unit(u);
  } else {
    std::atomic<int> next{0};
    std::vector<std::jthread> workers;
    for (int w = 0; w < spec.jobs; ++w) {
      workers.emplace_back([&] {
        for (int u = next++; u < units; u = next++) run_unit(u);
      });
    }
  }

  SweepOutcome outcome;
  outcome.samples = std::move(samples);
  SweepReport& report = outcome.report;
  report.sweep_var = to_string(spec.variable);
  for (int p = 0; p < points; ++p) {
    std::vector<bool> trial_ok(spec.trials, true);
    for (int t = 0; t < spec.trials; ++t) {
      for (int s = 0; s < schemes; ++s) {
        const auto& sample = outcome.samples[(static_cast<std::size_t>(p) * spec.trials + t) * schemes + s];
        trial_ok[t] = trial_ok[t] && sample.ok;
      }
    }
    int failed = 0;
    for (bool ok : trial_ok) failed += ok ? 0 : 1;
    for (int s = 0; s < schemes; ++s) {
      double sum_se = 0.0, sum_se2 = 0.0, sum_mse = 0.0, sum_iters = 0.0;
      int n = 0;
      for (int t = 0; t < spec.trials; ++t) {
        if (!trial_ok[t]) continue;
        const auto& sample = outcome.samples[(static_cast<std::size_t>(p) * spec.trials + t) * schemes + s];
        sum_se += sample.se;
        sum_se2 += sample.se * sample.se;
        sum_mse += sample.mse_bar;
        sum_iters += sample.iterations;
        ++n;
      }
      SchemeStats row;
      row.sweep_value = spec.values[p];
      row.scheme = to_string(spec.schemes[s]);
      row.trials = n;
      row.failed_trials = failed;
      if (n > 0) {
        row.mean_se = sum_se / n;
        row.mean_mse = sum_mse / n;
        row.mean_iters = sum_iters / n;
      }
      if (n > 1) {
        const double var = std::max(0.0, (sum_se2 - n * row.mean_se * row.mean_se) / (n - 1));
        row.stderr_se = std::sqrt(var / n);
      }
      report.rows.push_back(row);
    }
  }

  Provenance& prov = report.provenance;
  prov.version = std::string("rishp ") + RISHP_VERSION;
  prov.seed = spec.seed;
  prov.trials = spec.trials;
  prov.sweep_var = report.sweep_var;
  prov.sweep_values = spec.values;
  for (auto s : spec.schemes) prov.schemes.push_back(to_string(s));
  prov.config = config_entries(cfg);
  return outcome;
}

SweepReport run_sweep(const SweepSpec& spec, const SystemConfig& cfg) {
  return run_sweep_detailed(spec, cfg).report;
}

std::string to_csv(const SweepReport& report) {
  std::string out = "sweep_var,sweep_value,scheme,mean_se,stderr_se,mean_mse,mean_iters,trials\n";
  for (const auto& row : report.rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", report.sweep_var, format_real(row.sweep_value), row.scheme,
                       format_real(row.mean_se), format_real(row.stderr_se), format_real(row.mean_mse),
                       format_real(row.mean_iters), row.trials);
  }
  return out;
}

std::string to_json(const SweepReport& report) {
  json prov;
  prov["version"] = report.provenance.version;
  prov["seed"] = report.provenance.seed;
  prov["trials"] = report.provenance.trials;
  prov["sweep_var"] = report.provenance.sweep_var;
  prov["sweep_values"] = report.provenance.sweep_values;
  prov["schemes"] = report.provenance.schemes;
  json config = json::object();
  for (const auto& [key, value] : report.provenance.config) config[key] = value;
  prov["config"] = config;

  json rows = json::array();
  for (const auto& row : report.rows) {
    json r;
    r["sweep_value"] = row.sweep_value;
    r["scheme"] = row.scheme;
    r["mean_se"] = row.mean_se;
    r["stderr_se"] = row.stderr_se;
    r["mean_mse"] = row.mean_mse;
    r["mean_iters"] = row.mean_iters;
    r["trials"] = row.trials;
    r["failed_trials"] = row.failed_trials;
    rows.push_back(r);
  }
  json doc;
  doc["sweep_var"] = report.sweep_var;
  doc["rows"] = rows;
  doc["provenance"] = prov;
  return doc.dump(2) + "\n";
}

SweepReport report_from_json(std::string_view text) {
  const json doc = json::parse(text);
  SweepReport report;
  report.sweep_var = doc.at("sweep_var").get<std::string>();
  for (const auto& r : doc.at("rows")) {
    SchemeStats row;
    row.sweep_value = r.at("sweep_value").get<double>();
    row.scheme = r.at("scheme").get<std::string>();
    row.mean_se = r.at("mean_se").get<double>();
    row.stderr_se = r.at("stderr_se").get<double>();
    row.mean_mse = r.at("mean_mse").get<double>();
    row.mean_iters = r.at("mean_iters").get<double>();
    row.trials = r.at("trials").get<int>();
    row.failed_trials = r.at("failed_trials").get<int>();
    report.rows.push_back(row);
  }
  const json& prov = doc.at("provenance");
  report.provenance.version = prov.at("version").get<std::string>();
  report.provenance.seed = prov.at("seed").get<std::uint64_t>();
  report.provenance.trials = prov.at("trials").get<int>();
  report.provenance.sweep_var = prov.at("sweep_var").get<std::string>();
  report.provenance.sweep_values = prov.at("sweep_values").get<std::vector<double>>();
  report.provenance.schemes = prov.at("schemes").get<std::vector<std::string>>();
  for (const auto& [key, value] : prov.at("config").items()) {
    report.provenance.config.emplace_back(key, value.get<std::string>());
  }
  return report;
}

void emit_csv(const SweepReport& report, const std::string& path) { write_file(path, to_csv(report)); }

void emit_json(const SweepReport& report, const std::string& path) { write_file(path, to_json(report)); }

}  // namespace rishp
