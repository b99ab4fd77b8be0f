// Command-line front end: Monte-Carlo sweeps, single solves with iteration
// traces, and channel dumps.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rishp/baselines.hpp"
#include "rishp/channel.hpp"
#include "rishp/config.hpp"
#include "rishp/harness.hpp"
#include "rishp/metrics.hpp"
#include "rishp/solver.hpp"

namespace {

struct CommonOptions {
  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  std::string structure;
};

void add_common(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--config", opts.config_path, "key = value config file");
  cmd->add_option("--set", opts.overrides, "override a config key, e.g. --set M=16");
  cmd->add_option("--seed", opts.seed, "master RNG seed");
  cmd->add_option("--structure", opts.structure, "analog structure for hybrid schemes")
      ->check(CLI::IsMember({"full", "pcs"}));
}

rishp::SystemConfig resolve_config(const CommonOptions& opts) {
  rishp::SystemConfig cfg = opts.config_path.empty() ? rishp::SystemConfig{} : rishp::load_config(opts.config_path);
  for (const auto& kv : opts.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw rishp::ConfigError("--set expects key=value, got '" + kv + "'");
    rishp::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (opts.seed) cfg.seed = *opts.seed;
  if (!opts.structure.empty()) cfg.analog_structure = rishp::parse_analog_structure(opts.structure);
  return rishp::validate_config(cfg);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void fail(const std::string& kind, const std::string& message) {
  nlohmann::ordered_json line;
  line["error"] = kind;
  line["message"] = message;
  std::cerr << line.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid precoding and RIS phase design simulator"};
  app.require_subcommand(1);

  CommonOptions sweep_common;
  std::string sweep_var = "r";
  std::string values_text;
  int trials = 0;
  std::string schemes_text;
  std::string out_dir = ".";
  std::string emit = "both";
  int jobs = 1;
  auto* sweep = app.add_subcommand("sweep", "Monte-Carlo sweep over R or SNR");
  add_common(sweep, sweep_common);
  sweep->add_option("--sweep", sweep_var, "sweep variable")->check(CLI::IsMember({"r", "snr"}));
  sweep->add_option("--values", values_text, "comma-separated sweep values");
  sweep->add_option("--trials", trials, "Monte-Carlo trials per sweep value");
  sweep->add_option("--schemes", schemes_text, "comma-separated scheme names");
  sweep->add_option("--out", out_dir, "output directory");
  sweep->add_option("--emit", emit, "output formats")->check(CLI::IsMember({"csv", "json", "both"}));
  sweep->add_option("--jobs", jobs, "worker threads");

  CommonOptions solve_common;
  std::string scheme_name = "proposed-full";
  std::string trace_path;
  std::uint64_t trial_index = 0;
  auto* solve = app.add_subcommand("solve", "Run one scheme on one channel realization");
  add_common(solve, solve_common);
  solve->add_option("--scheme", scheme_name, "scheme name");
  solve->add_option("--trial", trial_index, "trial index used to derive the RNG streams");
  solve->add_option("--trace", trace_path, "write the iteration trace as JSON lines");

  CommonOptions channel_common;
  std::string channel_out;
  bool with_direct = false;
  std::uint64_t channel_trial = 0;
  auto* channel = app.add_subcommand("channel", "Dump one channel realization as text");
  add_common(channel, channel_common);
  channel->add_option("--out", channel_out, "output file (stdout if omitted)");
  channel->add_option("--trial", channel_trial, "trial index");
  channel->add_flag("--direct", with_direct, "also draw the direct BS-UE channel");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep) {
      const rishp::SystemConfig cfg = resolve_config(sweep_common);
      rishp::SweepSpec spec = rishp::default_sweep(rishp::parse_sweep_variable(sweep_var));
      if (!values_text.empty()) {
        spec.values.clear();
        for (const auto& v : split_list(values_text)) spec.values.push_back(std::stod(v));
      }
      if (trials > 0) spec.trials = trials;
      if (!schemes_text.empty()) {
        spec.schemes.clear();
        for (const auto& s : split_list(schemes_text)) spec.schemes.push_back(rishp::parse_scheme(s));
      }
      spec.seed = cfg.seed;
      spec.jobs = jobs;
      const rishp::SweepReport report = rishp::run_sweep(spec, cfg);
      std::filesystem::create_directories(out_dir);
      const std::string stem = (std::filesystem::path(out_dir) / ("sweep_" + sweep_var)).string();
      if (emit == "csv" || emit == "both") rishp::emit_csv(report, stem + ".csv");
      if (emit == "json" || emit == "both") rishp::emit_json(report, stem + ".json");
      std::cout << rishp::to_csv(report);
    } else if (*solve) {
      const rishp::SystemConfig cfg = resolve_config(solve_common);
      const rishp::Scheme scheme = rishp::parse_scheme(scheme_name);
      rishp::Rng channel_rng = rishp::derive_stream(cfg.seed, trial_index, 0);
      const rishp::ChannelSet channels =
          rishp::synthesize_channels(cfg, channel_rng, scheme == rishp::Scheme::HpBsNoRis);
      rishp::Rng rng = rishp::derive_stream(cfg.seed, trial_index, 1 + static_cast<std::uint64_t>(scheme));
      const rishp::RunResult run = rishp::run_scheme(scheme, channels, cfg, rng);
      if (!trace_path.empty()) {
        std::ofstream out(trace_path);
        if (!out) throw std::runtime_error("cannot open '" + trace_path + "' for writing");
        rishp::write_trace_jsonl(out, run.trace);
      }
      const double sigma2 = rishp::noise_variance(cfg);
      const rishp::CMatrixXd F = run.solution.F_RF * run.solution.F_BB;
      const auto metrics = rishp::link_metrics(run.solution.channel, F, run.solution.zeta, cfg.P, cfg.K, sigma2);
      nlohmann::ordered_json summary;
      summary["scheme"] = scheme_name;
      summary["sum_se"] = metrics.sum_se;
      summary["mse"] = metrics.mse;
      summary["mse_bar"] = run.solution.mse_bar;
      summary["zeta"] = run.solution.zeta;
      summary["iterations"] = run.solution.iterations;
      summary["converged"] = run.solution.converged;
      summary["sinr"] = std::vector<double>(metrics.sinr.data(), metrics.sinr.data() + metrics.sinr.size());
      std::cout << summary.dump(2) << '\n';
    } else if (*channel) {
      const rishp::SystemConfig cfg = resolve_config(channel_common);
      rishp::Rng rng = rishp::derive_stream(cfg.seed, channel_trial, 0);
      const rishp::ChannelSet channels = rishp::synthesize_channels(cfg, rng, with_direct);
      if (channel_out.empty()) {
        rishp::write_channels(std::cout, channels);
      } else {
        std::ofstream out(channel_out);
        if (!out) throw std::runtime_error("cannot open '" + channel_out + "' for writing");
        rishp::write_channels(out, channels);
      }
    }
  } catch (const rishp::ConfigError& e) {
    fail("config", e.what());
    return 2;
  } catch (const rishp::SolverError& e) {
    fail("solver", e.what());
    return 3;
  } catch (const std::exception& e) {
    fail("runtime", e.what());
    return 1;
  }
  return 0;
}
