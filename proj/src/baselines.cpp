#include "rishp/baselines.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "rishp/objective.hpp"

namespace rishp {

namespace {

enum class RisSet { ConstantModulus, UnitBall };

double ris_residual(const CVectorXd& psi, RisSet set) {
  if (set == RisSet::UnitBall) return std::max(0.0, psi.norm() - 1.0);
  const double modulus = 1.0 / std::sqrt(static_cast<double>(psi.size()));
  return (psi.array().abs() - modulus).abs().maxCoeff();
}

RunResult run_fully_digital(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng,
                            const std::optional<CVectorXd>& initial_psi, RisSet set) {
  validate_config(cfg);
  const double sigma2 = noise_variance(cfg);
  CVectorXd psi = initial_psi ? *initial_psi : random_ris(cfg.R, rng);
  if (psi.size() != channels.H_I.cols()) throw SolverError("initial RIS vector has the wrong length");

  const auto M = channels.H_B.cols();
  auto state = SolverState::cascaded(channels.H_I, channels.H_B, std::move(psi), CMatrixXd::Identity(M, M),
                                     cfg.P, cfg.K, sigma2);
  if (state.H.squaredNorm() == 0.0) throw SolverError("degenerate channel: effective channel is zero");

  RunResult result;
  bool converged = false;
  double previous = 0.0;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    IterationRecord rec;
    rec.iter = iter;
    state.t = iter;
    state.F_BB_bar = fd_precoder(state.H, cfg.P, cfg.K, sigma2);
    rec.mse_after_digital = state.objective();
    rec.mse_after_analog = rec.mse_after_digital;

    const CMatrixXd gamma = state.gamma_bar();
    if (gamma.squaredNorm() > 0.0) {
      rec.alpha_I = 1.0 / step_bound_ris(gamma, state.H_I, cfg.P, cfg.K);
      const CVectorXd moved = state.Psi - rec.alpha_I * grad_ris(state.H_I, state.Psi, gamma, cfg.P, cfg.K);
      state.Psi = set == RisSet::UnitBall
                      ? project_ball(moved, 1.0)
                      : CVectorXd(project_constant_modulus(moved, 1.0 / std::sqrt(double(cfg.R)), state.Psi));
      state.refresh_channel();
    }
    rec.mse_after_ris = state.objective();
    rec.max_residual = ris_residual(state.Psi, set);
    result.trace.records.push_back(rec);

    if (iter > 1 && std::abs(previous - rec.mse_after_ris) / std::max(previous, 1e-12) < cfg.tol) {
      converged = true;
      break;
    }
    previous = rec.mse_after_ris;
  }

  state.F_BB_bar = fd_precoder(state.H, cfg.P, cfg.K, sigma2);
  result.solution = normalize_solution(state);
  result.solution.iterations = static_cast<int>(result.trace.records.size());
  result.solution.converged = converged;
  return result;
}

}  // namespace

std::string to_string(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::UpBound: return "upBound";
    case BaselineKind::FdBsOptRis: return "fdBS-optRIS";
    case BaselineKind::HpBsRndRis: return "hpBS-rndRIS";
    case BaselineKind::HpBsNoRis: return "hpBS-noRIS";
  }
  return "unknown";
}

BaselineKind parse_baseline(std::string_view name) {
  for (auto kind : {BaselineKind::UpBound, BaselineKind::FdBsOptRis, BaselineKind::HpBsRndRis,
                    BaselineKind::HpBsNoRis}) {
    if (name == to_string(kind)) return kind;
  }
  throw ConfigError(fmt::format("unknown baseline '{}'", name));
}

CMatrixXd fd_precoder(const CMatrixXd& H, double P, int K, double sigma2) {
  if (!(sigma2 > 0.0)) throw SolverError("fully digital precoder needs positive noise variance");
  Eigen::LLT<CMatrixXd> llt(regularized_gram(H, P, K, sigma2));
  if (llt.info() != Eigen::Success) throw SolverError("fully digital precoder: Xi is not positive definite");
  return llt.solve(CMatrixXd(H.adjoint()));
}

RunResult run_fd_opt_ris(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng,
                         const std::optional<CVectorXd>& initial_psi) {
  return run_fully_digital(channels, cfg, rng, initial_psi, RisSet::ConstantModulus);
}

RunResult run_upper_bound(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng,
                          const std::optional<CVectorXd>& initial_psi) {
  return run_fully_digital(channels, cfg, rng, initial_psi, RisSet::UnitBall);
}

RunResult run_rnd_ris(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng) {
  validate_config(cfg);
  CMatrixXd F_RF = random_analog(cfg.M, cfg.N_RF, cfg.analog_structure, rng);
  CVectorXd psi = random_ris(cfg.R, rng);
  auto state = SolverState::cascaded(channels.H_I, channels.H_B, std::move(psi), std::move(F_RF), cfg.P,
                                     cfg.K, noise_variance(cfg));
  return run_alternating(std::move(state), cfg, false);
}

RunResult run_no_ris(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng) {
  validate_config(cfg);
  if (!channels.H_D) throw SolverError("no-RIS baseline needs the direct channel H_D");
  CMatrixXd F_RF = random_analog(cfg.M, cfg.N_RF, cfg.analog_structure, rng);
  auto state = SolverState::fixed_channel(*channels.H_D, std::move(F_RF), cfg.P, cfg.K, noise_variance(cfg));
  return run_alternating(std::move(state), cfg, false);
}

RunResult run_baseline(BaselineKind kind, const ChannelSet& channels, const SystemConfig& cfg, Rng& rng) {
  switch (kind) {
    case BaselineKind::UpBound: return run_upper_bound(channels, cfg, rng);
    case BaselineKind::FdBsOptRis: return run_fd_opt_ris(channels, cfg, rng);
    case BaselineKind::HpBsRndRis: return run_rnd_ris(channels, cfg, rng);
    case BaselineKind::HpBsNoRis: return run_no_ris(channels, cfg, rng);
  }
  throw ConfigError("unknown baseline kind");
}

}  // namespace rishp
