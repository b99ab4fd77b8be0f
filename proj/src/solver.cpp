#include "rishp/solver.hpp"

#include <algorithm>
#include <numbers>
#include <ostream>

#include <fmt/format.h>

namespace rishp {

namespace {

constexpr double kDescentSlack = 1e-9;

void check_descent([[maybe_unused]] double before, [[maybe_unused]] double after,
                   [[maybe_unused]] const char* step, [[maybe_unused]] int iter) {
#ifndef NDEBUG
  if (after > before + kDescentSlack) {
    throw SolverError(fmt::format("{} step increased the objective at iteration {}: {:.17g} -> {:.17g}",
                                  step, iter, before, after));
  }
#endif
}

AnalogStructure structure_of(const CMatrixXd& F_RF, const SystemConfig& cfg) {
  // A fully digital precoder (identity analog stage) is checked as "full".
  return F_RF.cols() == cfg.N_RF ? cfg.analog_structure : AnalogStructure::FullyConnected;
}

}  // namespace

SolverState SolverState::cascaded(CMatrixXd H_I, CMatrixXd H_B, CVectorXd Psi, CMatrixXd F_RF,
                                  double P, int K, double sigma2) {
  SolverState s;
  s.H_I = std::move(H_I);
  s.H_B = std::move(H_B);
  s.Psi = std::move(Psi);
  s.F_RF = std::move(F_RF);
  s.P = P;
  s.K = K;
  s.sigma2 = sigma2;
  s.F_BB_bar = CMatrixXd::Zero(s.F_RF.cols(), K);
  s.refresh_channel();
  return s;
}

SolverState SolverState::fixed_channel(CMatrixXd H, CMatrixXd F_RF, double P, int K, double sigma2) {
  SolverState s;
  s.H = std::move(H);
  s.F_RF = std::move(F_RF);
  s.P = P;
  s.K = K;
  s.sigma2 = sigma2;
  s.F_BB_bar = CMatrixXd::Zero(s.F_RF.cols(), K);
  s.Xi = regularized_gram(s.H, P, K, sigma2);
  return s;
}

void SolverState::refresh_channel() {
  if (has_ris()) H = cascade_channel(H_I, Psi, H_B);
  Xi = regularized_gram(H, P, K, sigma2);
}

double SolverState::objective() const { return mse_bar(H, F_RF * F_BB_bar, P, K, sigma2); }

CMatrixXd SolverState::gamma_bar() const { return H_B * (F_RF * F_BB_bar); }

CMatrixXd update_digital(const CMatrixXd& H, const CMatrixXd& F_RF, double P, int K, double sigma2) {
  return update_digital(SolverState::fixed_channel(H, F_RF, P, K, sigma2));
}

CMatrixXd update_digital(const SolverState& state) {
  const CMatrixXd lhs = state.F_RF.adjoint() * state.Xi * state.F_RF;
  const CMatrixXd rhs = (state.H * state.F_RF).adjoint();
  Eigen::LLT<CMatrixXd> llt(lhs);
  if (llt.info() != Eigen::Success) {
    throw SolverError("digital update: F_RF^H Xi F_RF is not positive definite");
  }
  CMatrixXd F_BB_bar = llt.solve(rhs);
  if (!F_BB_bar.allFinite()) throw SolverError("digital update: non-finite solution");
  return F_BB_bar;
}

CMatrixXd grad_analog(const SolverState& state) {
  return grad_analog(state.Xi, state.H, state.F_RF, state.F_BB_bar, state.P, state.K);
}

CVectorXd grad_ris(const SolverState& state) {
  return grad_ris(state.H_I, state.Psi, state.gamma_bar(), state.P, state.K);
}

CMatrixXd update_analog(const SolverState& state, double alpha_B) {
  const double modulus = 1.0 / std::sqrt(static_cast<double>(state.F_RF.rows()));
  const CMatrixXd moved = state.F_RF - alpha_B * grad_analog(state);
  return project_constant_modulus(moved, modulus, state.F_RF);
}

CMatrixXd update_analog_pcs(const SolverState& state, double alpha_B) {
  const CMatrixXd moved = state.F_RF - alpha_B * grad_analog(state);
  return project_block_diagonal(moved, state.F_RF);
}

CVectorXd update_ris(const SolverState& state, double alpha_I) {
  const double modulus = 1.0 / std::sqrt(static_cast<double>(state.Psi.size()));
  const CVectorXd moved = state.Psi - alpha_I * grad_ris(state);
  return project_constant_modulus(moved, modulus, state.Psi);
}

CMatrixXd random_analog(int M, int N_RF, AnalogStructure structure, Rng& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  if (structure == AnalogStructure::FullyConnected) {
    const double modulus = 1.0 / std::sqrt(static_cast<double>(M));
    CMatrixXd F(M, N_RF);
    for (Eigen::Index j = 0; j < F.cols(); ++j) {
      for (Eigen::Index i = 0; i < F.rows(); ++i) F(i, j) = std::polar(modulus, phase(rng));
    }
    return F;
  }
  if (M % N_RF != 0) throw ConfigError("N_RF divides M violated (partially connected)");
  const double modulus = std::sqrt(static_cast<double>(N_RF) / M);
  const int block = M / N_RF;
  CMatrixXd F = CMatrixXd::Zero(M, N_RF);
  for (int n = 0; n < N_RF; ++n) {
    for (int i = 0; i < block; ++i) F(pcs_block_start(M, N_RF, n) + i, n) = std::polar(modulus, phase(rng));
  }
  return F;
}

CVectorXd random_ris(int R, Rng& rng) {
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const double modulus = 1.0 / std::sqrt(static_cast<double>(R));
  CVectorXd psi(R);
  for (Eigen::Index r = 0; r < psi.size(); ++r) psi(r) = std::polar(modulus, phase(rng));
  return psi;
}

double constraint_residual(const CMatrixXd& F_RF, AnalogStructure structure, const CVectorXd& Psi) {
  const Eigen::Index M = F_RF.rows();
  const Eigen::Index N_RF = F_RF.cols();
  double worst = 0.0;
  if (structure == AnalogStructure::FullyConnected) {
    const double modulus = 1.0 / std::sqrt(static_cast<double>(M));
    worst = (F_RF.array().abs() - modulus).abs().maxCoeff();
  } else {
    const Eigen::Index block = M / N_RF;
    const double modulus = std::sqrt(static_cast<double>(N_RF) / M);
    for (Eigen::Index n = 0; n < N_RF; ++n) {
      const Eigen::Index start = pcs_block_start(M, N_RF, n);
      for (Eigen::Index m = 0; m < M; ++m) {
        const bool on_block = m >= start && m < start + block;
        const double dev = on_block ? std::abs(std::abs(F_RF(m, n)) - modulus) : std::abs(F_RF(m, n));
        worst = std::max(worst, dev);
      }
    }
  }
  if (Psi.size() > 0) {
    const double modulus = 1.0 / std::sqrt(static_cast<double>(Psi.size()));
    worst = std::max(worst, (Psi.array().abs() - modulus).abs().maxCoeff());
  }
  return worst;
}

PrecoderSolution normalize_solution(const SolverState& state) {
  PrecoderSolution sol;
  const CMatrixXd F_bar = state.F_RF * state.F_BB_bar;
  const double zeta = F_bar.norm() / std::sqrt(static_cast<double>(state.K));
  if (!(zeta > 0.0)) throw SolverError("normalization: zero precoder, gain undefined");
  sol.F_RF = state.F_RF;
  sol.F_BB_bar = state.F_BB_bar;
  sol.F_BB = state.F_BB_bar / zeta;
  sol.Psi = state.Psi;
  sol.zeta = zeta;
  sol.channel = state.H;
  sol.mse_bar = mse_bar(state.H, F_bar, state.P, state.K, state.sigma2);
  return sol;
}

RunResult run_alternating(SolverState state, const SystemConfig& cfg, bool optimize_ris) {
  if (!(state.sigma2 > 0.0)) throw SolverError("noise variance must be positive");
  if (state.H.squaredNorm() == 0.0) throw SolverError("degenerate channel: effective channel is zero");
  optimize_ris = optimize_ris && state.has_ris();
  const AnalogStructure structure = structure_of(state.F_RF, cfg);

  RunResult result;
  bool converged = false;
  double previous = 0.0;
  for (int iter = 1; iter <= cfg.max_iters; ++iter) {
    state.t = iter;
    IterationRecord rec;
    rec.iter = iter;

    state.F_BB_bar = update_digital(state);
    rec.mse_after_digital = state.objective();
    if (iter > 1) check_descent(previous, rec.mse_after_digital, "digital", iter);

    if (state.F_BB_bar.squaredNorm() > 0.0) {
      rec.alpha_B = 1.0 / step_bound_analog(state.H, state.F_BB_bar, state.P, state.K, state.sigma2);
      state.F_RF = structure == AnalogStructure::FullyConnected ? update_analog(state, rec.alpha_B)
                                                                 : update_analog_pcs(state, rec.alpha_B);
    }
    rec.mse_after_analog = state.objective();
    check_descent(rec.mse_after_digital, rec.mse_after_analog, "analog", iter);

    if (optimize_ris) {
      const CMatrixXd gamma = state.gamma_bar();
      if (gamma.squaredNorm() > 0.0) {
        rec.alpha_I = 1.0 / step_bound_ris(gamma, state.H_I, state.P, state.K);
        state.Psi = update_ris(state, rec.alpha_I);
        state.refresh_channel();
      }
    }
    rec.mse_after_ris = state.objective();
    check_descent(rec.mse_after_analog, rec.mse_after_ris, "RIS", iter);
    rec.max_residual = constraint_residual(state.F_RF, structure, state.Psi);
    result.trace.records.push_back(rec);

    if (iter > 1) {
      const double change = std::abs(previous - rec.mse_after_ris) / std::max(previous, 1e-12);
      if (change < cfg.tol) {
        converged = true;
        previous = rec.mse_after_ris;
        break;
      }
    }
    previous = rec.mse_after_ris;
  }

  // Digital precoder refreshed for the final (F_RF, Psi); it only lowers the objective.
  state.F_BB_bar = update_digital(state);
  result.solution = normalize_solution(state);
  result.solution.iterations = static_cast<int>(result.trace.records.size());
  result.solution.converged = converged;
  return result;
}

RunResult solve_joint(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng) {
  validate_config(cfg);
  if (channels.H_B.rows() != cfg.R || channels.H_B.cols() != cfg.M || channels.H_I.rows() != cfg.K ||
      channels.H_I.cols() != cfg.R) {
    throw SolverError("channel shapes do not match the configuration");
  }
  const double sigma2 = noise_variance(cfg);
  CMatrixXd F_RF = random_analog(cfg.M, cfg.N_RF, cfg.analog_structure, rng);
  CVectorXd psi = random_ris(cfg.R, rng);
  auto state = SolverState::cascaded(channels.H_I, channels.H_B, std::move(psi), std::move(F_RF), cfg.P,
                                     cfg.K, sigma2);
  return run_alternating(std::move(state), cfg, true);
}

void write_trace_jsonl(std::ostream& out, const IterationTrace& trace) {
  for (const auto& r : trace.records) {
    out << fmt::format(
        "{{\"iter\":{},\"mse_after_digital\":{:.17g},\"mse_after_analog\":{:.17g},"
        "\"mse_after_ris\":{:.17g},\"alpha_B\":{:.17g},\"alpha_I\":{:.17g},\"max_residual\":{:.17g}}}\n",
        r.iter, r.mse_after_digital, r.mse_after_analog, r.mse_after_ris, r.alpha_B, r.alpha_I,
        r.max_residual);
  }
}

}  // namespace rishp
