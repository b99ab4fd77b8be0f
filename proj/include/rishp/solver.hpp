#ifndef RISHP_SOLVER_HPP
#define RISHP_SOLVER_HPP

#include <iosfwd>
#include <vector>

#include "rishp/channel.hpp"
#include "rishp/config.hpp"
#include "rishp/objective.hpp"
#include "rishp/types.hpp"

namespace rishp {

/// Output of one optimization run. `F_BB_bar` is the digital precoder with the
/// receive gain folded in; `F_BB = F_BB_bar / zeta` meets the power budget
/// ||F_RF F_BB||_F^2 = K. `Psi` is the RIS diagonal (empty when no RIS is in
/// the link) and `channel` the effective K x M channel at the final iterate.
struct PrecoderSolution {
  CMatrixXd F_RF;
  CMatrixXd F_BB;
  CMatrixXd F_BB_bar;
  CVectorXd Psi;
  double zeta = 0.0;
  CMatrixXd channel;
  double mse_bar = 0.0;
  int iterations = 0;
  bool converged = false;
};

struct IterationRecord {
  int iter = 0;
  double mse_after_digital = 0.0;
  double mse_after_analog = 0.0;
  double mse_after_ris = 0.0;
  double alpha_B = 0.0;  // 0 when the analog step was skipped
  double alpha_I = 0.0;  // 0 when the RIS step was skipped
  double max_residual = 0.0;
};

struct IterationTrace {
  std::vector<IterationRecord> records;
};

struct RunResult {
  PrecoderSolution solution;
  IterationTrace trace;
};

/// Working set of the alternating optimization. H and Xi are caches of
/// (H_I, Psi, H_B); call refresh_channel() after changing Psi. A state built
/// with fixed_channel() has no RIS: H_I, H_B and Psi stay empty.
struct SolverState {
  CMatrixXd H_I;
  CMatrixXd H_B;
  CVectorXd Psi;
  CMatrixXd F_RF;
  CMatrixXd F_BB_bar;
  CMatrixXd H;
  CMatrixXd Xi;
  double P = 1.0;
  int K = 1;
  double sigma2 = 1.0;
  int t = 0;

  static SolverState cascaded(CMatrixXd H_I, CMatrixXd H_B, CVectorXd Psi, CMatrixXd F_RF, double P,
                              int K, double sigma2);
  static SolverState fixed_channel(CMatrixXd H, CMatrixXd F_RF, double P, int K, double sigma2);

  bool has_ris() const { return Psi.size() > 0; }
  void refresh_channel();
  double objective() const;
  /// Gamma_bar = H_B F_RF F_BB_bar.
  CMatrixXd gamma_bar() const;
};

/// Closed-form digital update [F_RF^H Xi F_RF]^{-1} (H F_RF)^H via a Cholesky
/// solve. Throws SolverError if the system is not positive definite.
CMatrixXd update_digital(const CMatrixXd& H, const CMatrixXd& F_RF, double P, int K, double sigma2);
CMatrixXd update_digital(const SolverState& state);

CMatrixXd grad_analog(const SolverState& state);
CVectorXd grad_ris(const SolverState& state);

/// One projected-gradient step on the fully connected analog precoder.
CMatrixXd update_analog(const SolverState& state, double alpha_B);
/// Same step restricted to the block-diagonal (partially connected) support.
CMatrixXd update_analog_pcs(const SolverState& state, double alpha_B);
/// One projected-gradient step on the RIS phases (constant modulus 1/sqrt(R)).
CVectorXd update_ris(const SolverState& state, double alpha_I);

/// Random-phase analog precoder satisfying the structure's modulus constraint.
CMatrixXd random_analog(int M, int N_RF, AnalogStructure structure, Rng& rng);
/// Random RIS phases, modulus 1/sqrt(R).
CVectorXd random_ris(int R, Rng& rng);

/// Largest deviation from the analog (and, if non-empty, RIS) modulus
/// constraints; for the partially connected structure off-block entries count
/// by their absolute value.
double constraint_residual(const CMatrixXd& F_RF, AnalogStructure structure, const CVectorXd& Psi);

/// Alternating digital / analog / (optional) RIS updates from `state` with
/// steps fixed at the descent bounds. Stops when the relative change of the
/// objective over one iteration drops below cfg.tol, or after cfg.max_iters.
RunResult run_alternating(SolverState state, const SystemConfig& cfg, bool optimize_ris);

/// The joint design: random-phase initialization of F_RF then Psi from `rng`,
/// alternating updates, final gain normalization.
RunResult solve_joint(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng);

/// zeta = ||F_RF F_BB_bar||_F / sqrt(K); F_BB = F_BB_bar / zeta.
PrecoderSolution normalize_solution(const SolverState& state);

/// One JSON object per line per iteration.
void write_trace_jsonl(std::ostream& out, const IterationTrace& trace);

}  // namespace rishp

#endif  // RISHP_SOLVER_HPP
