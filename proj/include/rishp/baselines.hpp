#ifndef RISHP_BASELINES_HPP
#define RISHP_BASELINES_HPP

#include <optional>
#include <string>
#include <string_view>

#include "rishp/channel.hpp"
#include "rishp/config.hpp"
#include "rishp/solver.hpp"

namespace rishp {

enum class BaselineKind {
  UpBound,     // fully digital BS, RIS relaxed to a unit-energy ball
  FdBsOptRis,  // fully digital BS, optimized constant-modulus RIS
  HpBsRndRis,  // hybrid BS, random RIS phases
  HpBsNoRis,   // hybrid BS over the direct channel only
};

std::string to_string(BaselineKind kind);
BaselineKind parse_baseline(std::string_view name);

/// Regularized zero-forcing precoder (H^H H + (K sigma2/P) I)^{-1} H^H, i.e.
/// the closed-form digital update with an identity analog stage.
CMatrixXd fd_precoder(const CMatrixXd& H, double P, int K, double sigma2);

/// Fully digital precoding alternated with projected-gradient RIS updates
/// (constant modulus 1/sqrt(R)). RIS initialized with random phases from `rng`
/// unless `initial_psi` is given.
RunResult run_fd_opt_ris(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng,
                         const std::optional<CVectorXd>& initial_psi = std::nullopt);

/// As run_fd_opt_ris, but the RIS diagonal only has to satisfy
/// sum_r |Psi_r|^2 <= 1 (same total as the constant-modulus set).
RunResult run_upper_bound(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng,
                          const std::optional<CVectorXd>& initial_psi = std::nullopt);

/// Hybrid precoding with the RIS frozen at random constant-modulus phases.
RunResult run_rnd_ris(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng);

/// Hybrid precoding over H_D with no RIS. Throws SolverError if H_D is absent.
RunResult run_no_ris(const ChannelSet& channels, const SystemConfig& cfg, Rng& rng);

RunResult run_baseline(BaselineKind kind, const ChannelSet& channels, const SystemConfig& cfg, Rng& rng);

}  // namespace rishp

#endif  // RISHP_BASELINES_HPP
