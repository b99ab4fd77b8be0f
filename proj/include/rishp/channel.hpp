#ifndef RISHP_CHANNEL_HPP
#define RISHP_CHANNEL_HPP

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <span>
#include <vector>

#include "rishp/config.hpp"
#include "rishp/types.hpp"

namespace rishp {

/// One realization of the cascaded link. Row k of H_I is h_{I_k}^H.
struct ChannelSet {
  CMatrixXd H_B;                 // R x M, RIS <- BS
  CMatrixXd H_I;                 // K x R, UE  <- RIS
  std::optional<CMatrixXd> H_D;  // K x M, UE  <- BS (no-RIS baseline only)
};

/// Geometry and gain of one propagation path. Which angles are read depends on
/// the link: BS-RIS uses the AoA pair on the RIS (UPA) and the AoD azimuth on
/// the BS (ULA); RIS-UE uses the AoD pair on the RIS; BS-UE uses the AoD
/// azimuth only. Angles in radians.
struct PathParams {
  cd gain{1.0, 0.0};
  double aoa_azimuth = 0.0;
  double aoa_elevation = 0.0;
  double aod_azimuth = 0.0;
  double aod_elevation = 0.0;
};

/// ULA steering vector: entry n is exp(j 2 pi d n sin(psi)) / sqrt(N).
template <typename Real>
CVector<Real> ula_response(int N, Real d_over_lambda, Real psi) {
  CVector<Real> a(N);
  const Real scale = Real(1) / std::sqrt(Real(N));
  const Real step = Real(2) * std::numbers::pi_v<Real> * d_over_lambda * std::sin(psi);
  for (int n = 0; n < N; ++n) a(n) = std::polar(scale, step * Real(n));
  return a;
}

/// UPA steering vector over a sqrt(N) x sqrt(N) grid, p-major flattening
/// (index p * sqrt(N) + q). Throws ConfigError if N is not a perfect square.
template <typename Real>
CVector<Real> upa_response(int N, Real d_over_lambda, Real theta, Real phi) {
  const int side = exact_sqrt(N);
  if (side < 0) throw ConfigError("R not a perfect square");
  CVector<Real> a(N);
  const Real scale = Real(1) / std::sqrt(Real(N));
  const Real k = Real(2) * std::numbers::pi_v<Real> * d_over_lambda;
  const Real row_step = k * std::sin(theta) * std::sin(phi);
  const Real col_step = k * std::cos(phi);
  for (int p = 0; p < side; ++p) {
    for (int q = 0; q < side; ++q) {
      a(p * side + q) = std::polar(scale, row_step * Real(p) + col_step * Real(q));
    }
  }
  return a;
}

// Deterministic channel builders from explicit path parameters.
CMatrixXd bs_ris_channel(int M, int R, double d_over_lambda, std::span<const PathParams> paths);
CMatrixXd ris_ue_channel(int R, double d_over_lambda,
                         std::span<const std::vector<PathParams>> per_user_paths);
CMatrixXd direct_channel(int M, double d_over_lambda,
                         std::span<const std::vector<PathParams>> per_user_paths);

// Random path draws. Gains are CN(0, 1); angles uniform on [-pi/2, pi/2].
std::vector<PathParams> draw_bs_ris_paths(int L_B, Rng& rng);
/// The RIS-side elevation of path l is shared by all users; azimuths and
/// gains are drawn per user.
std::vector<std::vector<PathParams>> draw_ris_ue_paths(int K, int L_I, Rng& rng);
std::vector<std::vector<PathParams>> draw_direct_paths(int K, int L_I, Rng& rng);

CMatrixXd synth_bs_ris(const SystemConfig& cfg, Rng& rng);
CMatrixXd synth_ris_ue(const SystemConfig& cfg, Rng& rng);
CMatrixXd synth_direct(const SystemConfig& cfg, Rng& rng);

/// Draws H_B, then H_I, then (if requested) H_D from a single stream.
ChannelSet synthesize_channels(const SystemConfig& cfg, Rng& rng, bool with_direct);

/// Text dump: a "channelset 1" line, then per matrix a "<name> <rows> <cols>"
/// header followed by one line per row of space-separated "re,im" pairs
/// printed with 17 significant digits.
void write_channels(std::ostream& out, const ChannelSet& channels);
ChannelSet read_channels(std::istream& in);

/// FNV-1a hash over the raw entries, for checking channel reuse.
std::uint64_t fingerprint(const ChannelSet& channels);

/// Independent stream for (master seed, trial, purpose). Purpose 0 is the
/// channel draw; schemes use their own purpose tags.
Rng derive_stream(std::uint64_t master_seed, std::uint64_t trial, std::uint64_t purpose);

}  // namespace rishp

#endif  // RISHP_CHANNEL_HPP
