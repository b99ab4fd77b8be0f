#ifndef RISHP_OBJECTIVE_HPP
#define RISHP_OBJECTIVE_HPP

// Objective, gradients, step bounds and projections of the joint hybrid
// precoder / RIS phase design. Every gradient here is taken with respect to
// the conjugate coordinates, so the directional derivative of the objective
// along a perturbation D equals 2 Re Tr{G^H D}.

#include <cmath>

#include "rishp/types.hpp"

namespace rishp {

/// Effective channel H = H_I diag(psi) H_B.
template <typename DerivedI, typename DerivedPsi, typename DerivedB>
CMatrix<typename DerivedI::RealScalar> cascade_channel(const Eigen::MatrixBase<DerivedI>& H_I,
                                                       const Eigen::MatrixBase<DerivedPsi>& psi,
                                                       const Eigen::MatrixBase<DerivedB>& H_B) {
  return H_I * psi.asDiagonal() * H_B;
}

/// Modified MSE with the receive gain folded into the precoder:
///   P - (2P/K) Re Tr{F^H H^H} + (P/K) ||H F||_F^2 + sigma2 ||F||_F^2.
template <typename DerivedH, typename DerivedF>
typename DerivedH::RealScalar mse_bar(const Eigen::MatrixBase<DerivedH>& H,
                                      const Eigen::MatrixBase<DerivedF>& F_bar,
                                      typename DerivedH::RealScalar P, int K,
                                      typename DerivedH::RealScalar sigma2) {
  using Real = typename DerivedH::RealScalar;
  const CMatrix<Real> HF = H * F_bar;
  const Real per_stream = P / Real(K);
  return P - Real(2) * per_stream * HF.trace().real() + per_stream * HF.squaredNorm() +
         sigma2 * F_bar.squaredNorm();
}

/// Xi = H^H H + (K sigma2 / P) I.
template <typename DerivedH>
CMatrix<typename DerivedH::RealScalar> regularized_gram(const Eigen::MatrixBase<DerivedH>& H,
                                                        typename DerivedH::RealScalar P, int K,
                                                        typename DerivedH::RealScalar sigma2) {
  using Real = typename DerivedH::RealScalar;
  CMatrix<Real> Xi = H.adjoint() * H;
  Xi.diagonal().array() += Complex<Real>(Real(K) * sigma2 / P, Real(0));
  return Xi;
}

/// Gradient of the modified MSE in the analog precoder:
///   (P/K) [Xi F_RF F_BB_bar - H^H] F_BB_bar^H.
template <typename DerivedXi, typename DerivedH, typename DerivedRF, typename DerivedBB>
CMatrix<typename DerivedH::RealScalar> grad_analog(const Eigen::MatrixBase<DerivedXi>& Xi,
                                                   const Eigen::MatrixBase<DerivedH>& H,
                                                   const Eigen::MatrixBase<DerivedRF>& F_RF,
                                                   const Eigen::MatrixBase<DerivedBB>& F_BB_bar,
                                                   typename DerivedH::RealScalar P, int K) {
  using Real = typename DerivedH::RealScalar;
  CMatrix<Real> residual = Xi * (F_RF * F_BB_bar);
  residual -= H.adjoint();
  return (P / Real(K)) * residual * F_BB_bar.adjoint();
}

/// Gradient of the modified MSE in the RIS phases (diagonal of Psi):
///   diag( (P/K) H_I^H (H_I diag(psi) Gamma - I_K) Gamma^H ),
/// where Gamma = H_B F_RF F_BB_bar (or H_B F for a fully digital precoder).
template <typename DerivedI, typename DerivedPsi, typename DerivedG>
CVector<typename DerivedI::RealScalar> grad_ris(const Eigen::MatrixBase<DerivedI>& H_I,
                                                const Eigen::MatrixBase<DerivedPsi>& psi,
                                                const Eigen::MatrixBase<DerivedG>& Gamma_bar,
                                                typename DerivedI::RealScalar P, int K) {
  using Real = typename DerivedI::RealScalar;
  CMatrix<Real> residual = H_I * psi.asDiagonal() * Gamma_bar;
  residual.diagonal().array() -= Complex<Real>(1, 0);
  const CMatrix<Real> right = residual * Gamma_bar.adjoint();  // K x R
  const CMatrix<Real> left = H_I.adjoint();                    // R x K
  // diag(left * right) without forming the R x R product.
  CVector<Real> g = (left.array() * right.transpose().array()).rowwise().sum();
  return (P / Real(K)) * g;
}

/// Lipschitz-type bound tau = ((P/K) ||H||^2 + sigma2) ||F_BB_bar||^2. Any
/// analog step alpha <= 1/tau does not increase the objective.
template <typename DerivedH, typename DerivedBB>
typename DerivedH::RealScalar step_bound_analog(const Eigen::MatrixBase<DerivedH>& H,
                                                const Eigen::MatrixBase<DerivedBB>& F_BB_bar,
                                                typename DerivedH::RealScalar P, int K,
                                                typename DerivedH::RealScalar sigma2) {
  using Real = typename DerivedH::RealScalar;
  const Real bb = F_BB_bar.squaredNorm();
  if (!(bb > Real(0))) throw SolverError("analog step bound undefined: F_BB_bar is zero");
  const Real tau = ((P / Real(K)) * H.squaredNorm() + sigma2) * bb;
  if (!(tau > Real(0)) || !std::isfinite(tau)) throw SolverError("analog step bound is degenerate");
  return tau;
}

/// varsigma = (P/K) ||Gamma||^2 ||H_I||^2. Any RIS step alpha <= 1/varsigma
/// does not increase the objective.
template <typename DerivedG, typename DerivedI>
typename DerivedG::RealScalar step_bound_ris(const Eigen::MatrixBase<DerivedG>& Gamma_bar,
                                             const Eigen::MatrixBase<DerivedI>& H_I,
                                             typename DerivedG::RealScalar P, int K) {
  using Real = typename DerivedG::RealScalar;
  const Real gg = Gamma_bar.squaredNorm();
  if (!(gg > Real(0))) throw SolverError("RIS step bound undefined: Gamma_bar is zero");
  const Real bound = (P / Real(K)) * gg * H_I.squaredNorm();
  if (!(bound > Real(0)) || !std::isfinite(bound)) throw SolverError("RIS step bound is degenerate");
  return bound;
}

/// Entry-wise modulus * exp(j arg Z). Where Z is exactly zero its argument is
/// undefined and the phase of `previous` is kept.
template <typename DerivedZ, typename DerivedPrev>
CMatrix<typename DerivedZ::RealScalar> project_constant_modulus(
    const Eigen::MatrixBase<DerivedZ>& Z, typename DerivedZ::RealScalar modulus,
    const Eigen::MatrixBase<DerivedPrev>& previous) {
  using Real = typename DerivedZ::RealScalar;
  eigen_assert(Z.rows() == previous.rows() && Z.cols() == previous.cols());
  CMatrix<Real> out(Z.rows(), Z.cols());
  for (Eigen::Index j = 0; j < Z.cols(); ++j) {
    for (Eigen::Index i = 0; i < Z.rows(); ++i) {
      const Complex<Real> z = Z(i, j);
      const Complex<Real> source = (z == Complex<Real>(0)) ? Complex<Real>(previous(i, j)) : z;
      out(i, j) = std::polar(modulus, std::arg(source));
    }
  }
  return out;
}

/// First row of the antenna block driven by RF chain `n` in the partially
/// connected structure; each block spans M / N_RF rows.
inline Eigen::Index pcs_block_start(Eigen::Index M, Eigen::Index N_RF, Eigen::Index n) {
  return n * (M / N_RF);
}

/// Projection onto block-diagonal analog precoders: entries inside block n of
/// column n get modulus sqrt(N_RF/M) and the phase of Z (previous phase if Z
/// is zero there); every other entry is exactly zero.
template <typename DerivedZ, typename DerivedPrev>
CMatrix<typename DerivedZ::RealScalar> project_block_diagonal(
    const Eigen::MatrixBase<DerivedZ>& Z, const Eigen::MatrixBase<DerivedPrev>& previous) {
  using Real = typename DerivedZ::RealScalar;
  const Eigen::Index M = Z.rows();
  const Eigen::Index N_RF = Z.cols();
  if (N_RF == 0 || M % N_RF != 0) throw ConfigError("N_RF divides M violated (partially connected)");
  const Eigen::Index block = M / N_RF;
  const Real modulus = std::sqrt(Real(N_RF) / Real(M));
  CMatrix<Real> out = CMatrix<Real>::Zero(M, N_RF);
  for (Eigen::Index n = 0; n < N_RF; ++n) {
    const Eigen::Index start = pcs_block_start(M, N_RF, n);
    out.block(start, n, block, 1) =
        project_constant_modulus(Z.block(start, n, block, 1), modulus, previous.block(start, n, block, 1));
  }
  return out;
}

/// Euclidean projection onto the ball ||x||_2 <= radius.
template <typename Derived>
CVector<typename Derived::RealScalar> project_ball(const Eigen::MatrixBase<Derived>& x,
                                                   typename Derived::RealScalar radius) {
  using Real = typename Derived::RealScalar;
  const Real norm = x.norm();
  if (norm <= radius) return x;
  return (radius / norm) * x;
}

}  // namespace rishp

#endif  // RISHP_OBJECTIVE_HPP
