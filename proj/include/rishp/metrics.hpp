#ifndef RISHP_METRICS_HPP
#define RISHP_METRICS_HPP

#include <cmath>

#include "rishp/types.hpp"

namespace rishp {

template <typename Real>
struct LinkMetrics {
  RVector<Real> sinr;
  Real sum_se = 0;
  Real mse = 0;
  Real zeta = 0;
};

/// SINR of each user with uniform per-stream power P/K and receiver noise
/// sigma2. Column k of F serves user k.
template <typename DerivedH, typename DerivedF>
RVector<typename DerivedH::RealScalar> sinr_per_user(const Eigen::MatrixBase<DerivedH>& H,
                                                     const Eigen::MatrixBase<DerivedF>& F,
                                                     typename DerivedH::RealScalar P, int K,
                                                     typename DerivedH::RealScalar sigma2) {
  using Real = typename DerivedH::RealScalar;
  const Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> power = (H * F).cwiseAbs2() * (P / Real(K));
  RVector<Real> sinr(power.rows());
  for (Eigen::Index k = 0; k < power.rows(); ++k) {
    const Real signal = power(k, k);
    const Real interference = power.row(k).sum() - signal;
    sinr(k) = signal / (interference + sigma2);
  }
  return sinr;
}

/// Sum of log2(1 + SINR_k), bits/s/Hz.
template <typename Derived>
typename Derived::Scalar sum_spectral_efficiency(const Eigen::MatrixBase<Derived>& sinr) {
  using Real = typename Derived::Scalar;
  Real se = 0;
  for (Eigen::Index k = 0; k < sinr.size(); ++k) se += std::log2(Real(1) + sinr(k));
  return se;
}

/// MSE between sent and received symbols with receive gain zeta:
///   P - (2P/K) zeta Re Tr{F^H H^H} + (P zeta^2 / K) ||H F||^2 + sigma2 zeta^2 K.
template <typename DerivedH, typename DerivedF>
typename DerivedH::RealScalar mse_actual(const Eigen::MatrixBase<DerivedH>& H,
                                         const Eigen::MatrixBase<DerivedF>& F,
                                         typename DerivedH::RealScalar zeta,
                                         typename DerivedH::RealScalar P, int K,
                                         typename DerivedH::RealScalar sigma2) {
  using Real = typename DerivedH::RealScalar;
  const CMatrix<Real> HF = H * F;
  const Real per_stream = P / Real(K);
  return P - Real(2) * per_stream * zeta * HF.trace().real() + per_stream * zeta * zeta * HF.squaredNorm() +
         sigma2 * zeta * zeta * Real(K);
}

template <typename DerivedH, typename DerivedF>
LinkMetrics<typename DerivedH::RealScalar> link_metrics(const Eigen::MatrixBase<DerivedH>& H,
                                                        const Eigen::MatrixBase<DerivedF>& F,
                                                        typename DerivedH::RealScalar zeta,
                                                        typename DerivedH::RealScalar P, int K,
                                                        typename DerivedH::RealScalar sigma2) {
  LinkMetrics<typename DerivedH::RealScalar> m;
  m.sinr = sinr_per_user(H, F, P, K, sigma2);
  m.sum_se = sum_spectral_efficiency(m.sinr);
  m.mse = mse_actual(H, F, zeta, P, K, sigma2);
  m.zeta = zeta;
  return m;
}

}  // namespace rishp

#endif  // RISHP_METRICS_HPP
