#ifndef RISHP_TESTS_ORACLE_HPP
#define RISHP_TESTS_ORACLE_HPP

// Independent references for the test suites. Nothing here calls into the
// solver or objective code it is used to check.

#include <cstdint>
#include <functional>

#include "rishp/channel.hpp"
#include "rishp/types.hpp"

namespace rishp::oracle {

/// Central difference (f(X + eps D) - f(X - eps D)) / (2 eps).
template <typename F, typename Mat>
double fd_directional(F&& f, const Mat& X, const Mat& D, double eps) {
  const Mat plus = X + eps * D;
  const Mat minus = X - eps * D;
  return (f(plus) - f(minus)) / (2.0 * eps);
}

/// 2 Re Tr{G^H D}.
template <typename Mat>
double wirtinger_directional(const Mat& G, const Mat& D) {
  double acc = 0.0;
  for (Eigen::Index j = 0; j < G.cols(); ++j) {
    for (Eigen::Index i = 0; i < G.rows(); ++i) acc += 2.0 * (std::conj(G(i, j)) * D(i, j)).real();
  }
  return acc;
}

/// Symbol-error form of the modified MSE: (P/K) ||H F - I||_F^2 + sigma2 ||F||_F^2,
/// accumulated entry by entry.
double mse_reference(const CMatrixXd& H, const CMatrixXd& F, double P, int K, double sigma2);

/// H_I diag(psi) H_B by explicit triple loop.
CMatrixXd cascade_reference(const CMatrixXd& H_I, const CVectorXd& psi, const CMatrixXd& H_B);

/// Minimizer over F_BB_bar of the modified MSE, as a real-valued stacked
/// least-squares problem solved with column-pivoting QR.
CMatrixXd ls_reference(const CMatrixXd& H, const CMatrixXd& F_RF, double P, int K, double sigma2);

struct GridResult {
  CVectorXd psi;
  double value = 0.0;
};

/// Exhaustive search of RIS phases on a uniform grid of `grid_points` phases
/// per element (modulus 1/sqrt(R)) with the full precoder F held fixed.
/// Requires R <= 3 and grid_points^R <= 1e6.
GridResult grid_search_ris(const ChannelSet& channels, const CMatrixXd& F, double P, int K, double sigma2,
                           int grid_points);

/// Standard complex Gaussian matrix with unit-variance entries.
CMatrixXd random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Random complex matrix scaled to unit Frobenius norm.
CMatrixXd random_direction(Eigen::Index rows, Eigen::Index cols, Rng& rng);

}  // namespace rishp::oracle

#endif  // RISHP_TESTS_ORACLE_HPP
