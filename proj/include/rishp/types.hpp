#ifndef RISHP_TYPES_HPP
#define RISHP_TYPES_HPP

#include <complex>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace rishp {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cd = Complex<double>;
using CMatrixXd = CMatrix<double>;
using CVectorXd = CVector<double>;
using RVectorXd = RVector<double>;

/// Random engine used for every stochastic draw in the library.
using Rng = std::mt19937_64;

/// Thrown for configuration values that violate a model invariant.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thrown when an optimization step cannot proceed (degenerate channel,
/// singular system, undefined step size).
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rishp

#endif  // RISHP_TYPES_HPP
