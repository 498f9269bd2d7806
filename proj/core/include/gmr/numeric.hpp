#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gmr {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Library-wide tolerances. Everything that validates or compares against a
// tolerance reads it from here.
namespace tol {
/// max|S - S^T| <= kSymmetryRel * max|S| for a covariance to be accepted.
inline constexpr double kSymmetryRel = 1e-12;
/// Component weights may exceed one by at most this much.
inline constexpr double kWeightExcess = 1e-9;
/// A mixture is normalized when |sum(w) - 1| <= kWeightSum.
inline constexpr double kWeightSum = 1e-9;
/// log of the smallest positive double; densities below it are exactly zero.
inline const double kLogDensityFloor =
    std::log(std::numeric_limits<double>::denorm_min());
}  // namespace tol

inline constexpr double kLog2Pi = 1.8378770664093454835606594728112;

/// Input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure failed (factorization, underflow, non-finite cost).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// log(exp(a) + exp(b)) without overflow or premature underflow.
inline double log_add_exp(double a, double b) {
  if (a == -std::numeric_limits<double>::infinity()) return b;
  if (b == -std::numeric_limits<double>::infinity()) return a;
  const double hi = std::max(a, b);
  return hi + std::log1p(std::exp(-std::abs(a - b)));
}

/// log(1 + exp(t)).
inline double softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

}  // namespace gmr
