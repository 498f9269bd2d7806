#pragma once

#include <Eigen/Cholesky>

#include "gmr/numeric.hpp"

namespace gmr {

/// One weighted multivariate Gaussian w * N(x; mean, cov).
///
/// Construction validates the invariants (matching shapes, symmetric
/// covariance, successful Cholesky factorization, weight in [0, 1]) and
/// caches the factorization, so every later operation is a triangular solve.
/// Instances are immutable.
class GaussianComponent {
 public:
  GaussianComponent(double weight, Vector mean, Matrix cov);

  double weight() const { return weight_; }
  const Vector& mean() const { return mean_; }
  const Matrix& cov() const { return cov_; }
  int dim() const { return static_cast<int>(mean_.size()); }

  /// Lower Cholesky factor L with cov = L L^T.
  const Matrix& chol_lower() const { return chol_; }
  double log_det() const { return log_det_; }

  /// Solves cov * x = rhs through the cached factor.
  Vector solve(const Vector& rhs) const;
  Matrix solve(const Matrix& rhs) const;

  GaussianComponent with_weight(double weight) const;

 private:
  double weight_;
  Vector mean_;
  Matrix cov_;
  Matrix chol_;
  double log_det_ = 0.0;
};

/// N(x; a) * N(x; b) == scale * N(x; mean_star, cov_star).
struct ProductDecomposition {
  double scale = 0.0;
  double log_scale = 0.0;
  Vector mean_star;
  Matrix cov_star;
};

/// log N(x; mu, Sigma). Weight excluded.
double log_pdf(const GaussianComponent& c, const Vector& x);

/// (x - mu)^T Sigma^{-1} (x - mu).
double mahalanobis_sq(const GaussianComponent& c, const Vector& x);

/// KL divergence D(N_from || N_to) between the normalized densities.
///
/// Uses the standard orientation 1/2 log(|S_to| / |S_from|); the weights of
/// both components are ignored.
double kld_gauss(const GaussianComponent& from, const GaussianComponent& to);

/// Decomposes the pointwise product of two Gaussian densities.
ProductDecomposition product_decompose(const GaussianComponent& a,
                                       const GaussianComponent& b);

/// Gaussian inner product <N_a, N_b> = N(mu_a; mu_b, S_a + S_b).
double inner_product(const GaussianComponent& a, const GaussianComponent& b);

/// E_under[log N(x; of)] in closed form.
double expected_log(const GaussianComponent& under,
                    const GaussianComponent& of);

/// Same as above with the expectation density given by its first two
/// moments. The covariance only has to be positive semidefinite.
double expected_log(const Vector& under_mean, const Matrix& under_cov,
                    const GaussianComponent& of);

/// Differential entropy 1/2 log|2 pi e S|.
double entropy(const GaussianComponent& c);

/// Peak density value (2 pi)^{-k/2} |S|^{-1/2}, and its logarithm.
double max_value(const GaussianComponent& c);
double log_max_value(const GaussianComponent& c);

/// Moment-matched merge of a weighted pair. The result carries the summed
/// weight and preserves the pair's mean and covariance.
GaussianComponent moment_match_merge(const GaussianComponent& a,
                                     const GaussianComponent& b);

/// cov + epsilon * I. Offered to callers that regularize explicitly; nothing
/// in this header regularizes silently.
Matrix jitter(const Matrix& cov, double epsilon);

}  // namespace gmr
