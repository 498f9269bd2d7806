#include "gmr/gauss.hpp"

#include <sstream>

namespace gmr {
namespace {

// Cholesky factor of a symmetric matrix; throws when it is not positive
// definite. Eigen's LLT reports failure on a non-positive pivot.
Matrix factor_or_throw(const Matrix& s, const char* what) {
  Eigen::LLT<Matrix> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(std::string(what) + ": matrix is not positive definite");
  }
  Matrix l = llt.matrixL();
  if ((l.diagonal().array() <= 0.0).any() || !l.allFinite()) {
    throw NumericalError(std::string(what) + ": degenerate Cholesky factor");
  }
  return l;
}

double log_det_from_factor(const Matrix& l) {
  return 2.0 * l.diagonal().array().log().sum();
}

void require_same_dim(const GaussianComponent& a, const GaussianComponent& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream os;
    os << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw ValidationError(os.str());
  }
}

// log N(x; mean, S) given the lower factor of S.
double log_normal(const Vector& diff, const Matrix& l, double log_det) {
  const Vector z = l.triangularView<Eigen::Lower>().solve(diff);
  return -0.5 * (static_cast<double>(diff.size()) * kLog2Pi + log_det +
                 z.squaredNorm());
}

}  // namespace

GaussianComponent::GaussianComponent(double weight, Vector mean, Matrix cov)
    : weight_(weight), mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto k = mean_.size();
  if (k == 0) throw ValidationError("component mean must be non-empty");
  if (cov_.rows() != k || cov_.cols() != k) {
    std::ostringstream os;
    os << "covariance is " << cov_.rows() << "x" << cov_.cols()
       << " but mean has length " << k;
    throw ValidationError(os.str());
  }
  if (!std::isfinite(weight_) || weight_ < 0.0 ||
      weight_ > 1.0 + tol::kWeightExcess) {
    std::ostringstream os;
    os << "component weight " << weight_ << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  if (!mean_.allFinite() || !cov_.allFinite()) {
    throw ValidationError("component parameters must be finite");
  }
  const double scale = cov_.cwiseAbs().maxCoeff();
  const double asym = (cov_ - cov_.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol::kSymmetryRel * scale) {
    std::ostringstream os;
    os << "covariance is not symmetric (max asymmetry " << asym << ")";
    throw ValidationError(os.str());
  }
  cov_ = 0.5 * (cov_ + cov_.transpose());
  chol_ = factor_or_throw(cov_, "component covariance");
  log_det_ = log_det_from_factor(chol_);
}

Vector GaussianComponent::solve(const Vector& rhs) const {
  const auto l = chol_.triangularView<Eigen::Lower>();
  return l.transpose().solve(l.solve(rhs));
}

Matrix GaussianComponent::solve(const Matrix& rhs) const {
  const auto l = chol_.triangularView<Eigen::Lower>();
  return l.transpose().solve(l.solve(rhs));
}

GaussianComponent GaussianComponent::with_weight(double weight) const {
  GaussianComponent out = *this;
  if (!std::isfinite(weight) || weight < 0.0 ||
      weight > 1.0 + tol::kWeightExcess) {
    std::ostringstream os;
    os << "component weight " << weight << " outside [0, 1]";
    throw ValidationError(os.str());
  }
  out.weight_ = weight;
  return out;
}

double log_pdf(const GaussianComponent& c, const Vector& x) {
  if (x.size() != c.dim()) {
    std::ostringstream os;
    os << "point has dimension " << x.size() << ", component " << c.dim();
    throw ValidationError(os.str());
  }
  return log_normal(x - c.mean(), c.chol_lower(), c.log_det());
}

double mahalanobis_sq(const GaussianComponent& c, const Vector& x) {
  if (x.size() != c.dim()) {
    throw ValidationError("mahalanobis_sq: dimension mismatch");
  }
  return c.chol_lower().triangularView<Eigen::Lower>().solve(x - c.mean())
      .squaredNorm();
}

double kld_gauss(const GaussianComponent& from, const GaussianComponent& to) {
  require_same_dim(from, to);
  const auto l_to = to.chol_lower().triangularView<Eigen::Lower>();
  // tr(S_to^{-1} S_from) = ||L_to^{-1} L_from||_F^2
  const double trace = l_to.solve(from.chol_lower()).squaredNorm();
  const double maha = l_to.solve(to.mean() - from.mean()).squaredNorm();
  const double k = static_cast<double>(from.dim());
  const double d = 0.5 * (to.log_det() - from.log_det() - k + trace + maha);
  return std::max(d, 0.0);
}

ProductDecomposition product_decompose(const GaussianComponent& a,
                                       const GaussianComponent& b) {
  require_same_dim(a, b);
  const Matrix sum = a.cov() + b.cov();
  const Matrix l = factor_or_throw(sum, "product_decompose");
  const auto lv = l.triangularView<Eigen::Lower>();

  ProductDecomposition out;
  out.log_scale = log_normal(b.mean() - a.mean(), l, log_det_from_factor(l));
  out.scale = std::exp(out.log_scale);

  // gain = S_a (S_a + S_b)^{-1}, formed as the transpose of a solve.
  const Matrix gain_t = lv.transpose().solve(lv.solve(a.cov()));
  out.mean_star = a.mean() + gain_t.transpose() * (b.mean() - a.mean());
  Matrix cov_star = a.cov() - a.cov() * gain_t;
  out.cov_star = 0.5 * (cov_star + cov_star.transpose());
  return out;
}

double inner_product(const GaussianComponent& a, const GaussianComponent& b) {
  require_same_dim(a, b);
  const Matrix sum = a.cov() + b.cov();
  const Matrix l = factor_or_throw(sum, "inner_product");
  return std::exp(log_normal(a.mean() - b.mean(), l, log_det_from_factor(l)));
}

double expected_log(const Vector& under_mean, const Matrix& under_cov,
                    const GaussianComponent& of) {
  if (under_mean.size() != of.dim() || under_cov.rows() != of.dim() ||
      under_cov.cols() != of.dim()) {
    throw ValidationError("expected_log: dimension mismatch");
  }
  const double k = static_cast<double>(of.dim());
  const double trace = of.solve(under_cov).trace();
  const double maha = mahalanobis_sq(of, under_mean);
  return -0.5 * (k * kLog2Pi + of.log_det()) - 0.5 * (trace + maha);
}

double expected_log(const GaussianComponent& under,
                    const GaussianComponent& of) {
  require_same_dim(under, of);
  return expected_log(under.mean(), under.cov(), of);
}

double entropy(const GaussianComponent& c) {
  return 0.5 * (static_cast<double>(c.dim()) * (kLog2Pi + 1.0) + c.log_det());
}

double log_max_value(const GaussianComponent& c) {
  return -0.5 * (static_cast<double>(c.dim()) * kLog2Pi + c.log_det());
}

double max_value(const GaussianComponent& c) {
  return std::exp(log_max_value(c));
}

GaussianComponent moment_match_merge(const GaussianComponent& a,
                                     const GaussianComponent& b) {
  require_same_dim(a, b);
  const double total = a.weight() + b.weight();
  if (!(total > 0.0)) {
    throw ValidationError("moment_match_merge: total weight must be positive");
  }
  const double wa = a.weight() / total;
  const double wb = b.weight() / total;
  const Vector diff = a.mean() - b.mean();
  Vector mean = wa * a.mean() + wb * b.mean();
  Matrix cov = wa * a.cov() + wb * b.cov() + (wa * wb) * (diff * diff.transpose());
  return GaussianComponent(total, std::move(mean), std::move(cov));
}

Matrix jitter(const Matrix& cov, double epsilon) {
  if (epsilon < 0.0) throw ValidationError("jitter: epsilon must be >= 0");
  return cov + epsilon * Matrix::Identity(cov.rows(), cov.cols());
}

}  // namespace gmr
