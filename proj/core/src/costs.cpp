#include "gmr/costs.hpp"

#include <random>
#include <sstream>

namespace gmr {
namespace {

// log p(x) for a fixed mixture with the per-component constants hoisted and
// a reusable scratch vector, for the Monte Carlo inner loop.
class MixtureLogDensity {
 public:
  explicit MixtureLogDensity(const GaussianMixture& m) : m_(m), scratch_(m.dim()) {
    for (const auto& c : m.components()) {
      offset_.push_back(std::log(c.weight()) -
                        0.5 * (static_cast<double>(c.dim()) * kLog2Pi + c.log_det()));
    }
  }

  double operator()(const Vector& x) {
    double acc = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < m_.size(); ++k) {
      scratch_.noalias() = x - m_[k].mean();
      m_[k].chol_lower().triangularView<Eigen::Lower>().solveInPlace(scratch_);
      acc = log_add_exp(acc, offset_[k] - 0.5 * scratch_.squaredNorm());
    }
    return acc;
  }

 private:
  const GaussianMixture& m_;
  std::vector<double> offset_;
  Vector scratch_;
};

}  // namespace

std::string_view to_string(CostKind kind) {
  switch (kind) {
    case CostKind::kRunnallsB: return "runnalls";
    case CostKind::kWilliamsISE: return "williams";
    case CostKind::kArklFull: return "arkl";
    case CostKind::kArklSimple: return "arkl-simple";
  }
  return "unknown";
}

CostKind parse_cost_kind(std::string_view name) {
  if (name == "runnalls") return CostKind::kRunnallsB;
  if (name == "williams") return CostKind::kWilliamsISE;
  if (name == "arkl") return CostKind::kArklFull;
  if (name == "arkl-simple") return CostKind::kArklSimple;
  throw ValidationError("unknown reduction method '" + std::string(name) +
                        "' (expected runnalls, williams, arkl, arkl-simple)");
}

namespace kernel {

double runnalls(double w_i, double w_j, double d_i, double d_j) {
  return w_i * d_i + w_j * d_j;
}

double log_sum_merge(double w_i, double w_j, double a_i, double a_j) {
  const double w = w_i + w_j;
  if (!(w_i > 0.0) || !(w_j > 0.0)) {
    throw ValidationError("merge cost: weights must be positive");
  }
  return w * std::log(w) -
         w * log_add_exp(std::log(w_i) - a_i, std::log(w_j) - a_j);
}

double log_sum_prune(double w_pruned, double w_partner, double d) {
  const double rest = 1.0 - w_pruned;
  return -std::log(rest) -
         (w_partner / rest) * softplus(std::log(w_pruned / w_partner) - d);
}

}  // namespace kernel

double ise_analytic(const GaussianMixture& p, const GaussianMixture& q) {
  if (p.dim() != q.dim()) throw ValidationError("ise_analytic: dimension mismatch");
  auto cross = [](const GaussianMixture& a, const GaussianMixture& b) {
    double acc = 0.0;
    for (const auto& ca : a.components()) {
      for (const auto& cb : b.components()) {
        acc += ca.weight() * cb.weight() * inner_product(ca, cb);
      }
    }
    return acc;
  };
  const double value = cross(p, p) + cross(q, q) - 2.0 * cross(p, q);
  return std::max(value, 0.0);
}

DivergenceEstimate mc_kld(const GaussianMixture& from, const GaussianMixture& to,
                          std::size_t n, std::uint64_t seed) {
  if (from.dim() != to.dim()) throw ValidationError("mc_kld: dimension mismatch");
  if (n < 1000) throw ValidationError("mc_kld: need at least 1000 samples");
  if (!from.is_normalized() || !to.is_normalized()) {
    throw ValidationError("mc_kld: mixtures must be normalized");
  }
  const auto xs = sample(from, n, seed);
  MixtureLogDensity log_from(from);
  MixtureLogDensity log_to_density(to);
  // Welford accumulation of log from(x) - log to(x).
  double mean = 0.0;
  double m2 = 0.0;
  std::size_t count = 0;
  for (const auto& x : xs) {
    const double log_to = log_to_density(x);
    if (!(log_to > tol::kLogDensityFloor)) {
      std::ostringstream os;
      os << "mc_kld: target density underflows to zero at x = ["
         << x.transpose() << "]";
      throw NumericalError(os.str());
    }
    const double v = log_from(x) - log_to;
    ++count;
    const double delta = v - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (v - mean);
  }
  DivergenceEstimate out;
  out.value = mean;
  out.samples = n;
  const double var = m2 / static_cast<double>(n - 1);
  out.std_error = std::sqrt(var / static_cast<double>(n));
  return out;
}

double runnalls_bound(const GaussianComponent& a, const GaussianComponent& b) {
  const GaussianComponent merged = moment_match_merge(a, b);
  return kernel::runnalls(a.weight(), b.weight(), kld_gauss(a, merged),
                          kld_gauss(b, merged));
}

double lemma1_bound(const GaussianComponent& k, const GaussianComponent& i,
                    const GaussianComponent& j, double w_i, double w_j) {
  if (!(w_i > 0.0) || !(w_j > 0.0)) {
    throw ValidationError("lemma1_bound: weights must be positive");
  }
  return -log_add_exp(std::log(w_i) - kld_gauss(k, i),
                      std::log(w_j) - kld_gauss(k, j));
}

double crude_prune_bound(double w) {
  if (!(w >= 0.0) || w >= 1.0) {
    std::ostringstream os;
    os << "crude_prune_bound: weight " << w << " outside [0, 1)";
    throw ValidationError(os.str());
  }
  return -std::log1p(-w);
}

Matrix pairwise_kld_matrix(const GaussianMixture& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Matrix out = Matrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      if (r != c) out(r, c) = kld_gauss(m[r], m[c]);
    }
  }
  return out;
}

double arkl_prune_cost(const GaussianMixture& m, std::size_t i,
                       const Matrix& pairwise_kld) {
  const std::size_t n = m.size();
  if (n < 2) throw ValidationError("arkl_prune_cost: singleton mixture");
  if (i >= n) throw ValidationError("arkl_prune_cost: index out of range");
  if (pairwise_kld.rows() != static_cast<Eigen::Index>(n) ||
      pairwise_kld.cols() != static_cast<Eigen::Index>(n)) {
    throw ValidationError("arkl_prune_cost: KLD matrix does not match mixture");
  }
  const double w_i = m[i].weight();
  if (!(w_i < 1.0)) {
    throw ValidationError("arkl_prune_cost: cannot prune a component of weight 1");
  }
  double best = std::numeric_limits<double>::infinity();
  const auto col = static_cast<Eigen::Index>(i);
  for (std::size_t j = 0; j < n; ++j) {
    if (j == i) continue;
    best = std::min(best, kernel::log_sum_prune(
                              w_i, m[j].weight(),
                              pairwise_kld(static_cast<Eigen::Index>(j), col)));
  }
  return best;
}

double simple_merge_bound(const GaussianComponent& i, const GaussianComponent& j) {
  const GaussianComponent merged = moment_match_merge(i, j);
  return kernel::log_sum_merge(i.weight(), j.weight(), kld_gauss(merged, i),
                               kld_gauss(merged, j));
}

double switched_divergence_V(const GaussianComponent& k,
                             const GaussianComponent& i,
                             const GaussianComponent& j) {
  // q_k q_i = N(mu_i; mu_k, S_k + S_i) N(x; mu*, S*)
  const ProductDecomposition prod = product_decompose(i, k);
  const double overlap = std::exp(prod.log_scale - log_max_value(i));
  const double log_ratio_under_product =
      expected_log(prod.mean_star, prod.cov_star, k) -
      expected_log(prod.mean_star, prod.cov_star, j);
  return kld_gauss(k, j) - overlap * log_ratio_under_product;
}

double alpha_star(double w_i, double w_j, double v_i, double v_j) {
  if (!(w_i > 0.0) || !(w_j > 0.0)) {
    throw ValidationError("alpha_star: weights must be positive");
  }
  const double t = (std::log(w_j) - v_j) - (std::log(w_i) - v_i);
  // logistic(-t), written to avoid overflow on either side
  return t > 0.0 ? std::exp(-t) / (1.0 + std::exp(-t)) : 1.0 / (1.0 + std::exp(t));
}

double arkl_merge_cost(const GaussianComponent& i, const GaussianComponent& j) {
  const GaussianComponent merged = moment_match_merge(i, j);
  return kernel::log_sum_merge(i.weight(), j.weight(),
                               switched_divergence_V(merged, j, i),
                               switched_divergence_V(merged, i, j));
}

}  // namespace gmr
