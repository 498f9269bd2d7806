#include "gmr/cluster.hpp"

#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace gmr {
namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

Matrix mat2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

double mean_variance(const std::vector<Vector>& points) {
  const auto k = points.front().size();
  Vector mean = Vector::Zero(k);
  for (const auto& x : points) mean += x;
  mean /= static_cast<double>(points.size());
  double acc = 0.0;
  for (const auto& x : points) acc += (x - mean).squaredNorm();
  const double var = acc / (static_cast<double>(points.size()) * static_cast<double>(k));
  return var > 0.0 ? var : 1.0;
}

// k-means++ seeding of the component means.
std::vector<Vector> seed_means(const std::vector<Vector>& points, std::size_t k,
                               std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vector> centers{points[pick(rng)]};
  std::vector<double> d2(points.size(), std::numeric_limits<double>::infinity());
  while (centers.size() < k) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      d2[i] = std::min(d2[i], (points[i] - centers.back()).squaredNorm());
      total += d2[i];
    }
    std::size_t chosen = pick(rng);
    if (total > 0.0) {
      const double u = unif(rng) * total;
      double acc = 0.0;
      for (std::size_t i = 0; i < points.size(); ++i) {
        acc += d2[i];
        if (acc >= u) {
          chosen = i;
          break;
        }
      }
    }
    centers.push_back(points[chosen]);
  }
  return centers;
}

// Lifts a covariance whose spectrum dropped below `floor`. Returns false
// when nothing had to be done.
bool regularize(Matrix& cov, double floor) {
  cov = 0.5 * (cov + cov.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> eig(cov, Eigen::EigenvaluesOnly);
  if (eig.info() == Eigen::Success && eig.eigenvalues().minCoeff() >= floor) {
    return false;
  }
  double eps = floor;
  for (int attempt = 0; attempt < 3; ++attempt) {
    Matrix lifted = jitter(cov, eps);
    Eigen::LLT<Matrix> llt(lifted);
    if (llt.info() == Eigen::Success) {
      Eigen::SelfAdjointEigenSolver<Matrix> check(lifted, Eigen::EigenvaluesOnly);
      if (check.eigenvalues().minCoeff() > 0.0) {
        cov = std::move(lifted);
        return true;
      }
    }
    eps *= 10.0;
  }
  throw EmError("em_fit: covariance stayed singular after 3 jitter retries");
}

struct EStep {
  Matrix resp;
  double log_likelihood = 0.0;
};

EStep e_step(const std::vector<Vector>& points,
             const std::vector<GaussianComponent>& comps) {
  const auto n = static_cast<Eigen::Index>(points.size());
  const auto k = static_cast<Eigen::Index>(comps.size());
  EStep out{Matrix(n, k), 0.0};
  for (Eigen::Index i = 0; i < n; ++i) {
    double lse = -std::numeric_limits<double>::infinity();
    for (Eigen::Index c = 0; c < k; ++c) {
      const double v = std::log(comps[c].weight()) + log_pdf(comps[c], points[i]);
      out.resp(i, c) = v;
      lse = log_add_exp(lse, v);
    }
    out.log_likelihood += lse;
    double row = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) {
      out.resp(i, c) = std::exp(out.resp(i, c) - lse);
      row += out.resp(i, c);
    }
    out.resp.row(i) /= row;
  }
  return out;
}

std::size_t argmax_row(const Matrix& m, Eigen::Index row) {
  Eigen::Index best = 0;
  m.row(row).maxCoeff(&best);
  return static_cast<std::size_t>(best);
}

}  // namespace

GaussianMixture table2_mixture() {
  return GaussianMixture({
      GaussianComponent(0.2, vec2(-5, 5), mat2(1, 0.5, 0.5, 0.5)),
      GaussianComponent(0.2, vec2(4, 5), mat2(1, 0.2, 0.2, 0.5)),
      GaussianComponent(0.2, vec2(4, -4), mat2(2, 0, 0, 1)),
      GaussianComponent(0.2, vec2(-4, -4), mat2(2, -2, -2, 3)),
      GaussianComponent(0.1, vec2(-7, 0), mat2(0.1, 0, 0, 3)),
      GaussianComponent(0.1, vec2(7, 0), mat2(0.1, 0, 0, 3)),
  });
}

LabeledDataset generate_table2_data(std::size_t n, std::size_t m, double side,
                                    std::uint64_t seed) {
  if (!(side > 0.0)) throw ValidationError("generate_table2_data: side must be > 0");
  LabeledDataset out;
  std::vector<std::size_t> origin;
  out.points = sample(table2_mixture(), n, seed, origin);

  // A separate stream for the outliers keeps the inliers identical across m.
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(-0.5 * side, 0.5 * side);
  for (std::size_t s = 0; s < m; ++s) {
    const double x = unif(rng);
    const double y = unif(rng);
    out.points.push_back(vec2(x, y));
    origin.push_back(kSpurious);
  }
  out.labels = origin;
  out.truth = std::move(origin);
  return out;
}

EmResult em_fit(const std::vector<Vector>& points, const EmConfig& cfg) {
  if (cfg.n_clusters < 1) throw ValidationError("em_fit: n_clusters must be >= 1");
  if (!(cfg.tol > 0.0)) throw ValidationError("em_fit: tol must be > 0");
  if (cfg.jitter < 0.0) throw ValidationError("em_fit: jitter must be >= 0");
  if (points.size() < cfg.n_clusters) {
    std::ostringstream os;
    os << "em_fit: " << points.size() << " points for " << cfg.n_clusters
       << " clusters";
    throw ValidationError(os.str());
  }
  const auto dim = points.front().size();
  for (const auto& x : points) {
    if (x.size() != dim) throw ValidationError("em_fit: inconsistent point dimension");
  }

  std::mt19937_64 rng(cfg.seed);
  const double data_var = mean_variance(points);
  const double floor = cfg.jitter * data_var;
  const std::size_t k = cfg.n_clusters;
  const double n = static_cast<double>(points.size());
  const Matrix init_cov = data_var * Matrix::Identity(dim, dim);

  std::vector<GaussianComponent> comps;
  for (auto& mean : seed_means(points, k, rng)) {
    comps.emplace_back(1.0 / static_cast<double>(k), std::move(mean), init_cov);
  }

  EmResult result{GaussianMixture(comps), Matrix(), {}, {}, 0, false, 0, 0};
  std::uniform_int_distribution<std::size_t> pick(0, points.size() - 1);
  EStep e = e_step(points, comps);
  result.log_likelihood.push_back(e.log_likelihood);

  for (std::size_t iter = 0; iter < cfg.max_iters; ++iter) {
    bool regularized = false;
    std::vector<double> w(k);
    std::vector<Vector> means(k);
    std::vector<Matrix> covs(k);
    for (std::size_t c = 0; c < k; ++c) {
      const auto col = static_cast<Eigen::Index>(c);
      const double nk = e.resp.col(col).sum();
      if (nk < 1e-8 * n) {
        // Collapsed component: re-seed on a random point.
        means[c] = points[pick(rng)];
        covs[c] = init_cov;
        w[c] = 1.0 / n;
        ++result.reinit_events;
        regularized = true;
        continue;
      }
      Vector mean = Vector::Zero(dim);
      for (std::size_t i = 0; i < points.size(); ++i) {
        mean += e.resp(static_cast<Eigen::Index>(i), col) * points[i];
      }
      mean /= nk;
      Matrix cov = Matrix::Zero(dim, dim);
      for (std::size_t i = 0; i < points.size(); ++i) {
        const Vector d = points[i] - mean;
        cov.noalias() += e.resp(static_cast<Eigen::Index>(i), col) * (d * d.transpose());
      }
      cov /= nk;
      if (regularize(cov, floor)) {
        ++result.jitter_events;
        regularized = true;
      }
      w[c] = nk / n;
      means[c] = std::move(mean);
      covs[c] = std::move(cov);
    }
    double wsum = 0.0;
    for (double v : w) wsum += v;
    comps.clear();
    for (std::size_t c = 0; c < k; ++c) {
      comps.emplace_back(w[c] / wsum, std::move(means[c]), std::move(covs[c]));
    }

    e = e_step(points, comps);
    result.log_likelihood.push_back(e.log_likelihood);
    result.regularized.push_back(regularized);
    result.iterations = iter + 1;
    const auto t = result.log_likelihood.size();
    if (!regularized &&
        std::abs(result.log_likelihood[t - 1] - result.log_likelihood[t - 2]) < cfg.tol) {
      result.converged = true;
      break;
    }
  }
  result.mixture = GaussianMixture(std::move(comps));
  result.responsibilities = std::move(e.resp);
  return result;
}

ReassignResult reduce_and_reassign(const GaussianMixture& mix,
                                   const Matrix& responsibilities,
                                   const std::vector<Vector>& points,
                                   std::size_t target, CostKind kind) {
  if (responsibilities.rows() != static_cast<Eigen::Index>(points.size()) ||
      responsibilities.cols() != static_cast<Eigen::Index>(mix.size())) {
    throw ValidationError("reduce_and_reassign: responsibilities do not match");
  }
  LabeledDataset data;
  data.points = points;
  data.labels.resize(points.size());
  for (std::size_t p = 0; p < points.size(); ++p) {
    data.labels[p] = argmax_row(responsibilities, static_cast<Eigen::Index>(p));
  }

  ReductionResult reduced = reduce(mix, target, kind);
  GaussianMixture current = mix;
  for (const auto& step : reduced.trace.steps) {
    const Hypothesis& h = step.chosen;
    GaussianMixture next = apply(current, h);
    for (std::size_t p = 0; p < points.size(); ++p) {
      std::size_t& label = data.labels[p];
      if (label == kDiscarded) continue;
      if (h.is_prune()) {
        if (label == h.j) {
          label = kDiscarded;
        } else if (label > h.j) {
          --label;
        }
        continue;
      }
      if (label == h.i || label == h.j) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < next.size(); ++c) {
          const double d = mahalanobis_sq(next[c], points[p]);
          if (d < best_d) {
            best_d = d;
            best = c;
          }
        }
        label = best;
      } else if (label > h.j) {
        --label;
      }
    }
    current = std::move(next);
  }
  return {std::move(reduced.mixture), std::move(data), std::move(reduced.trace)};
}

DiscardSummary summarize_discards(const LabeledDataset& data) {
  DiscardSummary s;
  s.points = data.points.size();
  for (std::size_t p = 0; p < data.labels.size(); ++p) {
    const bool discarded = data.labels[p] == kDiscarded;
    if (discarded) ++s.discarded;
    if (!data.truth) continue;
    const bool spurious = (*data.truth)[p] == kSpurious;
    if (spurious) ++s.spurious;
    if (spurious && discarded) ++s.spurious_discarded;
    if (!spurious && discarded) ++s.inliers_discarded;
  }
  if (data.truth) {
    const std::size_t inliers = s.points - s.spurious;
    s.spurious_recall = s.spurious ? double(s.spurious_discarded) / double(s.spurious) : 0.0;
    s.discard_precision = s.discarded ? double(s.spurious_discarded) / double(s.discarded) : 0.0;
    s.inlier_discard_rate = inliers ? double(s.inliers_discarded) / double(inliers) : 0.0;
  }
  return s;
}

}  // namespace gmr
