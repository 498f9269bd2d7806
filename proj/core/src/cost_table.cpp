#include "gmr/reduce.hpp"

#include <sstream>

namespace gmr {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

Matrix drop_row_col(const Matrix& a, std::size_t j) {
  const Eigen::Index n = a.rows();
  const Eigen::Index k = ix(j);
  Matrix out(n - 1, n - 1);
  for (Eigen::Index r = 0, rr = 0; r < n; ++r) {
    if (r == k) continue;
    for (Eigen::Index c = 0, cc = 0; c < n; ++c) {
      if (c == k) continue;
      out(rr, cc++) = a(r, c);
    }
    ++rr;
  }
  return out;
}

}  // namespace

EvalCounts& EvalCounts::operator+=(const EvalCounts& o) {
  kld += o.kld;
  inner_product += o.inner_product;
  switched_v += o.switched_v;
  pair_stats += o.pair_stats;
  return *this;
}

EvalCounts operator-(EvalCounts a, const EvalCounts& b) {
  a.kld -= b.kld;
  a.inner_product -= b.inner_product;
  a.switched_v -= b.switched_v;
  a.pair_stats -= b.pair_stats;
  return a;
}

CostTable::CostTable(const GaussianMixture& m, CostKind kind)
    : kind_(kind), mixture_(m), n_(m.size()) {
  if (!m.is_normalized()) {
    throw ValidationError("CostTable: mixture must be normalized");
  }
  pairs_.assign(n_ * n_, PairKernel{});
  if (kind_ == CostKind::kArklFull) kld_ = Matrix::Zero(ix(n_), ix(n_));
  if (kind_ == CostKind::kWilliamsISE) gram_ = Matrix::Zero(ix(n_), ix(n_));

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      if (kind_ == CostKind::kArklFull && i != j) {
        kld_(ix(i), ix(j)) = kld_gauss(mixture_[i], mixture_[j]);
        ++counts_.kld;
      }
      if (kind_ == CostKind::kWilliamsISE && j >= i) {
        const double g = inner_product(mixture_[i], mixture_[j]);
        gram_(ix(i), ix(j)) = g;
        gram_(ix(j), ix(i)) = g;
        ++counts_.inner_product;
      }
      if (j > i) pair(i, j) = compute_pair(i, j);
    }
  }
  refresh_costs();
}

CostTable::PairKernel CostTable::compute_pair(std::size_t i, std::size_t j) {
  const GaussianComponent& ci = mixture_[i];
  const GaussianComponent& cj = mixture_[j];
  PairKernel out;
  ++counts_.pair_stats;
  try {
    const GaussianComponent merged = moment_match_merge(ci, cj);
    switch (kind_) {
      case CostKind::kRunnallsB:
        out.a_i = kld_gauss(ci, merged);
        out.a_j = kld_gauss(cj, merged);
        counts_.kld += 2;
        break;
      case CostKind::kArklSimple:
        out.a_i = kld_gauss(merged, ci);
        out.a_j = kld_gauss(merged, cj);
        counts_.kld += 2;
        break;
      case CostKind::kArklFull:
        out.a_i = switched_divergence_V(merged, cj, ci);
        out.a_j = switched_divergence_V(merged, ci, cj);
        counts_.switched_v += 2;
        break;
      case CostKind::kWilliamsISE:
        out.a_i = inner_product(merged, ci);
        out.a_j = inner_product(merged, cj);
        out.self = inner_product(merged, merged);
        counts_.inner_product += 3;
        break;
    }
  } catch (const NumericalError&) {
    out = PairKernel{};
    out.degenerate = true;
  }
  return out;
}

void CostTable::compute_component_row(std::size_t i) {
  for (std::size_t k = 0; k < n_; ++k) {
    if (kind_ == CostKind::kArklFull && k != i) {
      kld_(ix(i), ix(k)) = kld_gauss(mixture_[i], mixture_[k]);
      kld_(ix(k), ix(i)) = kld_gauss(mixture_[k], mixture_[i]);
      counts_.kld += 2;
    }
    if (kind_ == CostKind::kWilliamsISE) {
      const double g = inner_product(mixture_[i], mixture_[k]);
      gram_(ix(i), ix(k)) = g;
      gram_(ix(k), ix(i)) = g;
      ++counts_.inner_product;
    }
    if (k != i) {
      pair(std::min(i, k), std::max(i, k)) = compute_pair(std::min(i, k), std::max(i, k));
    }
  }
}

void CostTable::remove_index(std::size_t j) {
  std::vector<PairKernel> next((n_ - 1) * (n_ - 1));
  for (std::size_t a = 0, aa = 0; a < n_; ++a) {
    if (a == j) continue;
    for (std::size_t b = 0, bb = 0; b < n_; ++b) {
      if (b == j) continue;
      next[aa * (n_ - 1) + bb] = pairs_[a * n_ + b];
      ++bb;
    }
    ++aa;
  }
  pairs_ = std::move(next);
  if (kld_.size() > 0) kld_ = drop_row_col(kld_, j);
  if (gram_.size() > 0) gram_ = drop_row_col(gram_, j);
  --n_;
}

void CostTable::update(const Hypothesis& h, const GaussianMixture& after) {
  validate(mixture_, h);
  if (after.size() + 1 != n_) {
    throw ValidationError("CostTable::update: mixture size does not follow h");
  }
  remove_index(h.j);
  mixture_ = after;
  if (h.is_merge()) compute_component_row(h.i);
  refresh_costs();
}

void CostTable::refresh_costs() {
  const Vector w = mixture_.weights();
  pair_cost_ = Matrix::Zero(ix(n_), ix(n_));
  prune_cost_.resize(0);

  double pp = 0.0;
  Vector gw;
  if (kind_ == CostKind::kWilliamsISE) {
    gw = gram_ * w;
    pp = w.dot(gw);
  }

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      const PairKernel& pk = pair(i, j);
      double c = kInf;
      if (!pk.degenerate) {
        const double wi = w[ix(i)];
        const double wj = w[ix(j)];
        switch (kind_) {
          case CostKind::kRunnallsB:
            c = kernel::runnalls(wi, wj, pk.a_i, pk.a_j);
            break;
          case CostKind::kArklSimple:
          case CostKind::kArklFull:
            c = kernel::log_sum_merge(wi, wj, pk.a_i, pk.a_j);
            break;
          case CostKind::kWilliamsISE: {
            // p - p_hat = w_i q_i + w_j q_j - w_ij q_ij, so only pair terms
            // survive in ||p - p_hat||^2.
            const double wij = wi + wj;
            c = wi * wi * gram_(ix(i), ix(i)) + wj * wj * gram_(ix(j), ix(j)) +
                2.0 * wi * wj * gram_(ix(i), ix(j)) -
                2.0 * wij * (wi * pk.a_i + wj * pk.a_j) + wij * wij * pk.self;
            c = std::max(c, 0.0);
            break;
          }
        }
      }
      pair_cost_(ix(i), ix(j)) = c;
    }
  }

  if (!considers_pruning(kind_)) return;
  prune_cost_.resize(ix(n_));
  for (std::size_t j = 0; j < n_; ++j) {
    const double wj = w[ix(j)];
    double c = kInf;
    double rest = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k != j) rest += w[ix(k)];
    }
    if (rest > 0.0 && wj < 1.0) {
      switch (kind_) {
        case CostKind::kArklFull:
          c = arkl_prune_cost(mixture_, j, kld_);
          break;
        case CostKind::kArklSimple:
          c = crude_prune_bound(wj);
          break;
        case CostKind::kWilliamsISE: {
          // p_hat = (p - w_j q_j) / rest, so p - p_hat = a p + b q_j
          const double a = 1.0 - 1.0 / rest;
          const double b = wj / rest;
          c = a * a * pp + 2.0 * a * b * gw[ix(j)] + b * b * gram_(ix(j), ix(j));
          c = std::max(c, 0.0);
          break;
        }
        case CostKind::kRunnallsB:
          break;
      }
    }
    prune_cost_[ix(j)] = c;
  }
}

bool CostTable::degenerate(std::size_t i, std::size_t j) const {
  if (i == j || i >= n_ || j >= n_) {
    throw ValidationError("CostTable::degenerate: invalid pair");
  }
  return pair(std::min(i, j), std::max(i, j)).degenerate;
}

double CostTable::cost(const Hypothesis& h) const {
  validate(mixture_, h);
  if (h.is_prune()) {
    if (!considers_pruning(kind_)) {
      throw ValidationError(
          "prune hypotheses are not part of the Runnalls hypothesis set");
    }
    return prune_cost_[ix(h.j)];
  }
  return pair_cost_(ix(h.i), ix(h.j));
}

double hypothesis_cost(const GaussianMixture& m, const Hypothesis& h,
                       CostKind kind, const CostTable& cache) {
  if (cache.kind() != kind || cache.size() != m.size()) {
    std::ostringstream os;
    os << "hypothesis_cost: cache (" << to_string(cache.kind()) << ", "
       << cache.size() << " components) does not match request ("
       << to_string(kind) << ", " << m.size() << " components)";
    throw ValidationError(os.str());
  }
  return cache.cost(h);
}

}  // namespace gmr
