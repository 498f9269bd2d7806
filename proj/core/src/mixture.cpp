#include "gmr/mixture.hpp"

#include <random>
#include <sstream>

namespace gmr {
namespace {

std::vector<GaussianComponent> renormalize(std::vector<GaussianComponent> comps) {
  double total = 0.0;
  for (const auto& c : comps) total += c.weight();
  if (!(total > 0.0)) throw ValidationError("mixture has zero total weight");
  for (auto& c : comps) c = c.with_weight(c.weight() / total);
  return comps;
}

void require_normalized(const GaussianMixture& m, const char* op) {
  if (!m.is_normalized()) {
    std::ostringstream os;
    os << op << ": mixture is not normalized (total weight "
       << m.total_weight() << ")";
    throw ValidationError(os.str());
  }
}

}  // namespace

GaussianMixture::GaussianMixture(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) {
    throw ValidationError("a mixture needs at least one component");
  }
  const int k = components_.front().dim();
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i].dim() != k) {
      std::ostringstream os;
      os << "component " << i + 1 << " has dimension " << components_[i].dim()
         << ", expected " << k;
      throw ValidationError(os.str());
    }
    if (!(components_[i].weight() > 0.0)) {
      std::ostringstream os;
      os << "component " << i + 1 << " has non-positive weight";
      throw ValidationError(os.str());
    }
  }
}

double GaussianMixture::total_weight() const {
  double total = 0.0;
  for (const auto& c : components_) total += c.weight();
  return total;
}

bool GaussianMixture::is_normalized() const {
  return std::abs(total_weight() - 1.0) <= tol::kWeightSum;
}

Vector GaussianMixture::weights() const {
  Vector w(static_cast<Eigen::Index>(components_.size()));
  for (std::size_t i = 0; i < components_.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = components_[i].weight();
  }
  return w;
}

GaussianMixture GaussianMixture::normalized() const {
  return GaussianMixture(renormalize(components_));
}

Hypothesis Hypothesis::merge(std::size_t a, std::size_t b) {
  if (a == b) throw ValidationError("merge needs two distinct components");
  return {Kind::kMerge, std::min(a, b), std::max(a, b)};
}

bool hypothesis_order_less(const Hypothesis& a, const Hypothesis& b) {
  if (a.kind != b.kind) return a.is_prune();
  if (a.is_prune()) return a.j < b.j;
  return a.i != b.i ? a.i < b.i : a.j < b.j;
}

std::string to_string(const Hypothesis& h) {
  std::ostringstream os;
  if (h.is_prune()) {
    os << "prune(" << h.j + 1 << ")";
  } else {
    os << "merge(" << h.i + 1 << "," << h.j + 1 << ")";
  }
  return os.str();
}

void validate(const GaussianMixture& m, const Hypothesis& h) {
  const std::size_t n = m.size();
  bool ok = h.j < n;
  if (h.is_merge()) ok = ok && h.i < h.j;
  if (!ok) {
    std::ostringstream os;
    os << "hypothesis " << to_string(h) << " invalid for a mixture of " << n
       << " components";
    throw ValidationError(os.str());
  }
}

double log_pdf(const GaussianMixture& m, const Vector& x) {
  double acc = -std::numeric_limits<double>::infinity();
  for (const auto& c : m.components()) {
    acc = log_add_exp(acc, std::log(c.weight()) + log_pdf(c, x));
  }
  return acc;
}

double pdf(const GaussianMixture& m, const Vector& x) {
  return std::exp(log_pdf(m, x));
}

GaussianMixture apply(const GaussianMixture& m, const Hypothesis& h) {
  require_normalized(m, "apply");
  validate(m, h);
  std::vector<GaussianComponent> out;
  out.reserve(m.size() - 1);
  if (h.is_prune()) {
    double rest = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k != h.j) rest += m[k].weight();
    }
    if (!(rest > 0.0)) {
      std::ostringstream os;
      os << "cannot prune component " << h.j + 1 << ": it holds all the mass";
      throw ValidationError(os.str());
    }
    for (std::size_t k = 0; k < m.size(); ++k) {
      if (k != h.j) out.push_back(m[k].with_weight(m[k].weight() / rest));
    }
    return GaussianMixture(std::move(out));
  }
  for (std::size_t k = 0; k < m.size(); ++k) {
    if (k == h.i) {
      out.push_back(moment_match_merge(m[h.i], m[h.j]));
    } else if (k != h.j) {
      out.push_back(m[k]);
    }
  }
  return GaussianMixture(renormalize(std::move(out)));
}

std::vector<Hypothesis> enumerate_hypotheses(const GaussianMixture& m,
                                             bool include_pruning) {
  const std::size_t n = m.size();
  if (n < 2) {
    throw ValidationError("enumerate_hypotheses: need at least 2 components");
  }
  std::vector<Hypothesis> out;
  out.reserve((include_pruning ? n : 0) + n * (n - 1) / 2);
  if (include_pruning) {
    for (std::size_t j = 0; j < n; ++j) out.push_back(Hypothesis::prune(j));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) out.push_back(Hypothesis::merge(i, j));
  }
  return out;
}

std::vector<Vector> sample(const GaussianMixture& m, std::size_t n,
                           std::uint64_t seed,
                           std::vector<std::size_t>& origin) {
  require_normalized(m, "sample");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  std::vector<double> cumulative(m.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < m.size(); ++k) {
    acc += m[k].weight();
    cumulative[k] = acc;
  }

  std::vector<Vector> out;
  out.reserve(n);
  origin.assign(n, 0);
  const int dim = m.dim();
  for (std::size_t s = 0; s < n; ++s) {
    const double u = unif(rng) * acc;
    std::size_t k = static_cast<std::size_t>(
        std::upper_bound(cumulative.begin(), cumulative.end(), u) -
        cumulative.begin());
    if (k >= m.size()) k = m.size() - 1;
    Vector z(dim);
    for (int d = 0; d < dim; ++d) z[d] = normal(rng);
    out.push_back(m[k].mean() + m[k].chol_lower() * z);
    origin[s] = k;
  }
  return out;
}

std::vector<Vector> sample(const GaussianMixture& m, std::size_t n,
                           std::uint64_t seed) {
  std::vector<std::size_t> origin;
  return sample(m, n, seed, origin);
}

}  // namespace gmr
