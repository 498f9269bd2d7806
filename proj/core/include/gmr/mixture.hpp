#pragma once

#include <cstdint>
#include <cstddef>
#include <string>
#include <vector>

#include "gmr/gauss.hpp"

namespace gmr {

/// Ordered, non-empty list of Gaussian components of a common dimension.
class GaussianMixture {
 public:
  explicit GaussianMixture(std::vector<GaussianComponent> components);

  int dim() const { return components_.front().dim(); }
  std::size_t size() const { return components_.size(); }
  const std::vector<GaussianComponent>& components() const { return components_; }
  const GaussianComponent& operator[](std::size_t i) const { return components_[i]; }

  double total_weight() const;
  bool is_normalized() const;
  Vector weights() const;

  /// Copy with weights divided by their sum.
  GaussianMixture normalized() const;

 private:
  std::vector<GaussianComponent> components_;
};

/// A single greedy reduction move. Indices are zero-based; traces and the
/// command-line tool present them one-based.
struct Hypothesis {
  enum class Kind { kPrune, kMerge };

  Kind kind = Kind::kPrune;
  std::size_t i = 0;  // merge: first index; unused for prune
  std::size_t j = 0;  // prune: pruned index; merge: second index, i < j

  static Hypothesis prune(std::size_t j) { return {Kind::kPrune, 0, j}; }
  /// Stored canonically with i < j.
  static Hypothesis merge(std::size_t a, std::size_t b);

  bool is_prune() const { return kind == Kind::kPrune; }
  bool is_merge() const { return kind == Kind::kMerge; }

  friend bool operator==(const Hypothesis&, const Hypothesis&) = default;
};

/// Total order used for deterministic tie-breaking: prunes by index first,
/// then merges lexicographically.
bool hypothesis_order_less(const Hypothesis& a, const Hypothesis& b);

/// e.g. "prune(2)" or "merge(1,3)", one-based.
std::string to_string(const Hypothesis& h);

/// Throws ValidationError unless h refers to distinct in-range components.
void validate(const GaussianMixture& m, const Hypothesis& h);

/// Weighted density sum_I w_I N(x; I).
double pdf(const GaussianMixture& m, const Vector& x);

/// log of pdf, accumulated with log-sum-exp.
double log_pdf(const GaussianMixture& m, const Vector& x);

/// Applies a prune (renormalizing survivors) or a moment-matched merge. The
/// merged component takes position min(i, j); survivors keep their relative
/// order. The result is exactly renormalized.
GaussianMixture apply(const GaussianMixture& m, const Hypothesis& h);

/// All hypotheses for m in tie-break order. Without pruning only the
/// N(N-1)/2 merges are listed.
std::vector<Hypothesis> enumerate_hypotheses(const GaussianMixture& m,
                                             bool include_pruning);

/// Draws n i.i.d. points; deterministic for a given seed.
std::vector<Vector> sample(const GaussianMixture& m, std::size_t n,
                           std::uint64_t seed);

/// As sample(), additionally reporting the generating component of each
/// draw.
std::vector<Vector> sample(const GaussianMixture& m, std::size_t n,
                           std::uint64_t seed,
                           std::vector<std::size_t>& origin);

}  // namespace gmr
