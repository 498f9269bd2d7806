#pragma once

#include <optional>
#include <vector>

#include "gmr/costs.hpp"

namespace gmr {

/// Number of pairwise kernel evaluations performed by a cost table.
struct EvalCounts {
  std::size_t kld = 0;            // kld_gauss calls
  std::size_t inner_product = 0;  // Gaussian inner products
  std::size_t switched_v = 0;     // switched_divergence_V calls
  std::size_t pair_stats = 0;     // merge statistics built (one per pair)

  std::size_t total() const { return kld + inner_product + switched_v; }

  EvalCounts& operator+=(const EvalCounts& o);
  friend EvalCounts operator-(EvalCounts a, const EvalCounts& b);
  friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

/// Cached decision statistics for every hypothesis of one mixture.
///
/// The table keeps only weight-independent kernels between updates: pairwise
/// KLDs, Gram entries, and per-pair merge kernels (the divergences that enter
/// B, the simple bound or R, all of which depend on the pair weights only
/// through their ratio). Weight-dependent costs are reassembled from those
/// kernels after every update in O(N^2) arithmetic. After a merge only the
/// row of the merged component is evaluated again; after a prune nothing is.
class CostTable {
 public:
  CostTable(const GaussianMixture& m, CostKind kind);

  CostKind kind() const { return kind_; }
  std::size_t size() const { return mixture_.size(); }
  const GaussianMixture& mixture() const { return mixture_; }

  /// Cost of h for the mixture this table mirrors. Merges whose moment
  /// matched component could not be factorized cost +inf.
  double cost(const Hypothesis& h) const;

  /// Moves the table to `after`, which must equal apply(mixture(), h).
  void update(const Hypothesis& h, const GaussianMixture& after);

  /// Cumulative kernel evaluations since construction.
  const EvalCounts& counts() const { return counts_; }

  bool degenerate(std::size_t i, std::size_t j) const;

  /// D(q_r || q_c) for all ordered pairs. Populated for ArklFull only.
  const Matrix& pairwise_kld() const { return kld_; }
  /// N(mu_i; mu_j, S_i + S_j). Populated for WilliamsISE only.
  const Matrix& gram() const { return gram_; }
  /// Merge costs in the upper triangle (i < j); zero elsewhere.
  const Matrix& pair_cost() const { return pair_cost_; }
  /// Per-component prune costs; empty for RunnallsB.
  const Vector& prune_cost() const { return prune_cost_; }

 private:
  struct PairKernel {
    bool degenerate = false;
    double a_i = 0.0;  // kind-specific divergence towards/from component i
    double a_j = 0.0;
    double self = 0.0;  // <q_ij, q_ij> (Williams)
  };

  PairKernel& pair(std::size_t i, std::size_t j) { return pairs_[i * n_ + j]; }
  const PairKernel& pair(std::size_t i, std::size_t j) const {
    return pairs_[i * n_ + j];
  }

  PairKernel compute_pair(std::size_t i, std::size_t j);
  void compute_component_row(std::size_t i);
  void remove_index(std::size_t j);
  void refresh_costs();

  CostKind kind_;
  GaussianMixture mixture_;
  std::size_t n_ = 0;
  std::vector<PairKernel> pairs_;  // n_ x n_, entries with i < j used
  Matrix kld_;
  Matrix gram_;
  Matrix pair_cost_;
  Vector prune_cost_;
  EvalCounts counts_;
};

/// Cost of h for m read from a table that mirrors m under `kind`.
/// A prune under RunnallsB is a ValidationError: that hypothesis set only
/// contains merges.
double hypothesis_cost(const GaussianMixture& m, const Hypothesis& h,
                       CostKind kind, const CostTable& cache);

struct ScoredHypothesis {
  Hypothesis hypothesis;
  double cost = 0.0;
};

struct ReductionStep {
  Hypothesis chosen;
  double cost = 0.0;
  std::size_t size_after = 0;
  /// Kernel evaluations spent building the statistics this step chose from.
  EvalCounts evaluations;
  /// The chosen cost came out negative (possible for the log-sum prune
  /// bound, whose literal value is never clamped).
  bool negative_cost = false;
  /// Merges skipped because the merged covariance failed to factorize.
  std::vector<Hypothesis> degenerate;
  std::optional<std::vector<ScoredHypothesis>> all_costs;
};

struct ReductionTrace {
  CostKind method = CostKind::kArklFull;
  std::vector<ReductionStep> steps;
};

struct ReduceOptions {
  bool record_all_costs = false;
};

struct ReductionResult {
  GaussianMixture mixture;
  ReductionTrace trace;
};

/// Greedy reduction to `target` components. At every step the hypothesis of
/// minimal cost wins; ties go to the earlier hypothesis in
/// enumerate_hypotheses() order (prunes before merges, ascending indices).
ReductionResult reduce(const GaussianMixture& m, std::size_t target,
                       CostKind kind, const ReduceOptions& opts = {});

/// Total kernel evaluations recorded in a trace.
EvalCounts cost_eval_count(const ReductionTrace& trace);

/// Re-applies the trace's hypotheses to m.
GaussianMixture replay(const GaussianMixture& m, const ReductionTrace& trace);

}  // namespace gmr
