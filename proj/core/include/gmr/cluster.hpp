#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "gmr/reduce.hpp"

namespace gmr {

/// Label of a point whose cluster was pruned away.
inline constexpr std::size_t kDiscarded = std::numeric_limits<std::size_t>::max();
/// Ground-truth origin of a point not drawn from any mixture component.
inline constexpr std::size_t kSpurious = std::numeric_limits<std::size_t>::max();

struct LabeledDataset {
  std::vector<Vector> points;
  /// Zero-based component index per point, or kDiscarded.
  std::vector<std::size_t> labels;
  /// Zero-based generating component per point, or kSpurious.
  std::optional<std::vector<std::size_t>> truth;
};

/// EM failed beyond recovery (repeated covariance breakdown).
class EmError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EmConfig {
  std::size_t n_clusters = 1;
  std::size_t max_iters = 500;
  double tol = 1e-6;  // total log-likelihood improvement, nats
  std::uint64_t seed = 0;
  /// Relative to the mean per-dimension data variance. Added to a covariance
  /// only when its smallest eigenvalue falls below this level.
  double jitter = 1e-6;
};

struct EmResult {
  GaussianMixture mixture;
  Matrix responsibilities;  // points x components, rows sum to one
  std::vector<double> log_likelihood;  // total, one entry per E-step
  /// Iterations whose M-step needed jitter or a component re-seed; the
  /// log-likelihood may drop after them.
  std::vector<bool> regularized;
  std::size_t iterations = 0;
  bool converged = false;
  std::size_t jitter_events = 0;
  std::size_t reinit_events = 0;
};

/// The six-component two-dimensional mixture used for the robust clustering
/// experiment.
GaussianMixture table2_mixture();

/// n draws from table2_mixture() followed by m points uniform on the
/// origin-centred square of the given side. Labels start out equal to the
/// generating component (spurious points are labelled kDiscarded).
LabeledDataset generate_table2_data(std::size_t n, std::size_t m, double side,
                                    std::uint64_t seed);

/// Maximum-likelihood Gaussian mixture fit with k-means++ seeding.
EmResult em_fit(const std::vector<Vector>& points, const EmConfig& cfg);

struct ReassignResult {
  GaussianMixture mixture;
  LabeledDataset data;
  ReductionTrace trace;
};

/// Reduces a fitted mixture and carries the point labels along: points of a
/// pruned component are discarded, points of merged components go to the
/// nearest (Mahalanobis) component of the mixture after the merge.
ReassignResult reduce_and_reassign(const GaussianMixture& mix,
                                   const Matrix& responsibilities,
                                   const std::vector<Vector>& points,
                                   std::size_t target, CostKind kind);

struct DiscardSummary {
  std::size_t points = 0;
  std::size_t discarded = 0;
  // Filled only when ground truth is available.
  std::size_t spurious = 0;
  std::size_t spurious_discarded = 0;
  std::size_t inliers_discarded = 0;
  double spurious_recall = 0.0;     // spurious_discarded / spurious
  double discard_precision = 0.0;   // spurious_discarded / discarded
  double inlier_discard_rate = 0.0; // inliers_discarded / inliers
};

DiscardSummary summarize_discards(const LabeledDataset& data);

}  // namespace gmr
