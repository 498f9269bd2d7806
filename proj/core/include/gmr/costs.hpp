#pragma once

#include <cstdint>
#include <string_view>

#include "gmr/mixture.hpp"

namespace gmr {

/// A divergence value. Closed forms carry std_error == 0 and samples == 0.
struct DivergenceEstimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// Decision statistic used by a greedy reduction.
enum class CostKind {
  kRunnallsB,    // FKLD upper bound, merges only
  kWilliamsISE,  // exact integral squared error, prune + merge
  kArklFull,     // reverse-KL: log-sum prune bound + variational merge
  kArklSimple,   // reverse-KL: crude prune bound + simple merge bound
};

std::string_view to_string(CostKind kind);
/// Accepts "runnalls", "williams", "arkl", "arkl-simple".
CostKind parse_cost_kind(std::string_view name);

/// Whether the hypothesis set of this kind includes pruning.
inline bool considers_pruning(CostKind kind) {
  return kind != CostKind::kRunnallsB;
}

// ---------------------------------------------------------------------------
// Divergences between mixtures

/// Integral squared error, all three terms included (not up to a constant).
double ise_analytic(const GaussianMixture& p, const GaussianMixture& q);

/// Monte Carlo estimate of D_KL(from || to) from n seeded draws of `from`.
///
/// Throws NumericalError naming the abscissa if `to` underflows to zero at a
/// sample; requires n >= 1000 and normalized inputs.
DivergenceEstimate mc_kld(const GaussianMixture& from, const GaussianMixture& to,
                          std::size_t n, std::uint64_t seed);

// ---------------------------------------------------------------------------
// FKLD bound (merges only)

/// w_a D(a || a+b) + w_b D(b || a+b) with a+b the moment-matched merge.
double runnalls_bound(const GaussianComponent& a, const GaussianComponent& b);

// ---------------------------------------------------------------------------
// Reverse-KL bounds and approximations

/// -log(w_i e^{-D(k||i)} + w_j e^{-D(k||j)}), an upper bound on
/// int q_k log(q_k / (w_i q_i + w_j q_j)).
double lemma1_bound(const GaussianComponent& k, const GaussianComponent& i,
                    const GaussianComponent& j, double w_i, double w_j);

/// -log(1 - w).
double crude_prune_bound(double w);

/// Pairwise KLD matrix with entry (r, c) = D(q_r || q_c); zero diagonal.
Matrix pairwise_kld_matrix(const GaussianMixture& m);

/// Log-sum pruning bound for component i, minimized over the partner J:
///   min_J [-log(1-w_i) - w_J/(1-w_i) log(1 + (w_i/w_J) e^{-D(q_J||q_i)})].
/// `pairwise_kld` is laid out as returned by pairwise_kld_matrix(). The
/// literal minimum is returned; it is never clamped.
double arkl_prune_cost(const GaussianMixture& m, std::size_t i,
                       const Matrix& pairwise_kld);

/// w log w - w log(w_i e^{-D(q_ij||q_i)} + w_j e^{-D(q_ij||q_j)}) with
/// w = w_i + w_j and q_ij the moment-matched merge.
double simple_merge_bound(const GaussianComponent& i, const GaussianComponent& j);

/// V(q_k, q_i, q_j) = int q_k (1 - q_i / max q_i) log(q_k / q_j) dx,
/// evaluated in closed form. Weights are ignored.
double switched_divergence_V(const GaussianComponent& k,
                             const GaussianComponent& i,
                             const GaussianComponent& j);

/// Optimal split of the variational bound,
///   w_i e^{-v_i} / (w_i e^{-v_i} + w_j e^{-v_j}),
/// with v_i = V(q_ij, q_j, q_i) and v_j = V(q_ij, q_i, q_j).
double alpha_star(double w_i, double w_j, double v_i, double v_j);

/// Variational approximation R(i, j) of the reverse KL of merging i and j.
double arkl_merge_cost(const GaussianComponent& i, const GaussianComponent& j);

// Weight-dependent assembly of the costs from their weight-independent
// kernels. The functions above and the reduction cache both go through
// these, so cached and direct evaluations agree bit for bit.
namespace kernel {

/// w_i d_i + w_j d_j with d = D(q || q_ij).
double runnalls(double w_i, double w_j, double d_i, double d_j);

/// w log w - w log(w_i e^{-a_i} + w_j e^{-a_j}), w = w_i + w_j. With a = D
/// this is the simple merge bound, with a = V it is R(i, j).
double log_sum_merge(double w_i, double w_j, double a_i, double a_j);

/// One term of the min in arkl_prune_cost for partner weight w_partner
/// and d = D(q_partner || q_pruned).
double log_sum_prune(double w_pruned, double w_partner, double d);

}  // namespace kernel

}  // namespace gmr
