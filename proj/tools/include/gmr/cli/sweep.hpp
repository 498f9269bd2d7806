#pragma once

#include <functional>
#include <vector>

namespace gmr::cli {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = false;
};

/// Adaptive Gauss-Kronrod integration of f over [a, b] to an absolute
/// tolerance.
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol);

/// Absolute tolerance of the "exact" sweep columns.
inline constexpr double kSweepQuadratureTol = 1e-8;
/// Half-width of the integration window in standard deviations.
inline constexpr double kSweepEnvelopeSigmas = 12.0;

struct SweepConfig {
  double w1 = 0.8;
  double mu_min = 0.0;
  double mu_max = 6.0;
  std::size_t steps = 13;
};

/// One row of the two-component sweep p = w1 N(-mu, 1) + (1 - w1) N(mu, 1).
struct SweepRow {
  double mu = 0.0;
  double exact_prune_rkld = 0.0;   // D(p | prune 2 || p), quadrature
  double crude_bound = 0.0;        // -log(1 - w2)
  double r02 = 0.0;                // log-sum prune bound R(0,2)
  double exact_merge_rkld = 0.0;   // D(p | merge 1,2 || p), quadrature
  double simple_merge_bound = 0.0;
  double r12 = 0.0;                // variational merge approximation R(1,2)
  bool quadrature_ok = true;
};

std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

}  // namespace gmr::cli
