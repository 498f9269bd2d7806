#include "gmr/cli/sweep.hpp"

#include <cmath>
#include <memory>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include "gmr/costs.hpp"

namespace gmr::cli {
namespace {

constexpr std::size_t kWorkspaceIntervals = 2000;

double trampoline(double x, void* params) {
  return (*static_cast<const std::function<double(double)>*>(params))(x);
}

GaussianComponent scalar(double weight, double mean, double var) {
  return GaussianComponent(weight, Vector::Constant(1, mean), Matrix::Constant(1, 1, var));
}

// int q log(q / p) over q's +-12 sigma window.
QuadratureResult reverse_kld_1d(const GaussianComponent& q, const GaussianMixture& p) {
  const double mu = q.mean()[0];
  const double sd = std::sqrt(q.cov()(0, 0));
  auto integrand = [&](double x) {
    const Vector pt = Vector::Constant(1, x);
    const double lq = log_pdf(q, pt);
    return std::exp(lq) * (lq - log_pdf(p, pt));
  };
  return integrate_adaptive(integrand, mu - kSweepEnvelopeSigmas * sd,
                            mu + kSweepEnvelopeSigmas * sd, kSweepQuadratureTol);
}

}  // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol) {
  gsl_set_error_handler_off();
  std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
      gsl_integration_workspace_alloc(kWorkspaceIntervals), &gsl_integration_workspace_free);
  gsl_function fn{&trampoline, const_cast<std::function<double(double)>*>(&f)};
  QuadratureResult out;
  const int status = gsl_integration_qag(&fn, a, b, abs_tol, 0.0, kWorkspaceIntervals,
                                         GSL_INTEG_GAUSS61, ws.get(), &out.value,
                                         &out.abs_error);
  out.converged = status == GSL_SUCCESS && out.abs_error <= abs_tol;
  return out;
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) {
  if (!(cfg.w1 > 0.0 && cfg.w1 < 1.0)) throw ValidationError("sweep: w1 must lie in (0, 1)");
  if (cfg.steps < 1) throw ValidationError("sweep: steps must be >= 1");
  if (!(cfg.mu_min >= 0.0) || cfg.mu_max < cfg.mu_min) {
    throw ValidationError("sweep: need 0 <= mu_min <= mu_max");
  }
  const double w2 = 1.0 - cfg.w1;
  std::vector<SweepRow> rows;
  for (std::size_t s = 0; s < cfg.steps; ++s) {
    const double mu = cfg.steps == 1
                          ? cfg.mu_min
                          : cfg.mu_min + (cfg.mu_max - cfg.mu_min) * static_cast<double>(s) /
                                             static_cast<double>(cfg.steps - 1);
    const GaussianMixture p({scalar(cfg.w1, -mu, 1.0), scalar(w2, mu, 1.0)});
    SweepRow row;
    row.mu = mu;

    const auto prune = reverse_kld_1d(apply(p, Hypothesis::prune(1))[0], p);
    const auto merge = reverse_kld_1d(apply(p, Hypothesis::merge(0, 1))[0], p);
    row.exact_prune_rkld = prune.value;
    row.exact_merge_rkld = merge.value;
    row.quadrature_ok = prune.converged && merge.converged;

    row.crude_bound = crude_prune_bound(w2);
    row.r02 = arkl_prune_cost(p, 1, pairwise_kld_matrix(p));
    row.simple_merge_bound = simple_merge_bound(p[0], p[1]);
    row.r12 = arkl_merge_cost(p[0], p[1]);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace gmr::cli
