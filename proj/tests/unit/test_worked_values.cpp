// Hand-computed values and limiting cases across the library.

#include <cmath>

#include <gtest/gtest.h>

#include "gmr/cluster.hpp"
#include "oracles.hpp"

namespace gmr {
namespace {

using testing::scalar;

constexpr double kPi = 3.14159265358979323846;

GaussianComponent diag2(double weight, double m0, double m1, double v0, double v1) {
  Vector m(2);
  m << m0, m1;
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = v0;
  s(1, 1) = v1;
  return GaussianComponent(weight, m, s);
}

TEST(WorkedValues, LogPdf) {
  EXPECT_NEAR(log_pdf(scalar(1, 0, 1), Vector::Zero(1)), -0.9189385332046727, 1e-15);
  EXPECT_NEAR(log_pdf(scalar(1, 2, 1), Vector::Constant(1, 2.0)), -0.9189385332046727, 1e-15);
  EXPECT_NEAR(log_pdf(diag2(1, 0, 0, 1, 1), Vector::Ones(2)), -std::log(2 * kPi) - 1.0, 1e-14);
}

TEST(WorkedValues, Kld) {
  EXPECT_NEAR(kld_gauss(scalar(1, 0, 1), scalar(1, 0, 2)),
              0.5 * (std::log(2.0) - 1.0 + 0.5), 1e-15);
  const auto mc = testing::mc_expectation(
      scalar(1, 0, 1),
      [](const Vector& x) { return log_pdf(scalar(1, 0, 1), x) - log_pdf(scalar(1, 0, 2), x); },
      1000000, 4);
  EXPECT_NEAR(mc.mean, kld_gauss(scalar(1, 0, 1), scalar(1, 0, 2)), 4 * mc.std_error);
}

TEST(WorkedValues, Product) {
  const auto same = product_decompose(scalar(1, 0, 1), scalar(1, 0, 1));
  EXPECT_NEAR(same.scale, 1.0 / std::sqrt(4 * kPi), 1e-15);
  EXPECT_NEAR(same.mean_star[0], 0.0, 1e-15);
  EXPECT_NEAR(same.cov_star(0, 0), 0.5, 1e-15);

  const auto a = scalar(1, 0, 1);
  const auto b = scalar(1, 4, 1);
  const auto pd = product_decompose(a, b);
  EXPECT_NEAR(pd.mean_star[0], 2.0, 1e-15);
  EXPECT_NEAR(pd.cov_star(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(pd.scale, std::exp(log_pdf(scalar(1, 0, 2), Vector::Constant(1, 4.0))), 1e-17);
  const GaussianComponent star(1, pd.mean_star, pd.cov_star);
  for (double x : {0.0, 1.0, 2.0, 3.0}) {
    const Vector v = Vector::Constant(1, x);
    const double lhs = std::exp(log_pdf(a, v) + log_pdf(b, v));
    EXPECT_NEAR(lhs, pd.scale * std::exp(log_pdf(star, v)), 1e-10 * lhs);
  }
}

TEST(WorkedValues, ProductPointwiseRandom2d) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> normal;
  const GaussianComponent a(1.0, Vector::Random(2), testing::random_spd(2, rng));
  const GaussianComponent b(1.0, Vector::Random(2), testing::random_spd(2, rng));
  const auto pd = product_decompose(a, b);
  const GaussianComponent star(1.0, pd.mean_star, pd.cov_star);
  for (int k = 0; k < 100; ++k) {
    Vector x(2);
    x << normal(rng), normal(rng);
    const double lhs = std::exp(log_pdf(a, x) + log_pdf(b, x));
    EXPECT_NEAR(lhs, pd.scale * std::exp(log_pdf(star, x)), 1e-10 * lhs);
  }
}

TEST(WorkedValues, ExpectedLog) {
  EXPECT_NEAR(expected_log(scalar(1, 0, 1), scalar(1, 0, 1)), -1.4189385332046727, 1e-15);
  EXPECT_NEAR(expected_log(scalar(1, 0, 1), scalar(1, 3, 1)), -0.9189385332046727 - 5.0, 1e-14);
  EXPECT_NEAR(expected_log(diag2(1, 0, 0, 1, 1), diag2(1, 1, 1, 1, 1)),
              -std::log(2 * kPi) - 2.0, 1e-14);
}

TEST(WorkedValues, MaxValueAndMahalanobis) {
  EXPECT_NEAR(max_value(scalar(1, 0, 1)), 0.3989422804014327, 1e-16);
  EXPECT_NEAR(max_value(scalar(1, 5, 4)), 1.0 / std::sqrt(8 * kPi), 1e-16);
  EXPECT_NEAR(max_value(diag2(1, 0, 0, 1, 4)), 1.0 / (4 * kPi), 1e-16);

  EXPECT_EQ(mahalanobis_sq(scalar(1, 3, 2), Vector::Constant(1, 3.0)), 0.0);
  EXPECT_NEAR(mahalanobis_sq(scalar(1, 0, 4), Vector::Constant(1, 2.0)), 1.0, 1e-15);
  Vector x(2);
  x << 1.0, 2.0;
  EXPECT_NEAR(mahalanobis_sq(diag2(1, 0, 0, 1, 4), x), 2.0, 1e-15);
}

TEST(WorkedValues, MomentMatch) {
  const auto dup = moment_match_merge(scalar(0.3, 1, 2), scalar(0.3, 1, 2));
  EXPECT_DOUBLE_EQ(dup.weight(), 0.6);
  EXPECT_DOUBLE_EQ(dup.mean()[0], 1.0);
  EXPECT_DOUBLE_EQ(dup.cov()(0, 0), 2.0);

  std::mt19937_64 rng(32);
  const GaussianComponent a(0.35, Vector::Random(2), testing::random_spd(2, rng));
  const GaussianComponent b(0.15, Vector::Random(2) * 3, testing::random_spd(2, rng));
  const auto merged = moment_match_merge(a, b);
  const GaussianMixture pair({a.with_weight(0.7), b.with_weight(0.3)});
  const auto pts = sample(pair, 1000000, 5);
  Vector mean = Vector::Zero(2);
  for (const auto& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Matrix cov = Matrix::Zero(2, 2);
  for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
  cov /= static_cast<double>(pts.size());
  EXPECT_LE((mean - merged.mean()).norm(), 1e-2 * std::max(1.0, merged.mean().norm()));
  EXPECT_LE((cov - merged.cov()).norm(), 1e-2 * merged.cov().norm());
}

TEST(WorkedValues, MixtureDensity) {
  const GaussianMixture single({scalar(1, 1, 2)});
  const Vector x = Vector::Constant(1, 0.3);
  EXPECT_NEAR(pdf(single, x), std::exp(log_pdf(single[0], x)), 1e-16);
  const GaussianMixture m({scalar(0.5, -3, 1), scalar(0.5, 3, 1)});
  EXPECT_NEAR(pdf(m, Vector::Zero(1)), std::exp(-4.5) / std::sqrt(2 * kPi), 1e-17);
}

TEST(WorkedValues, Apply) {
  const auto pruned = apply(GaussianMixture({scalar(0.5, -1, 1), scalar(0.5, 2, 3)}),
                            Hypothesis::prune(1));
  EXPECT_EQ(pruned[0].weight(), 1.0);
  EXPECT_EQ(pruned[0].mean()[0], -1.0);

  const auto merged = apply(testing::two_component(0.5, 3.0), Hypothesis::merge(0, 1));
  EXPECT_EQ(merged[0].mean()[0], 0.0);
  EXPECT_EQ(merged[0].cov()(0, 0), 10.0);

  const auto three = apply(
      GaussianMixture({scalar(0.5, 0, 1), scalar(0.2, 1, 1), scalar(0.3, 2, 1)}),
      Hypothesis::prune(1));
  EXPECT_DOUBLE_EQ(three[0].weight(), 0.5 / 0.8);
  EXPECT_DOUBLE_EQ(three[1].weight(), 0.3 / 0.8);
  EXPECT_DOUBLE_EQ(three.total_weight(), 1.0);
}

TEST(WorkedValues, Sampling) {
  const auto pts = sample(GaussianMixture({scalar(1, 0, 1)}), 100000, 8);
  double mean = 0.0;
  for (const auto& p : pts) mean += p[0];
  EXPECT_LE(std::abs(mean / 1e5), 4.0 / std::sqrt(1e5));

  std::vector<std::size_t> origin;
  const auto t2 = table2_mixture();
  sample(t2, 100000, 9, origin);
  std::vector<double> counts(6, 0.0);
  for (auto o : origin) counts[o] += 1.0;
  for (std::size_t k = 0; k < 6; ++k) {
    const double w = t2[k].weight();
    EXPECT_LE(std::abs(counts[k] / 1e5 - w), 4.0 * std::sqrt(w * (1 - w) / 1e5));
  }
}

TEST(WorkedValues, Enumeration) {
  const auto two = enumerate_hypotheses(testing::two_component(0.5, 1), true);
  ASSERT_EQ(two.size(), 3u);
  EXPECT_EQ(two[0], Hypothesis::prune(0));
  EXPECT_EQ(two[1], Hypothesis::prune(1));
  EXPECT_EQ(two[2], Hypothesis::merge(0, 1));
  EXPECT_EQ(enumerate_hypotheses(testing::two_component(0.5, 1), false).size(), 1u);
  std::mt19937_64 rng(3);
  EXPECT_EQ(enumerate_hypotheses(testing::random_mixture(5, 1, rng), true).size(), 15u);
}

TEST(WorkedValues, Ise) {
  for (double m : {0.5, 2.0, 40.0}) {
    const GaussianMixture p({scalar(1, 0, 1)});
    const GaussianMixture q({scalar(1, m, 1)});
    const double expected =
        2.0 * (1.0 / std::sqrt(4 * kPi) - std::exp(-m * m / 4.0) / std::sqrt(4 * kPi));
    EXPECT_NEAR(ise_analytic(p, q), expected, 1e-15);
  }
  EXPECT_NEAR(ise_analytic(GaussianMixture({scalar(1, 0, 1)}), GaussianMixture({scalar(1, 40, 1)})),
              0.5641895835477563, 1e-15);
}

TEST(WorkedValues, McKld) {
  const GaussianMixture p({scalar(1, 0, 1)});
  const auto same = mc_kld(p, p, 10000, 3);
  EXPECT_LE(std::abs(same.value), 4 * same.std_error + 1e-15);
  const auto e = mc_kld(p, GaussianMixture({scalar(1, 2, 1)}), 1000000, 3);
  EXPECT_NEAR(e.value, 2.0, 4 * e.std_error);

  const auto mix = testing::two_component(0.8, 4.0);
  const auto r = mc_kld(apply(mix, Hypothesis::prune(1)), mix, 200000, 4);
  EXPECT_NEAR(r.value, -std::log(0.8), 2e-3);
}

TEST(WorkedValues, Runnalls) {
  EXPECT_EQ(runnalls_bound(scalar(0.4, 1, 2), scalar(0.4, 1, 2)), 0.0);
  const double b = runnalls_bound(scalar(0.5, -3, 1), scalar(0.5, 3, 1));
  EXPECT_NEAR(b, 0.5 * std::log(10.0), 1e-14);
  EXPECT_NEAR(runnalls_bound(scalar(0.1, -3, 1), scalar(0.1, 3, 1)), 0.2 * b, 1e-14);
}

TEST(WorkedValues, PairBoundLimits) {
  const auto q = scalar(1, 0, 1);
  EXPECT_NEAR(lemma1_bound(q, q, q, 0.5, 0.5), 0.0, 1e-15);
  EXPECT_NEAR(lemma1_bound(q, q, scalar(1, 1000, 1), 0.5, 0.5), std::log(2.0), 1e-12);
}

TEST(WorkedValues, CrudeBound) {
  EXPECT_NEAR(crude_prune_bound(0.2), 0.22314, 1e-5);
  EXPECT_NEAR(crude_prune_bound(1e-12), 0.0, 1e-11);
  EXPECT_NEAR(crude_prune_bound(0.5), std::log(2.0), 1e-15);
}

TEST(WorkedValues, LogSumPrune) {
  const GaussianMixture dup({scalar(0.5, 0, 1), scalar(0.5, 0, 1)});
  EXPECT_NEAR(arkl_prune_cost(dup, 1, pairwise_kld_matrix(dup)), 0.0, 1e-15);
  const auto far = testing::two_component(0.8, 30.0);
  EXPECT_NEAR(arkl_prune_cost(far, 1, pairwise_kld_matrix(far)), -std::log(0.8), 1e-12);

  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = testing::random_mixture(2, 1, rng);
    for (std::size_t i = 0; i < 2; ++i) {
      const auto mc = mc_kld(apply(m, Hypothesis::prune(i)), m, 20000, 50 + trial);
      EXPECT_GE(arkl_prune_cost(m, i, pairwise_kld_matrix(m)), mc.value - 4 * mc.std_error);
    }
  }
}

TEST(WorkedValues, SimpleMergeBound) {
  EXPECT_NEAR(simple_merge_bound(scalar(0.5, 1, 1), scalar(0.5, 1, 1)), 0.0, 1e-15);
  const auto p = testing::two_component(0.5, 3.0);
  EXPECT_GT(simple_merge_bound(p[0], p[1]), crude_prune_bound(0.5));
  const auto q = testing::two_component(0.5, 2.0);
  EXPECT_GT(simple_merge_bound(p[0], p[1]), simple_merge_bound(q[0], q[1]));

  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = testing::random_mixture(2, 1, rng);
    const double exact = testing::reverse_kld_quad(apply(m, Hypothesis::merge(0, 1))[0], m);
    EXPECT_GE(simple_merge_bound(m[0], m[1]), exact - 1e-10);
  }
}

TEST(WorkedValues, SwitchedDivergenceLimits) {
  const auto k = scalar(1, 0, 1);
  EXPECT_NEAR(switched_divergence_V(k, scalar(1, 50, 1), k), 0.0, 1e-15);
  const auto j = scalar(1, 0.5, 1.5);
  EXPECT_NEAR(switched_divergence_V(k, scalar(1, 50, 1), j), kld_gauss(k, j),
              1e-6 * kld_gauss(k, j));
}

TEST(WorkedValues, AlphaStar) {
  EXPECT_EQ(alpha_star(0.3, 0.3, 0.7, 0.7), 0.5);
  EXPECT_NEAR(alpha_star(0.5, 0.5, 800.0, 0.0), 0.0, 1e-300);
  EXPECT_NEAR(alpha_star(0.8, 0.2, 1.3, 1.3), 0.8, 1e-15);
}

TEST(WorkedValues, VariationalMerge) {
  EXPECT_LE(std::abs(arkl_merge_cost(scalar(0.5, 0, 1), scalar(0.5, 0, 1))), 1e-6);
  const auto p = testing::two_component(0.5, 0.1);
  const Matrix d = pairwise_kld_matrix(p);
  EXPECT_LT(arkl_merge_cost(p[0], p[1]),
            std::min(arkl_prune_cost(p, 0, d), arkl_prune_cost(p, 1, d)));
}

TEST(WorkedValues, DuplicateMergesAreFree) {
  const GaussianMixture dup({scalar(0.25, 1, 2), scalar(0.25, 1, 2), scalar(0.5, -4, 1)});
  for (CostKind kind : {CostKind::kRunnallsB, CostKind::kWilliamsISE, CostKind::kArklFull,
                        CostKind::kArklSimple}) {
    EXPECT_LE(CostTable(dup, kind).cost(Hypothesis::merge(0, 1)), 1e-6) << to_string(kind);
  }
}

TEST(WorkedValues, HypothesisChoices) {
  const GaussianMixture dup({scalar(0.5, 0, 1), scalar(0.5, 0, 1)});
  const CostTable arkl(dup, CostKind::kArklFull);
  EXPECT_NEAR(arkl.cost(Hypothesis::prune(0)), 0.0, 1e-12);
  EXPECT_NEAR(arkl.cost(Hypothesis::merge(0, 1)), 0.0, 1e-12);

  const auto even = testing::two_component(0.5, 8.0);
  const CostTable williams(even, CostKind::kWilliamsISE);
  EXPECT_LT(williams.cost(Hypothesis::merge(0, 1)),
            std::min(williams.cost(Hypothesis::prune(0)), williams.cost(Hypothesis::prune(1))));
  const auto uneven = testing::two_component(0.8, 8.0);
  EXPECT_EQ(reduce(uneven, 1, CostKind::kWilliamsISE).trace.steps[0].chosen,
            Hypothesis::prune(1));
  EXPECT_EQ(reduce(uneven, 1, CostKind::kArklFull).trace.steps[0].chosen, Hypothesis::prune(1));
  EXPECT_EQ(reduce(testing::two_component(0.8, 0.1), 1, CostKind::kArklFull).trace.steps[0].chosen,
            Hypothesis::merge(0, 1));
}

TEST(WorkedValues, EvaluationBudgets) {
  std::mt19937_64 rng(35);
  const std::size_t n = 12;
  const auto m = testing::random_mixture(n, 2, rng);
  const auto runnalls = reduce(m, 1, CostKind::kRunnallsB).trace;
  EXPECT_LE(runnalls.steps[0].evaluations.pair_stats, n * (n - 1) / 2);
  for (std::size_t s = 1; s < runnalls.steps.size(); ++s) {
    EXPECT_LE(runnalls.steps[s].evaluations.pair_stats, 2 * n);
  }
  const auto williams = reduce(m, 1, CostKind::kWilliamsISE).trace;
  for (const auto& s : williams.steps) EXPECT_LE(s.evaluations.inner_product, 2 * n * n);
}

TEST(WorkedValues, DataGeneration) {
  EXPECT_EQ(generate_table2_data(1000, 100, 20, 1).points.size(), 1100u);
  const auto clean = generate_table2_data(50, 0, 20, 1);
  for (auto t : *clean.truth) EXPECT_NE(t, kSpurious);
  const auto noise = generate_table2_data(0, 10, 20, 1);
  ASSERT_EQ(noise.points.size(), 10u);
  for (auto t : *noise.truth) EXPECT_EQ(t, kSpurious);
}

TEST(WorkedValues, EmSingleComponentIsMomentEstimate) {
  std::mt19937_64 rng(36);
  const GaussianMixture g({GaussianComponent(1.0, Vector::Ones(2), testing::random_spd(2, rng))});
  const auto pts = sample(g, 2000, 1);
  EmConfig cfg;
  const auto fit = em_fit(pts, cfg);
  Vector mean = Vector::Zero(2);
  for (const auto& p : pts) mean += p;
  mean /= 2000.0;
  Matrix cov = Matrix::Zero(2, 2);
  for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
  cov /= 2000.0;
  EXPECT_NEAR((fit.mixture[0].mean() - mean).norm(), 0.0, 1e-12);
  EXPECT_NEAR((fit.mixture[0].cov() - cov).norm(), 0.0, 1e-12);
}

TEST(WorkedValues, EmLikelihoodNearGeneratingMixture) {
  const auto d = generate_table2_data(1000, 0, 20, 6);
  EmConfig cfg;
  cfg.n_clusters = 6;
  cfg.seed = 6;
  const auto fit = em_fit(d.points, cfg);
  double truth_ll = 0.0;
  for (const auto& p : d.points) truth_ll += log_pdf(table2_mixture(), p);
  const double n = static_cast<double>(d.points.size());
  EXPECT_LE(std::abs(fit.log_likelihood.back() / n - truth_ll / n), 0.15);
}

TEST(WorkedValues, EmHardAssignmentOnSeparatedClusters) {
  const GaussianMixture truth({testing::scalar(0.5, -6, 1), testing::scalar(0.5, 6, 1)});
  std::vector<std::size_t> origin;
  const auto pts = sample(truth, 2000, 12, origin);
  EmConfig cfg;
  cfg.n_clusters = 2;
  const auto fit = em_fit(pts, cfg);
  const std::size_t left = fit.mixture[0].mean()[0] < 0 ? 0 : 1;
  std::size_t correct = 0;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    Eigen::Index best = 0;
    fit.responsibilities.row(static_cast<Eigen::Index>(p)).maxCoeff(&best);
    const bool is_left = static_cast<std::size_t>(best) == left;
    correct += is_left == (origin[p] == 0);
  }
  EXPECT_GE(static_cast<double>(correct) / pts.size(), 0.99);
}

TEST(WorkedValues, ReassignWithoutReduction) {
  const auto d = generate_table2_data(300, 30, 20, 7);
  EmConfig cfg;
  cfg.n_clusters = 6;
  cfg.seed = 7;
  const auto fit = em_fit(d.points, cfg);
  const auto r = reduce_and_reassign(fit.mixture, fit.responsibilities, d.points, 6,
                                     CostKind::kArklFull);
  EXPECT_TRUE(r.trace.steps.empty());
  for (std::size_t p = 0; p < d.points.size(); ++p) {
    Eigen::Index best = 0;
    fit.responsibilities.row(static_cast<Eigen::Index>(p)).maxCoeff(&best);
    EXPECT_EQ(r.data.labels[p], static_cast<std::size_t>(best));
  }
}

TEST(WorkedValues, OverclusteringDiscardsMostSpuriousPoints) {
  const auto d = generate_table2_data(1000, 100, 20, 2);
  EmConfig cfg;
  cfg.n_clusters = 15;
  cfg.seed = 2;
  const auto fit = em_fit(d.points, cfg);
  auto arkl = reduce_and_reassign(fit.mixture, fit.responsibilities, d.points, 6,
                                  CostKind::kArklFull);
  arkl.data.truth = d.truth;
  EXPECT_GT(summarize_discards(arkl.data).spurious_recall, 0.5);
  auto runnalls = reduce_and_reassign(fit.mixture, fit.responsibilities, d.points, 6,
                                      CostKind::kRunnallsB);
  EXPECT_EQ(summarize_discards(runnalls.data).discarded, 0u);
}

}  // namespace
}  // namespace gmr
