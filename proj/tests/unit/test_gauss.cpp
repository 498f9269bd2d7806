#include <cmath>

#include <gtest/gtest.h>

#include "gmr/gauss.hpp"
#include "oracles.hpp"

namespace gmr {
namespace {

using testing::scalar;

constexpr double kPi = 3.14159265358979323846;

TEST(GaussianComponent, RejectsBadInput) {
  Matrix asym(2, 2);
  asym << 1.0, 0.3, 0.2, 1.0;
  EXPECT_THROW(GaussianComponent(0.5, Vector::Zero(2), asym), ValidationError);
  EXPECT_THROW(GaussianComponent(0.5, Vector::Zero(3), Matrix::Identity(2, 2)), ValidationError);
  EXPECT_THROW(GaussianComponent(-0.1, Vector::Zero(2), Matrix::Identity(2, 2)), ValidationError);
  EXPECT_THROW(GaussianComponent(1.5, Vector::Zero(2), Matrix::Identity(2, 2)), ValidationError);
  Vector nan_mean = Vector::Zero(2);
  nan_mean[1] = std::nan("");
  EXPECT_THROW(GaussianComponent(0.5, nan_mean, Matrix::Identity(2, 2)), ValidationError);

  Matrix indefinite(2, 2);
  indefinite << 1.0, 2.0, 2.0, 1.0;
  EXPECT_THROW(GaussianComponent(0.5, Vector::Zero(2), indefinite), NumericalError);
}

TEST(GaussianComponent, CachesFactorization) {
  std::mt19937_64 rng(11);
  const Matrix s = testing::random_spd(3, rng);
  const GaussianComponent c(0.4, Vector::Ones(3), s);
  EXPECT_NEAR((c.chol_lower() * c.chol_lower().transpose() - s).norm(), 0.0, 1e-12);
  EXPECT_NEAR(c.log_det(), std::log(s.determinant()), 1e-12);
  const Vector rhs = Vector::LinSpaced(3, -1.0, 2.0);
  EXPECT_NEAR((s * c.solve(rhs) - rhs).norm(), 0.0, 1e-12);
  EXPECT_EQ(c.with_weight(0.1).weight(), 0.1);
}

TEST(Gauss, ScalarClosedForms) {
  const auto a = scalar(1.0, 0.3, 2.0);
  const auto b = scalar(1.0, -1.1, 0.5);
  const Vector x = Vector::Constant(1, 0.7);

  EXPECT_NEAR(log_pdf(a, x), -0.5 * std::log(2 * kPi * 2.0) - 0.16 / 4.0, 1e-14);
  EXPECT_NEAR(mahalanobis_sq(a, x), 0.16 / 2.0, 1e-14);
  EXPECT_NEAR(kld_gauss(a, b),
              0.5 * std::log(0.5 / 2.0) + (2.0 + 1.96) / (2 * 0.5) - 0.5, 1e-13);
  EXPECT_NEAR(inner_product(a, b),
              std::exp(-0.5 * 1.96 / 2.5) / std::sqrt(2 * kPi * 2.5), 1e-14);
  EXPECT_NEAR(expected_log(a, b), -0.5 * std::log(2 * kPi * 0.5) - (2.0 + 1.96) / (2 * 0.5),
              1e-13);
  EXPECT_NEAR(entropy(a), 0.5 * std::log(2 * kPi * std::exp(1.0) * 2.0), 1e-14);
  EXPECT_NEAR(max_value(a), 1.0 / std::sqrt(2 * kPi * 2.0), 1e-15);
  EXPECT_NEAR(log_max_value(a), std::log(max_value(a)), 1e-14);
}

TEST(Gauss, KldUnitShift) {
  EXPECT_NEAR(kld_gauss(scalar(1, 0, 1), scalar(1, 2, 1)), 2.0, 1e-14);
  EXPECT_NEAR(kld_gauss(scalar(1, 2, 1), scalar(1, 0, 1)), 2.0, 1e-14);
  EXPECT_EQ(kld_gauss(scalar(1, 1, 3), scalar(1, 1, 3)), 0.0);
}

TEST(Gauss, KldIgnoresWeights) {
  EXPECT_EQ(kld_gauss(scalar(0.1, 0, 1), scalar(0.9, 1, 2)),
            kld_gauss(scalar(1.0, 0, 1), scalar(0.3, 1, 2)));
}

TEST(Gauss, EntropyIsNegativeSelfExpectedLog) {
  std::mt19937_64 rng(3);
  const GaussianComponent c(1.0, Vector::Constant(2, 0.5), testing::random_spd(2, rng));
  EXPECT_NEAR(entropy(c), -expected_log(c, c), 1e-12);
}

TEST(Gauss, ProductDecompositionMatchesInnerProduct) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const GaussianComponent a(1.0, Vector::Random(3), testing::random_spd(3, rng));
    const GaussianComponent b(1.0, Vector::Random(3), testing::random_spd(3, rng));
    const auto pd = product_decompose(a, b);
    EXPECT_NEAR(pd.scale, inner_product(a, b), 1e-12 * pd.scale);
    EXPECT_NEAR(pd.log_scale, std::log(pd.scale), 1e-12);
    EXPECT_NEAR((pd.cov_star - pd.cov_star.transpose()).norm(), 0.0, 0.0);
  }
}

TEST(Gauss, MomentMatchPreservesMoments) {
  std::mt19937_64 rng(9);
  const GaussianComponent a(0.3, Vector::Random(2), testing::random_spd(2, rng));
  const GaussianComponent b(0.1, Vector::Random(2), testing::random_spd(2, rng));
  const auto m = moment_match_merge(a, b);
  EXPECT_DOUBLE_EQ(m.weight(), 0.4);
  const Vector mean = (0.3 * a.mean() + 0.1 * b.mean()) / 0.4;
  EXPECT_NEAR((m.mean() - mean).norm(), 0.0, 1e-15);
  const Vector da = a.mean() - mean;
  const Vector db = b.mean() - mean;
  const Matrix second = (0.3 * (a.cov() + da * da.transpose()) +
                         0.1 * (b.cov() + db * db.transpose())) / 0.4;
  EXPECT_NEAR((m.cov() - second).norm(), 0.0, 1e-14);
}

TEST(Gauss, MomentMatchSymmetricPair) {
  const auto m = moment_match_merge(scalar(0.5, -3, 1), scalar(0.5, 3, 1));
  EXPECT_EQ(m.mean()[0], 0.0);
  EXPECT_EQ(m.cov()(0, 0), 10.0);
  EXPECT_EQ(m.weight(), 1.0);
}

TEST(Gauss, MomentMatchRejectsZeroWeight) {
  EXPECT_THROW(moment_match_merge(scalar(0.0, 0, 1), scalar(0.0, 1, 1)), ValidationError);
}

TEST(Gauss, Jitter) {
  const Matrix j = jitter(Matrix::Zero(2, 2), 1e-3);
  EXPECT_EQ(j(0, 0), 1e-3);
  EXPECT_EQ(j(0, 1), 0.0);
}

}  // namespace
}  // namespace gmr
