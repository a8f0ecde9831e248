#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "exclt/asymptotic.hpp"
#include "oracles.hpp"

using namespace exclt;

namespace {

const double kReferenceSigma[3][3] = {{4.6432, 5.9938, 2.7962}, {5.9938, 10.5564, 5.9938}, {2.7962, 5.9938, 4.6432}};

CovMatrix reference_sigma() {
  std::vector<double> e;
  for (const auto& row : kReferenceSigma) e.insert(e.end(), row, row + 3);
  return {3, e, Provenance::theoretical};
}

}  // namespace

TEST(GaussianTail, Values) {
  EXPECT_EQ(gaussian_tail(0.0), 0.5);
  EXPECT_LT(gaussian_tail(40.0), 1e-300);
  EXPECT_NEAR(gaussian_tail(1.0), 0.15865525393145707, 1e-15);
  EXPECT_NEAR(gaussian_tail(-1.0), 1.0 - 0.15865525393145707, 1e-15);
}

TEST(GaussianIndicatorCov, Examples) {
  const GaussianMarginal m(0.0, 1.0);
  const QuadratureSpec q;
  EXPECT_EQ(gaussian_indicator_cov(m, 0.3, -0.2, 0.0, q), 0.0);
  EXPECT_NEAR(gaussian_indicator_cov(m, 0.0, 0.0, 0.5, q), 1.0 / 12.0, 1e-12);
  EXPECT_DOUBLE_EQ(gaussian_indicator_cov(m, 0.0, 0.0, 1.0, q), 0.25);
  const GaussianMarginal shifted(2.0, 3.0);
  EXPECT_NEAR(gaussian_indicator_cov(shifted, 2.0, 2.0, 0.5, q), 1.0 / 12.0, 1e-12);
  EXPECT_THROW((void)gaussian_indicator_cov(m, 0.0, 0.0, 1.5, q), std::invalid_argument);
}

TEST(GaussianIndicatorCov, AntitoneLimit) {
  const GaussianMarginal m(0.0, 1.0);
  const QuadratureSpec q;
  // rho -> -1 from inside matches the closed form at -1.
  for (double z : {-1.0, 0.0, 0.7}) {
    for (double w : {-0.5, 0.0, 1.2}) {
      EXPECT_NEAR(gaussian_indicator_cov(m, z, w, -1.0 + 1e-12, q), gaussian_indicator_cov(m, z, w, -1.0, q), 1e-5);
      EXPECT_NEAR(gaussian_indicator_cov(m, z, w, 1.0 - 1e-12, q), gaussian_indicator_cov(m, z, w, 1.0, q), 1e-5);
    }
  }
}

TEST(GaussianIndicatorCov, MatchesBivariateOracle) {
  std::mt19937_64 rng(20240501);
  std::uniform_real_distribution<double> level(-2.0, 2.0), corr(-0.95, 0.95);
  const GaussianMarginal m(0.0, 1.0);
  const QuadratureSpec q;
  for (int i = 0; i < 50; ++i) {
    const double u = level(rng), v = level(rng), rho = corr(rng);
    EXPECT_NEAR(gaussian_indicator_cov(m, u, v, rho, q), oracle::bivariate_indicator_cov(u, v, rho), 1e-6)
        << u << ' ' << v << ' ' << rho;
  }
}

TEST(GaussianIndicatorCov, EnvelopeAndMonotonicity) {
  const GaussianMarginal m(0.0, 1.0);
  const QuadratureSpec q;
  for (int i = 0; i <= 20; ++i) {
    for (int j = 0; j <= 20; ++j) {
      const double u = -3.0 + 0.3 * i, v = -3.0 + 0.3 * j;
      for (int k = 0; k <= 20; ++k) {
        const double rho = -1.0 + 0.1 * k;
        ASSERT_LE(std::abs(gaussian_indicator_cov(m, u, v, rho, q)), std::abs(rho) / 4.0 + 1e-15);
      }
    }
  }
  EXPECT_DOUBLE_EQ(gaussian_indicator_cov(m, 0.0, 0.0, 1.0, q), 0.25);
  for (double u : {-1.5, 0.0, 0.8}) {
    double prev = -1.0;
    for (int k = 0; k <= 40; ++k) {
      const double c = gaussian_indicator_cov(m, u, u, -1.0 + 0.05 * k, q);
      EXPECT_GE(c, prev - 1e-14);
      prev = c;
    }
  }
}

TEST(QaBound, ValuesAndDominance) {
  EXPECT_EQ(qa_indicator_bound(1.0, 0.0), 0.0);
  EXPECT_NEAR(qa_indicator_bound(1.0, 1.0), 4.762203155904598, 1e-12);
  const double a = 1.0 / std::sqrt(2.0 * M_PI);
  const GaussianMarginal m(0.0, 1.0);
  for (double u : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
    for (double v : {-1.0, 0.0, 0.5, 2.0}) {
      for (double rho : {-0.9, -0.3, 0.1, 0.6, 0.99}) {
        EXPECT_LE(std::abs(gaussian_indicator_cov(m, u, v, rho, {})), qa_indicator_bound(a, rho));
      }
    }
  }
}

TEST(Sigma, ReferenceDiagonal) {
  const auto model = CovarianceModel::spherical(1.0, 10.0, 2);
  const GaussianMarginal m = GaussianMarginal::of(model);
  const QuadratureSpec q;
  EXPECT_NEAR(sigma2_gaussian(m, model, 0.0, q), 10.5564, 1e-3);
  EXPECT_NEAR(sigma2_gaussian(m, model, 1.0, q), 4.6432, 1e-3);
  EXPECT_NEAR(sigma2_gaussian(m, model, -1.0, q), 4.6432, 1e-3);
}

TEST(Sigma, MeanLevelArcsineForm) {
  const QuadratureSpec q;
  for (const auto& model : {CovarianceModel::spherical(1.0, 10.0, 2), CovarianceModel::exponential(2.0, 1.5, 2, 0.4),
                            CovarianceModel::spherical(1.0, 3.0, 3), CovarianceModel::exponential(1.0, 1.0, 1)}) {
    const GaussianMarginal m = GaussianMarginal::of(model);
    EXPECT_NEAR(sigma2_gaussian(m, model, model.mean(), q), sigma2_at_mean(model, q), 1e-8) << model.describe();
  }
}

TEST(Sigma, ReferenceMatrix) {
  const auto model = CovarianceModel::spherical(1.0, 10.0, 2);
  const ThresholdVector u{-1.0, 0.0, 1.0};
  const CovMatrix s = sigma_matrix_gaussian(GaussianMarginal::of(model), model, u, {});
  for (std::size_t l = 0; l < 3; ++l) {
    for (std::size_t k = 0; k < 3; ++k) {
      EXPECT_NEAR(s(l, k), kReferenceSigma[l][k], 1e-3);
      EXPECT_EQ(s(l, k), s(k, l));
    }
  }
  EXPECT_TRUE(s.is_psd());
  EXPECT_EQ(s.provenance(), Provenance::theoretical);
  const CovMatrix one = sigma_matrix_gaussian(GaussianMarginal::of(model), model, ThresholdVector{0.5}, {});
  EXPECT_EQ(one(0, 0), sigma2_gaussian(GaussianMarginal::of(model), model, 0.5, {}));
}

TEST(Sigma, RadialMatchesCartesianLowDimensions) {
  QuadratureSpec q;
  for (int d = 1; d <= 2; ++d) {
    for (const auto& model : {CovarianceModel::spherical(1.0, 10.0, d), CovarianceModel::exponential(1.0, 1.0, d)}) {
      const GaussianMarginal m = GaussianMarginal::of(model);
      for (double u : {-1.0, 0.0, 1.0}) {
        const double radial = sigma_entry_gaussian(m, model, u, u, q, LagIntegration::radial);
        const double cart = sigma_entry_gaussian(m, model, u, u, q, LagIntegration::cartesian);
        EXPECT_NEAR(radial, cart, 1e-8) << model.describe() << " u=" << u;
      }
    }
  }
}

TEST(Sigma, WhiteNoiseIsZero) {
  const auto model = CovarianceModel::white_noise(1.0, 2);
  EXPECT_EQ(sigma2_gaussian(GaussianMarginal::of(model), model, 0.0, {}), 0.0);
}

TEST(InvSqrt, Examples) {
  const CovMatrix id = CovMatrix::identity(3);
  const CovMatrix m = inv_sqrt(id);
  for (std::size_t l = 0; l < 3; ++l) {
    for (std::size_t k = 0; k < 3; ++k) EXPECT_NEAR(m(l, k), l == k ? 1.0 : 0.0, 1e-15);
  }
  const CovMatrix d(2, {4.0, 0.0, 0.0, 9.0}, Provenance::estimated);
  const CovMatrix md = inv_sqrt(d);
  EXPECT_NEAR(md(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(md(1, 1), 1.0 / 3.0, 1e-15);
  EXPECT_NEAR(md(0, 1), 0.0, 1e-15);
  EXPECT_EQ(md.provenance(), Provenance::estimated);

  const CovMatrix s = reference_sigma();
  const Eigen::MatrixXd w = inv_sqrt(s).to_eigen();
  const Eigen::MatrixXd resid = w * s.to_eigen() * w - Eigen::MatrixXd::Identity(3, 3);
  EXPECT_LT(resid.cwiseAbs().maxCoeff(), 1e-8);
}

TEST(InvSqrt, DegenerateNamesEigenvalue) {
  const CovMatrix s(2, {1.0, 1.0, 1.0, 1.0}, Provenance::estimated);
  try {
    (void)inv_sqrt(s);
    FAIL();
  } catch (const DegenerateMatrixError& e) {
    EXPECT_NEAR(e.eigenvalue(), 0.0, 1e-14);
    EXPECT_NE(std::string(e.what()).find("eigenvalue"), std::string::npos);
  }
}

TEST(CovMatrix, Invariants) {
  EXPECT_THROW(CovMatrix(2, {1.0, 0.5, 0.4, 1.0}, Provenance::estimated), std::invalid_argument);
  EXPECT_THROW(CovMatrix(2, {1.0, 0.5, 0.5}, Provenance::estimated), std::invalid_argument);
  const CovMatrix indefinite(2, {1.0, 2.0, 2.0, 1.0}, Provenance::estimated);
  EXPECT_FALSE(indefinite.is_psd());
  EXPECT_NEAR(indefinite.min_eigenvalue(), -1.0, 1e-14);
}
