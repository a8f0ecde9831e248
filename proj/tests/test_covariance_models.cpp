#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "exclt/covariance_model.hpp"

using namespace exclt;

namespace {

std::vector<CovarianceModel> all_models(int d) {
  return {CovarianceModel::spherical(1.0, 10.0, d), CovarianceModel::spherical(2.5, 3.0, d, 1.0),
          CovarianceModel::exponential(1.0, 1.0, d), CovarianceModel::exponential(0.7, 2.5, d),
          CovarianceModel::powered_exponential(1.0, 2.0, 1.5, d),
          CovarianceModel::white_noise(1.3, d)};
}

}  // namespace

TEST(CovarianceModel, SphericalExamples) {
  const auto m = CovarianceModel::spherical(1.0, 10.0, 2);
  const double origin[] = {0.0, 0.0};
  EXPECT_DOUBLE_EQ(m.evaluate(origin), 1.0);
  const double at_range[] = {6.0, 8.0};
  EXPECT_EQ(m.evaluate(at_range), 0.0);
  const double half[] = {3.0, 4.0};
  EXPECT_NEAR(m.evaluate(half), 0.3125, 1e-15);
  const double far[] = {12.0, 16.0};
  EXPECT_EQ(m.correlation(far), 0.0);
}

TEST(CovarianceModel, ExponentialCorrelation) {
  const auto m = CovarianceModel::exponential(3.0, 1.0, 1);
  const double t[] = {1.0};
  EXPECT_NEAR(m.correlation(t), 0.36787944117144233, 1e-15);
  const double zero[] = {0.0};
  EXPECT_DOUBLE_EQ(m.correlation(zero), 1.0);
}

TEST(CovarianceModel, RejectsInvalidParameters) {
  EXPECT_THROW(CovarianceModel::spherical(0.0, 10.0, 2), std::invalid_argument);
  EXPECT_THROW(CovarianceModel::spherical(1.0, -1.0, 2), std::invalid_argument);
  EXPECT_THROW(CovarianceModel::exponential(1.0, 1.0, 4), std::invalid_argument);
  EXPECT_THROW(CovarianceModel::powered_exponential(1.0, 1.0, 2.5, 1), std::invalid_argument);
}

TEST(CovarianceModel, RandomLagProperties) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> coord(-30.0, 30.0);
  for (int d = 1; d <= 3; ++d) {
    for (const auto& m : all_models(d)) {
      const std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
      const double r0 = m.evaluate(zero);
      EXPECT_DOUBLE_EQ(r0, m.variance());
      std::vector<double> t(static_cast<std::size_t>(d)), neg(static_cast<std::size_t>(d));
      for (int i = 0; i < 10000; ++i) {
        for (int k = 0; k < d; ++k) {
          t[static_cast<std::size_t>(k)] = coord(rng);
          neg[static_cast<std::size_t>(k)] = -t[static_cast<std::size_t>(k)];
        }
        const double v = m.evaluate(t);
        ASSERT_LE(std::abs(v), r0);
        ASSERT_EQ(v, m.evaluate(neg));
        const double c = m.correlation(t);
        ASSERT_GE(c, -1.0);
        ASSERT_LE(c, 1.0);
      }
    }
  }
}

TEST(CovarianceModel, SphericalVanishesOutsideBall) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> extra(1e-9, 50.0);
  const auto m = CovarianceModel::spherical(1.0, 10.0, 3);
  for (int i = 0; i < 10000; ++i) {
    double dir[3] = {g(rng), g(rng), g(rng)};
    const double n = std::sqrt(dir[0] * dir[0] + dir[1] * dir[1] + dir[2] * dir[2]);
    const double len = 10.0 * (1.0 + 1e-12) + extra(rng);
    for (double& x : dir) x *= len / n;
    ASSERT_EQ(m.evaluate(dir), 0.0);
  }
}

TEST(ThetaCoefficient, Examples) {
  QuadratureSpec q;
  EXPECT_EQ(theta_coefficient(CovarianceModel::spherical(1.0, 10.0, 2), 10.0, q), 0.0);
  EXPECT_NEAR(theta_coefficient(CovarianceModel::exponential(1.0, 1.0, 1), 1.0, q), 4.0 * std::exp(-1.0),
              1e-8);
  EXPECT_EQ(theta_coefficient(CovarianceModel::white_noise(1.0, 2), 1.0, q), 0.0);
}

TEST(ThetaCoefficient, NonIncreasingInR) {
  QuadratureSpec q;
  q.abs_tol = 1e-8;
  q.rel_tol = 1e-8;
  for (int d = 1; d <= 2; ++d) {
    for (const auto& m : {CovarianceModel::spherical(1.0, 10.0, d), CovarianceModel::exponential(1.0, 2.0, d)}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int i = 1; i <= 20; ++i) {
        const double th = theta_coefficient(m, 0.6 * i, q);
        EXPECT_LE(th, prev + 1e-7) << m.describe() << " r=" << 0.6 * i;
        prev = th;
      }
    }
  }
}

TEST(ThetaCoefficient, TwoDimensionalExponentialMatchesClosedForm) {
  // 2 * (total - integral over the square [-r, r]^2) with
  // total = 2 pi b^2 for exp(-|t|/b).
  QuadratureSpec q;
  q.abs_tol = 1e-9;
  q.rel_tol = 1e-9;
  const auto m = CovarianceModel::exponential(1.0, 1.0, 2);
  const double th = theta_coefficient(m, 0.0001, q);
  EXPECT_NEAR(th, 2.0 * 2.0 * M_PI, 1e-5);
}

TEST(CheckDecay, Reports) {
  const DecayReport s = check_decay(CovarianceModel::spherical(1.0, 10.0, 2));
  EXPECT_TRUE(std::isinf(s.alpha));
  EXPECT_TRUE(s.satisfies_condition_a);
  EXPECT_TRUE(s.satisfies_condition_b);
  const DecayReport e = check_decay(CovarianceModel::exponential(1.0, 1.0, 3));
  EXPECT_TRUE(e.satisfies_condition_a && e.satisfies_condition_b);
  EXPECT_EQ(e.threshold_a, 9.0);
  EXPECT_EQ(e.threshold_b, 3.0);
  const DecayReport p = decay_report(2.0, 1);
  EXPECT_FALSE(p.satisfies_condition_a);
  EXPECT_TRUE(p.satisfies_condition_b);
  for (double alpha : {0.5, 1.0, 2.0, 3.0, 4.0, 10.0}) {
    for (int d = 1; d <= 3; ++d) {
      const DecayReport r = decay_report(alpha, d);
      if (r.satisfies_condition_a) EXPECT_TRUE(r.satisfies_condition_b);
    }
  }
}

TEST(CovarianceModel, TailRadiusBoundsTailMass) {
  const auto m = CovarianceModel::exponential(1.0, 1.0, 1);
  const double r = m.tail_radius(1e-6);
  EXPECT_NEAR(2.0 * std::exp(-r), 1e-6, 1e-8);
  EXPECT_EQ(CovarianceModel::spherical(1.0, 10.0, 2).tail_radius(1e-6), 10.0);
  EXPECT_NEAR(unit_sphere_area(1), 2.0, 1e-15);
  EXPECT_NEAR(unit_sphere_area(2), 2.0 * M_PI, 1e-14);
  EXPECT_NEAR(unit_sphere_area(3), 4.0 * M_PI, 1e-14);
}
