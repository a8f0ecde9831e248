#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "exclt/excursion.hpp"
#include "exclt/sigma_generic.hpp"

using namespace exclt;

namespace {

class ZeroEvaluator final : public IndicatorCovEvaluator {
 public:
  [[nodiscard]] int dimension() const override { return 2; }
  [[nodiscard]] std::size_t order() const override { return 2; }
  [[nodiscard]] bool isotropic() const override { return true; }
  [[nodiscard]] bool stochastic() const override { return false; }
  [[nodiscard]] double cutoff_radius(const QuadratureSpec&) const override { return 5.0; }
  [[nodiscard]] CovEstimate evaluate(std::size_t, std::size_t, std::span<const double>) const override {
    return {};
  }
};

ShotNoiseModel line_model() {
  return {1.0, MarkDistribution::constant(1.0), ResponseFunction::exp_decay(1.0, 1.0), 1};
}

}  // namespace

TEST(SigmaGeneric, GaussianEvaluatorMatchesDirectRoute) {
  const QuadratureSpec q;
  for (const auto& model : {CovarianceModel::spherical(1.0, 10.0, 2), CovarianceModel::exponential(1.0, 1.0, 1)}) {
    const GaussianMarginal m = GaussianMarginal::of(model);
    const ThresholdVector u{-1.0, 0.0, 1.0};
    const CovMatrix direct = sigma_matrix_gaussian(m, model, u, q);
    const GenericSigma generic = sigma_matrix_generic(GaussianIndicatorEvaluator(m, model, u), q);
    for (std::size_t i = 0; i < 9; ++i) {
      EXPECT_NEAR(generic.matrix.entries()[i], direct.entries()[i], 1e-6) << model.describe();
      EXPECT_EQ(generic.std_errors[i], 0.0);
    }
  }
}

TEST(SigmaGeneric, CartesianRouteAgrees) {
  const QuadratureSpec q;
  const auto model = CovarianceModel::exponential(1.0, 1.0, 2);
  const GaussianMarginal m = GaussianMarginal::of(model);
  const ThresholdVector u{0.0, 0.5};
  const GaussianIndicatorEvaluator ev(m, model, u);
  const GenericSigma radial = sigma_matrix_generic(ev, q);
  const GenericSigma cart = sigma_matrix_generic(ev, q, {LagIntegration::cartesian});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(radial.matrix.entries()[i], cart.matrix.entries()[i], 1e-6);
}

TEST(SigmaGeneric, ZeroEvaluatorGivesZeroMatrix) {
  const GenericSigma z = sigma_matrix_generic(ZeroEvaluator(), {});
  for (double x : z.matrix.entries()) EXPECT_EQ(x, 0.0);
}

TEST(SigmaGeneric, ShotNoiseLineAgreesWithEmpiricalVariance) {
  const ShotNoiseModel model = line_model();
  // Median level of X(0) by Monte Carlo.
  std::mt19937_64 rng(11);
  std::vector<double> x0;
  const double origin[1] = {0.0};
  for (int i = 0; i < 4001; ++i) x0.push_back(shot_noise_at_points(model, origin, rng)[0]);
  std::nth_element(x0.begin(), x0.begin() + 2000, x0.end());
  const ThresholdVector u{x0[2000]};

  const GenericSigma g = sigma_matrix_generic(ShotNoiseIndicatorEvaluator(model, u, 4000, 5), {});
  const double sigma2 = g.matrix(0, 0);
  const double se_theory = g.std_errors[0];
  EXPECT_GT(sigma2, 0.0);

  const GridSpec spec({1000.0}, 0.25);
  const int reps = 200;
  std::vector<double> s;
  for (int i = 0; i < reps; ++i) s.push_back(excursion_volume(simulate_shot_noise(model, spec, 1000 + i), u[0]));
  double mean = 0.0;
  for (double v : s) mean += v / reps;
  double ss = 0.0;
  for (double v : s) ss += (v - mean) * (v - mean);
  const double var = ss / (reps - 1) / spec.window_volume();
  const double se_emp = var * std::sqrt(2.0 / (reps - 1));
  const double se = std::hypot(se_theory, se_emp);
  EXPECT_LT(std::abs(var - sigma2), 3.0 * se) << "theory " << sigma2 << " +- " << se_theory << ", empirical " << var;
}

TEST(SigmaGeneric, PrecisionErrorReportsRequiredSamples) {
  const ShotNoiseModel model = line_model();
  const ShotNoiseIndicatorEvaluator ev(model, ThresholdVector{1.0}, 50, 3);
  GenericSigmaOptions opt;
  opt.max_std_error = 1e-4;
  try {
    (void)sigma_matrix_generic(ev, {}, opt);
    FAIL() << "expected a precision error";
  } catch (const MonteCarloPrecisionError& e) {
    EXPECT_GT(e.required_samples(), 50u);
  }
}

TEST(SigmaGeneric, ShotNoiseDeterministicForSeed) {
  const ShotNoiseIndicatorEvaluator a(line_model(), ThresholdVector{1.0}, 200, 9);
  const ShotNoiseIndicatorEvaluator b(line_model(), ThresholdVector{1.0}, 200, 9);
  const double lag[1] = {0.7};
  EXPECT_EQ(a.evaluate(0, 0, lag).value, b.evaluate(0, 0, lag).value);
  const double neg[1] = {-0.7};
  EXPECT_EQ(a.evaluate(0, 0, lag).value, a.evaluate(0, 0, neg).value);
}
