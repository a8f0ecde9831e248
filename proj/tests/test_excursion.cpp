#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "exclt/asymptotic.hpp"
#include "exclt/excursion.hpp"
#include "exclt/gaussian_simulation.hpp"

using namespace exclt;

namespace {

GridField two_by_two() { return {GridSpec::cube(2, 2.0), {0.0, 1.0, 2.0, 3.0}, "test", 0}; }

GridField constant_field(double c, double side = 4.0) {
  const GridSpec g = GridSpec::cube(2, side);
  return {g, std::vector<double>(g.point_count(), c), "constant", 0};
}

}  // namespace

TEST(Thresholds, Validation) {
  EXPECT_THROW(ThresholdVector({1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(ThresholdVector({0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(ThresholdVector(std::vector<double>{}), std::invalid_argument);
  try {
    ThresholdVector({0.5, -0.5});
  } catch (const std::invalid_argument& e) {
    EXPECT_STREQ(e.what(), "thresholds must be strictly increasing");
  }
}

TEST(ExcursionMask, Examples) {
  const GridField f = two_by_two();
  const auto all = excursion_mask(f, -1.0);
  EXPECT_TRUE(std::all_of(all.begin(), all.end(), [](bool b) { return b; }));
  const auto none = excursion_mask(f, 3.5);
  EXPECT_TRUE(std::none_of(none.begin(), none.end(), [](bool b) { return b; }));
  const auto mask = excursion_mask(f, 1.5);
  EXPECT_EQ(mask, (std::vector<bool>{false, false, true, true}));
  // Closed inequality.
  EXPECT_TRUE(excursion_mask(f, 1.0)[1]);
}

TEST(ExcursionVolume, Examples) {
  EXPECT_DOUBLE_EQ(excursion_volume(two_by_two(), 1.5), 2.0);
  EXPECT_DOUBLE_EQ(excursion_volume(constant_field(0.3), 0.3), 16.0);
  EXPECT_DOUBLE_EQ(excursion_volume(constant_field(0.3), 0.31), 0.0);
  const GridField fine({GridSpec({2.0, 2.0}, 0.5), std::vector<double>(16, 1.0), "c", 0});
  EXPECT_DOUBLE_EQ(excursion_volume(fine, 0.0), 4.0);
}

TEST(ExcursionVector, Examples) {
  const ExcursionStats s = excursion_vector(constant_field(0.0), ThresholdVector{-1.0, 0.0, 1.0});
  EXPECT_EQ(s.volumes, (std::vector<double>{16.0, 16.0, 0.0}));
  EXPECT_DOUBLE_EQ(s.window_volume, 16.0);
  EXPECT_EQ(s.point_count, 16u);
  const GridField f = two_by_two();
  const ExcursionStats one = excursion_vector(f, ThresholdVector{1.5});
  EXPECT_EQ(one.volumes[0], excursion_volume(f, 1.5));
}

TEST(ExcursionVector, MonotoneAndComplementary) {
  const GridField f = simulate_gaussian(CovarianceModel::spherical(1.0, 10.0, 2), GridSpec::cube(2, 64.0), 4);
  const ThresholdVector u{-1.0, -0.3, 0.0, 0.4, 1.0};
  const ExcursionStats s = excursion_vector(f, u);
  for (std::size_t k = 0; k < u.size(); ++k) {
    EXPECT_EQ(s.volumes[k], excursion_volume(f, u[k]));
    if (k > 0) EXPECT_GE(s.volumes[k - 1], s.volumes[k]);
    EXPECT_GE(s.volumes[k], 0.0);
    EXPECT_LE(s.volumes[k], s.window_volume);
    const auto values = f.values();
    const auto below = std::count_if(values.begin(), values.end(), [&](double x) { return x < u[k]; });
    EXPECT_EQ(s.volumes[k] + static_cast<double>(below), s.window_volume);
  }
}

TEST(ExcursionVolume, RiemannConsistency) {
  // Smooth deterministic field; successive halvings of h change the volume
  // by shrinking amounts.
  std::vector<double> vol;
  for (double h : {1.0, 0.5, 0.25}) {
    const GridSpec g({40.0, 40.0}, h);
    std::vector<double> v(g.point_count());
    std::vector<std::size_t> idx(2);
    std::vector<double> x(2);
    for (std::size_t i = 0; i < v.size(); ++i) {
      g.multi_index(i, idx);
      g.point(idx, x);
      v[i] = std::cos(x[0] / 5.0) + std::cos(x[1] / 7.0);
    }
    vol.push_back(excursion_volume(GridField(g, v, "smooth", 0), 0.3));
  }
  const double d1 = std::abs(vol[1] - vol[0]);
  const double d2 = std::abs(vol[2] - vol[1]);
  EXPECT_LT(d2, d1);
  EXPECT_GT(d1, 0.0);
}

TEST(CenteredStatistic, Examples) {
  ExcursionStats s{ThresholdVector{0.0}, {3.0}, {3}, 4.0, 4};
  EXPECT_DOUBLE_EQ(centered_statistic(s, std::vector<double>{0.5})[0], 0.5);
  ExcursionStats z{ThresholdVector{0.0, 1.0}, {2.0, 1.0}, {2, 1}, 4.0, 4};
  const auto zero = centered_statistic(z, std::vector<double>{0.5, 0.25});
  EXPECT_EQ(zero, (std::vector<double>{0.0, 0.0}));
  EXPECT_THROW((void)centered_statistic(z, std::vector<double>{0.5}), std::invalid_argument);
  EXPECT_THROW((void)centered_statistic(z, std::vector<double>{0.5, 1.5}), std::invalid_argument);
}

TEST(ExcursionVolume, GaussianHalfLevel) {
  // S / vol at u = 0 has mean 1/2 and variance about sigma^2(0) / vol.
  const auto model = CovarianceModel::spherical(1.0, 10.0, 2);
  const GaussianSampler sampler(model, GridSpec::cube(2, 512.0));
  const GridField f = sampler.sample(123);
  const double frac = excursion_volume(f, 0.0) / f.spec().window_volume();
  const double sd = std::sqrt(10.5564 / f.spec().window_volume());
  EXPECT_LT(std::abs(frac - 0.5), 3.0 * sd);
}
