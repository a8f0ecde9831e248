#include <algorithm>
#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "exclt/gaussian_simulation.hpp"
#include "exclt/subwindow.hpp"

using namespace exclt;

TEST(Tiling, Examples) {
  const SubwindowTiling small = make_tiling(GridSpec::cube(2, 30.0), 15.0);
  EXPECT_EQ(small.tile_count(), 4u);
  EXPECT_DOUBLE_EQ(small.subwindow_volume(), 225.0);

  const SubwindowTiling big = make_tiling(GridSpec::cube(2, 2000.0), 15.0);
  EXPECT_EQ(big.tile_count(), 17689u);
  EXPECT_EQ(big.tiles_per_axis, (std::vector<std::size_t>{133, 133}));
  EXPECT_EQ(big.margin_total(), (std::vector<double>{5.0, 5.0}));
  EXPECT_EQ(big.margin_before(), (std::vector<double>{2.0, 2.0}));

  EXPECT_THROW(make_tiling(GridSpec::cube(2, 2000.0), 2001.0), std::invalid_argument);
  EXPECT_THROW(make_tiling(GridSpec::cube(2, 20.0), 15.0), std::invalid_argument);  // one tile
  EXPECT_THROW(make_tiling(GridSpec({20.0, 20.0}, 0.5), 7.25), std::invalid_argument);
  EXPECT_THROW(make_tiling(GridSpec::cube(2, 20.0), 0.0), std::invalid_argument);
}

TEST(Tiling, TilesInsideWindowAndDisjoint) {
  const GridSpec g({50.0, 37.0}, 1.0, {3.0, -4.0});
  const SubwindowTiling t = make_tiling(g, 6.0);
  EXPECT_EQ(t.tile_count(), 8u * 6u);
  for (std::size_t j = 0; j < t.tile_count(); ++j) {
    for (std::size_t a = 0; a < 2; ++a) {
      const double lo = t.translations[j * 2 + a];
      EXPECT_GE(lo, g.origin()[a]);
      EXPECT_LE(lo + 6.0, g.origin()[a] + g.sides()[a]);
    }
  }
  for (std::size_t i = 0; i < t.tile_count(); ++i) {
    for (std::size_t j = i + 1; j < t.tile_count(); ++j) {
      const bool overlap0 = std::abs(t.translations[i * 2] - t.translations[j * 2]) < 6.0;
      const bool overlap1 = std::abs(t.translations[i * 2 + 1] - t.translations[j * 2 + 1]) < 6.0;
      EXPECT_FALSE(overlap0 && overlap1);
    }
  }
}

TEST(SubwindowMeans, Examples) {
  const GridSpec g = GridSpec::cube(2, 30.0);
  const SubwindowTiling t = make_tiling(g, 15.0);
  const GridField zero(g, std::vector<double>(g.point_count(), 0.0), "zero", 0);
  const SubwindowMeans m0 = subwindow_means(zero, t, ThresholdVector{-1.0});
  for (double x : m0.means) EXPECT_EQ(x, 1.0);

  // +1 on the first tile (rows and columns 0..14), -1 elsewhere.
  std::vector<double> v(g.point_count(), -1.0);
  for (std::size_t i = 0; i < 15; ++i) {
    for (std::size_t j = 0; j < 15; ++j) v[i * 30 + j] = 1.0;
  }
  const SubwindowMeans m1 = subwindow_means(GridField(g, v, "tile", 0), t, ThresholdVector{0.0});
  EXPECT_EQ(m1.means, (std::vector<double>{1.0, 0.0, 0.0, 0.0}));
  EXPECT_DOUBLE_EQ(m1.grand_means[0], 0.25);
}

TEST(SubwindowEstimate, Examples) {
  SubwindowMeans equal{3, 2, {0.4, 0.2, 0.4, 0.2, 0.4, 0.2}, {0.4, 0.2}};
  const CovMatrix z = subwindow_estimate(equal, 10.0);
  for (double x : z.entries()) EXPECT_EQ(x, 0.0);

  SubwindowMeans two{2, 1, {0.5, 0.7}, {0.6}};
  const CovMatrix e = subwindow_estimate(two, 4.0);
  EXPECT_NEAR(e(0, 0), 0.08, 1e-15);
  EXPECT_EQ(e.provenance(), Provenance::estimated);
  SubwindowMeans one{1, 1, {0.5}, {0.5}};
  EXPECT_THROW((void)subwindow_estimate(one, 4.0), std::invalid_argument);
}

TEST(SubwindowEstimate, SymmetricPsdScalingPermutation) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 7, r = 1 + trial % 4;
    SubwindowMeans m{n, r, std::vector<double>(n * r), std::vector<double>(r, 0.0)};
    for (double& x : m.means) x = unif(rng);
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t k = 0; k < r; ++k) m.grand_means[k] += m.means[t * r + k] / static_cast<double>(n);
    }
    const CovMatrix a = subwindow_estimate(m, 9.0);
    EXPECT_TRUE(a.is_psd(1e-12));
    const CovMatrix b = subwindow_estimate(m, 27.0);
    for (std::size_t q = 0; q < r * r; ++q) EXPECT_NEAR(b.entries()[q], 3.0 * a.entries()[q], 1e-14);
    // Reverse the tile order.
    SubwindowMeans rev = m;
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t k = 0; k < r; ++k) rev.means[t * r + k] = m.means[(n - 1 - t) * r + k];
    }
    const CovMatrix c = subwindow_estimate(rev, 9.0);
    for (std::size_t q = 0; q < r * r; ++q) EXPECT_NEAR(c.entries()[q], a.entries()[q], 1e-14);
  }
}

TEST(SubwindowEstimate, BernoulliSitesApproachPq) {
  // i.i.d. Bernoulli(p) sites: E[sigma-hat] = p (1 - p) h^d exactly.
  const double p = 0.3;
  const GridSpec g = GridSpec::cube(2, 120.0);
  const SubwindowTiling t = make_tiling(g, 10.0);
  std::mt19937_64 rng(77);
  std::bernoulli_distribution bern(p);
  double sum = 0.0;
  std::vector<double> vals;
  const int reps = 60;
  for (int i = 0; i < reps; ++i) {
    std::vector<double> v(g.point_count());
    for (double& x : v) x = bern(rng) ? 1.0 : 0.0;
    const double e = subwindow_estimate(subwindow_means(GridField(g, v, "b", 0), t, ThresholdVector{0.5}),
                                        t.subwindow_volume())(0, 0);
    sum += e;
    vals.push_back(e);
  }
  const double mean = sum / reps;
  double ss = 0.0;
  for (double x : vals) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (reps - 1) / reps);
  EXPECT_LT(std::abs(mean - p * (1 - p)), 3.0 * se);
}

TEST(SubwindowMeans, GaussianHalfLevel) {
  const auto model = CovarianceModel::spherical(1.0, 10.0, 2);
  const GridField f = simulate_gaussian(model, GridSpec::cube(2, 512.0), 9);
  const SubwindowTiling t = make_tiling(f.spec(), 15.0);
  const SubwindowMeans m = subwindow_means(f, t, ThresholdVector{0.0});
  const double vol = static_cast<double>(t.tile_count()) * t.subwindow_volume();
  EXPECT_LT(std::abs(m.grand_means[0] - 0.5), 3.0 * std::sqrt(10.5564 / vol));
}

TEST(SubwindowEdge, Heuristic) {
  EXPECT_DOUBLE_EQ(default_subwindow_edge(10.0, 1.0), 15.0);
  EXPECT_DOUBLE_EQ(default_subwindow_edge(4.0, 0.5), 6.0);
  EXPECT_DOUBLE_EQ(default_subwindow_edge(0.1, 1.0), 1.0);
}
