#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "exclt/grid.hpp"

namespace exclt {

/// Levels u_1 < ... < u_r, r >= 1. Unsorted or duplicated input is rejected
/// rather than sorted so that output component order is never ambiguous.
class ThresholdVector {
 public:
  explicit ThresholdVector(std::vector<double> levels);
  ThresholdVector(std::initializer_list<double> levels)
      : ThresholdVector(std::vector<double>(levels)) {}

  [[nodiscard]] std::size_t size() const noexcept { return levels_.size(); }
  [[nodiscard]] double operator[](std::size_t k) const { return levels_[k]; }
  [[nodiscard]] const std::vector<double>& levels() const noexcept { return levels_; }

  bool operator==(const ThresholdVector&) const = default;

 private:
  std::vector<double> levels_;
};

/// Excursion volumes S_k = h^d * #{lattice points with X >= u_k}.
struct ExcursionStats {
  ThresholdVector thresholds;
  std::vector<double> volumes;
  std::vector<std::size_t> counts;
  double window_volume = 0.0;
  std::size_t point_count = 0;
};

/// Lattice indicator of the closed excursion set {X >= u}.
std::vector<bool> excursion_mask(const GridField& field, double u);

double excursion_volume(const GridField& field, double u);

/// All r volumes in one pass: each value is binned by binary search over
/// the levels, then counts are accumulated from the top level down.
ExcursionStats excursion_vector(const GridField& field, const ThresholdVector& u);

/// Counts of values >= u_k within an arbitrary span of values.
std::vector<std::size_t> exceedance_counts(std::span<const double> values, const ThresholdVector& u);

/// (S - vol(W) p) / sqrt(vol(W)), componentwise.
std::vector<double> centered_statistic(const ExcursionStats& stats, std::span<const double> p);

}  // namespace exclt
