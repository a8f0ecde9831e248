#include "exclt/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace exclt {

ThresholdVector::ThresholdVector(std::vector<double> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw std::invalid_argument("thresholds: at least one level is required");
  for (std::size_t k = 0; k < levels_.size(); ++k) {
    if (!std::isfinite(levels_[k])) throw std::invalid_argument("thresholds: levels must be finite");
    if (k > 0 && !(levels_[k - 1] < levels_[k])) {
      throw std::invalid_argument("thresholds must be strictly increasing");
    }
  }
}

std::vector<bool> excursion_mask(const GridField& field, double u) {
  const auto values = field.values();
  std::vector<bool> mask(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) mask[i] = values[i] >= u;
  return mask;
}

double excursion_volume(const GridField& field, double u) {
  const auto values = field.values();
  const auto n = static_cast<std::size_t>(
      std::count_if(values.begin(), values.end(), [u](double x) { return x >= u; }));
  return field.spec().cell_volume() * static_cast<double>(n);
}

std::vector<std::size_t> exceedance_counts(std::span<const double> values, const ThresholdVector& u) {
  const auto& levels = u.levels();
  const std::size_t r = levels.size();
  // bins[j] = number of values with exactly j levels <= value.
  std::vector<std::size_t> bins(r + 1, 0);
  for (double x : values) {
    const auto j = static_cast<std::size_t>(std::upper_bound(levels.begin(), levels.end(), x) -
                                            levels.begin());
    ++bins[j];
  }
  std::vector<std::size_t> counts(r, 0);
  std::size_t running = 0;
  for (std::size_t k = r; k-- > 0;) {
    running += bins[k + 1];
    counts[k] = running;
  }
  return counts;
}

ExcursionStats excursion_vector(const GridField& field, const ThresholdVector& u) {
  ExcursionStats stats{u, {}, exceedance_counts(field.values(), u), field.spec().window_volume(),
                       field.spec().point_count()};
  const double cell = field.spec().cell_volume();
  stats.volumes.reserve(u.size());
  for (std::size_t c : stats.counts) stats.volumes.push_back(cell * static_cast<double>(c));
  return stats;
}

std::vector<double> centered_statistic(const ExcursionStats& stats, std::span<const double> p) {
  if (p.size() != stats.volumes.size()) {
    throw std::invalid_argument("centered_statistic: " + std::to_string(p.size()) +
                                " probabilities for " + std::to_string(stats.volumes.size()) +
                                " thresholds");
  }
  const double vol = stats.window_volume;
  const double root = std::sqrt(vol);
  std::vector<double> out(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (!(p[k] >= 0.0 && p[k] <= 1.0)) {
      throw std::invalid_argument("centered_statistic: probabilities must lie in [0, 1]");
    }
    out[k] = (stats.volumes[k] - vol * p[k]) / root;
  }
  return out;
}

}  // namespace exclt
