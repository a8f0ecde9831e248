#include "exclt/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace exclt {

GridSpec::GridSpec(std::vector<double> sides, double mesh, std::vector<double> origin)
    : sides_(std::move(sides)), mesh_(mesh), origin_(std::move(origin)) {
  if (sides_.empty() || sides_.size() > 3) {
    throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
  }
  if (!(mesh_ > 0.0) || !std::isfinite(mesh_)) {
    throw std::invalid_argument("grid: mesh must be positive and finite");
  }
  if (origin_.empty()) origin_.assign(sides_.size(), 0.0);
  if (origin_.size() != sides_.size()) {
    throw std::invalid_argument("grid: origin dimension does not match sides");
  }
  total_ = 1;
  for (std::size_t k = 0; k < sides_.size(); ++k) {
    if (!(sides_[k] > 0.0) || !std::isfinite(sides_[k])) {
      throw std::invalid_argument("grid: side lengths must be positive and finite");
    }
    // Tolerate representation error in side/mesh (e.g. 1/0.1).
    const auto n = static_cast<std::size_t>(std::floor(sides_[k] / mesh_ + 1e-9));
    if (n < 2) {
      throw std::invalid_argument("grid: axis " + std::to_string(k) +
                                  " has fewer than 2 lattice points");
    }
    if (n > kMaxPoints / total_) {
      throw std::invalid_argument("grid: total point count exceeds " + std::to_string(kMaxPoints));
    }
    counts_.push_back(n);
    total_ *= n;
  }
}

GridSpec GridSpec::cube(int dimension, double side, double mesh) {
  if (dimension < 1 || dimension > 3) throw std::invalid_argument("grid: dimension must be 1, 2 or 3");
  return GridSpec(std::vector<double>(static_cast<std::size_t>(dimension), side), mesh);
}

double GridSpec::cell_volume() const noexcept {
  return std::pow(mesh_, static_cast<double>(dimension()));
}

double GridSpec::window_volume() const noexcept {
  return cell_volume() * static_cast<double>(total_);
}

std::size_t GridSpec::linear_index(std::span<const std::size_t> idx) const {
  std::size_t lin = 0;
  for (std::size_t k = 0; k < counts_.size(); ++k) lin = lin * counts_[k] + idx[k];
  return lin;
}

void GridSpec::multi_index(std::size_t linear, std::span<std::size_t> idx) const {
  for (std::size_t k = counts_.size(); k-- > 0;) {
    idx[k] = linear % counts_[k];
    linear /= counts_[k];
  }
}

void GridSpec::point(std::span<const std::size_t> idx, std::span<double> out) const {
  for (std::size_t k = 0; k < counts_.size(); ++k) {
    out[k] = origin_[k] + static_cast<double>(idx[k]) * mesh_;
  }
}

GridField::GridField(GridSpec spec, std::vector<double> values, std::string model_tag,
                     std::uint64_t seed)
    : spec_(std::move(spec)), values_(std::move(values)), model_tag_(std::move(model_tag)),
      seed_(seed) {
  if (values_.size() != spec_.point_count()) {
    throw std::invalid_argument("field: value count " + std::to_string(values_.size()) +
                                " does not match grid point count " +
                                std::to_string(spec_.point_count()));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("field: values must be finite");
  }
}

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index) noexcept {
  return base_seed ^ mix64(index);
}

}  // namespace exclt
