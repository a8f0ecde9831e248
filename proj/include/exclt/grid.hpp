#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace exclt {

/// Regular lattice inside a rectangular window. Lattice points sit at
/// origin + i * mesh, i = 0 .. count-1 per axis; each point represents the
/// cell [x, x + mesh) so the discretized window volume is prod(count * mesh).
class GridSpec {
 public:
  static constexpr std::size_t kMaxPoints = std::size_t{1} << 28;

  GridSpec(std::vector<double> sides, double mesh, std::vector<double> origin = {});
  /// Cube [0, side)^d.
  static GridSpec cube(int dimension, double side, double mesh = 1.0);

  [[nodiscard]] int dimension() const noexcept { return static_cast<int>(sides_.size()); }
  [[nodiscard]] const std::vector<double>& sides() const noexcept { return sides_; }
  [[nodiscard]] double mesh() const noexcept { return mesh_; }
  [[nodiscard]] const std::vector<double>& origin() const noexcept { return origin_; }
  [[nodiscard]] const std::vector<std::size_t>& counts() const noexcept { return counts_; }
  [[nodiscard]] std::size_t point_count() const noexcept { return total_; }
  /// h^d, the volume represented by one lattice point.
  [[nodiscard]] double cell_volume() const noexcept;
  [[nodiscard]] double window_volume() const noexcept;

  /// Row-major linear index (axis 0 varies slowest).
  [[nodiscard]] std::size_t linear_index(std::span<const std::size_t> idx) const;
  /// Inverse of linear_index.
  void multi_index(std::size_t linear, std::span<std::size_t> idx) const;
  /// Coordinates of a lattice point.
  void point(std::span<const std::size_t> idx, std::span<double> out) const;

  bool operator==(const GridSpec&) const = default;

 private:
  std::vector<double> sides_;
  double mesh_;
  std::vector<double> origin_;
  std::vector<std::size_t> counts_;
  std::size_t total_ = 0;
};

/// One realization sampled on a GridSpec. Immutable once constructed.
class GridField {
 public:
  GridField(GridSpec spec, std::vector<double> values, std::string model_tag, std::uint64_t seed);

  [[nodiscard]] const GridSpec& spec() const noexcept { return spec_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
  [[nodiscard]] const std::string& model_tag() const noexcept { return model_tag_; }
  [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }
  [[nodiscard]] double at(std::span<const std::size_t> idx) const {
    return values_[spec_.linear_index(idx)];
  }

 private:
  GridSpec spec_;
  std::vector<double> values_;
  std::string model_tag_;
  std::uint64_t seed_;
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Per-replication seed: base_seed XOR mix(index). Order independent, so
/// replications can run on any worker in any order.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

}  // namespace exclt
