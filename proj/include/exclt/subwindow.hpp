#pragma once

#include <cstddef>
#include <vector>

#include "exclt/asymptotic.hpp"
#include "exclt/excursion.hpp"
#include "exclt/grid.hpp"

namespace exclt {

/// Non-overlapping cubic subwindows laid out as a regular grid inside the
/// window, with the leftover margin split evenly on both sides of each axis.
struct SubwindowTiling {
  GridSpec window;
  double edge = 0.0;
  /// Lattice points per tile along each axis.
  std::size_t points_per_edge = 0;
  std::vector<std::size_t> tiles_per_axis;
  /// Lattice offset of the first tile along each axis.
  std::vector<std::size_t> offset_points;
  /// Translation vectors (row-major, d coordinates per tile).
  std::vector<double> translations;

  [[nodiscard]] std::size_t tile_count() const;
  /// nu_d(V).
  [[nodiscard]] double subwindow_volume() const;
  /// Discarded margin (in length units) before the first tile on each axis.
  [[nodiscard]] std::vector<double> margin_before() const;
  /// Total discarded margin per axis.
  [[nodiscard]] std::vector<double> margin_total() const;
};

/// Maximal regular tiling by cubes of the given edge. The edge must be a
/// positive multiple of the mesh and fit into every side; fewer than two
/// tiles is an error.
SubwindowTiling make_tiling(const GridSpec& window, double edge);

struct SubwindowMeans {
  std::size_t tiles = 0;
  std::size_t order = 0;
  /// tiles x order, row-major: share of tile points with X >= u_k.
  std::vector<double> means;
  std::vector<double> grand_means;

  [[nodiscard]] double operator()(std::size_t tile, std::size_t k) const {
    return means[tile * order + k];
  }
};

SubwindowMeans subwindow_means(const GridField& field, const SubwindowTiling& tiling,
                               const ThresholdVector& u);

/// nu_d(V) / (N - 1) times the Gram matrix of the centered columns.
CovMatrix subwindow_estimate(const SubwindowMeans& means, double subwindow_volume);

/// Edge heuristic 15 * (range / 10), rounded to the nearest positive
/// multiple of the mesh.
double default_subwindow_edge(double correlation_range, double mesh);

}  // namespace exclt
