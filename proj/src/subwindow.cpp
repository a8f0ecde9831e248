#include "exclt/subwindow.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace exclt {

std::size_t SubwindowTiling::tile_count() const {
  std::size_t n = 1;
  for (std::size_t t : tiles_per_axis) n *= t;
  return n;
}

double SubwindowTiling::subwindow_volume() const {
  return std::pow(static_cast<double>(points_per_edge) * window.mesh(), window.dimension());
}

std::vector<double> SubwindowTiling::margin_before() const {
  std::vector<double> out;
  for (std::size_t o : offset_points) out.push_back(static_cast<double>(o) * window.mesh());
  return out;
}

std::vector<double> SubwindowTiling::margin_total() const {
  std::vector<double> out;
  for (std::size_t a = 0; a < tiles_per_axis.size(); ++a) {
    const std::size_t used = tiles_per_axis[a] * points_per_edge;
    out.push_back(static_cast<double>(window.counts()[a] - used) * window.mesh());
  }
  return out;
}

SubwindowTiling make_tiling(const GridSpec& window, double edge) {
  if (!(edge > 0.0) || !std::isfinite(edge)) {
    throw std::invalid_argument("make_tiling: subwindow edge must be positive");
  }
  const double h = window.mesh();
  const double ratio = edge / h;
  const double k_real = std::round(ratio);
  if (k_real < 1.0 || std::abs(ratio - k_real) > 1e-9 * std::max(1.0, ratio)) {
    throw std::invalid_argument("make_tiling: subwindow edge " + std::to_string(edge) +
                                " is not a positive multiple of the mesh " + std::to_string(h));
  }
  const auto k = static_cast<std::size_t>(k_real);
  const int d = window.dimension();
  SubwindowTiling t{window, edge, k, {}, {}, {}};
  for (int a = 0; a < d; ++a) {
    const std::size_t p = window.counts()[static_cast<std::size_t>(a)];
    if (k > p) {
      throw std::invalid_argument("make_tiling: subwindow edge " + std::to_string(edge) +
                                  " exceeds window side " +
                                  std::to_string(window.sides()[static_cast<std::size_t>(a)]));
    }
    const std::size_t n = p / k;
    t.tiles_per_axis.push_back(n);
    t.offset_points.push_back((p - n * k) / 2);
  }
  const std::size_t total = t.tile_count();
  if (total < 2) {
    throw std::invalid_argument("make_tiling: only " + std::to_string(total) +
                                " subwindow fits; at least 2 are required");
  }
  const auto du = static_cast<std::size_t>(d);
  t.translations.resize(total * du);
  std::vector<std::size_t> idx(du, 0);
  for (std::size_t j = 0; j < total; ++j) {
    std::size_t rest = j;
    for (std::size_t a = du; a-- > 0;) {
      idx[a] = rest % t.tiles_per_axis[a];
      rest /= t.tiles_per_axis[a];
    }
    for (std::size_t a = 0; a < du; ++a) {
      t.translations[j * du + a] =
          window.origin()[a] + static_cast<double>(t.offset_points[a] + idx[a] * k) * h;
    }
  }
  return t;
}

SubwindowMeans subwindow_means(const GridField& field, const SubwindowTiling& tiling,
                               const ThresholdVector& u) {
  const GridSpec& spec = field.spec();
  if (!(spec.counts() == tiling.window.counts()) || spec.mesh() != tiling.window.mesh()) {
    throw std::invalid_argument("subwindow_means: tiling does not match the field's grid");
  }
  const std::size_t d = spec.counts().size();
  const std::size_t n_tiles = tiling.tile_count();
  const std::size_t r = u.size();
  const std::size_t k = tiling.points_per_edge;
  const auto& levels = u.levels();

  // Count per tile and bin, then suffix-sum over bins.
  std::vector<std::size_t> bins(n_tiles * (r + 1), 0);
  const auto values = field.values();
  std::vector<std::size_t> idx(d);
  for (std::size_t i = 0; i < values.size(); ++i) {
    spec.multi_index(i, idx);
    std::size_t tile = 0;
    bool inside = true;
    for (std::size_t a = 0; a < d; ++a) {
      const std::size_t off = tiling.offset_points[a];
      if (idx[a] < off) {
        inside = false;
        break;
      }
      const std::size_t ta = (idx[a] - off) / k;
      if (ta >= tiling.tiles_per_axis[a]) {
        inside = false;
        break;
      }
      tile = tile * tiling.tiles_per_axis[a] + ta;
    }
    if (!inside) continue;
    const auto j = static_cast<std::size_t>(
        std::upper_bound(levels.begin(), levels.end(), values[i]) - levels.begin());
    ++bins[tile * (r + 1) + j];
  }

  SubwindowMeans out{n_tiles, r, std::vector<double>(n_tiles * r), std::vector<double>(r, 0.0)};
  double per_tile = 1.0;
  for (std::size_t a = 0; a < d; ++a) per_tile *= static_cast<double>(k);
  for (std::size_t t = 0; t < n_tiles; ++t) {
    std::size_t running = 0;
    for (std::size_t q = r; q-- > 0;) {
      running += bins[t * (r + 1) + q + 1];
      out.means[t * r + q] = static_cast<double>(running) / per_tile;
    }
  }
  for (std::size_t t = 0; t < n_tiles; ++t) {
    for (std::size_t q = 0; q < r; ++q) out.grand_means[q] += out.means[t * r + q];
  }
  for (double& g : out.grand_means) g /= static_cast<double>(n_tiles);
  return out;
}

CovMatrix subwindow_estimate(const SubwindowMeans& means, double subwindow_volume) {
  if (means.tiles < 2) throw std::invalid_argument("subwindow_estimate: need at least 2 subwindows");
  if (!(subwindow_volume > 0.0)) {
    throw std::invalid_argument("subwindow_estimate: subwindow volume must be positive");
  }
  const std::size_t r = means.order;
  std::vector<double> g(r * r, 0.0);
  std::vector<double> c(r);
  for (std::size_t t = 0; t < means.tiles; ++t) {
    for (std::size_t q = 0; q < r; ++q) c[q] = means(t, q) - means.grand_means[q];
    for (std::size_t l = 0; l < r; ++l) {
      for (std::size_t m = l; m < r; ++m) g[l * r + m] += c[l] * c[m];
    }
  }
  const double scale = subwindow_volume / static_cast<double>(means.tiles - 1);
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t m = l; m < r; ++m) {
      g[l * r + m] *= scale;
      g[m * r + l] = g[l * r + m];
    }
  }
  return {r, std::move(g), Provenance::estimated};
}

double default_subwindow_edge(double correlation_range, double mesh) {
  if (!(correlation_range > 0.0) || !(mesh > 0.0)) {
    throw std::invalid_argument("default_subwindow_edge: range and mesh must be positive");
  }
  const double steps = std::max(1.0, std::round(1.5 * correlation_range / mesh));
  return steps * mesh;
}

}  // namespace exclt
