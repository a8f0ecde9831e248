#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "exclt/covariance_model.hpp"
#include "exclt/grid.hpp"

namespace exclt {

struct SimulationOptions {
  /// Retries of the circulant embedding, each doubling every embedding side.
  int max_padding_doublings = 3;
  /// Largest grid (in points) eligible for the dense factorization fallback.
  std::size_t dense_limit = 64 * 64;
  /// Embedding eigenvalues below -tol * max are treated as a failed embedding.
  double negative_tolerance = 1e-10;
  /// Skip the embedding entirely (small grids only).
  bool force_dense = false;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SamplerMethod { circulant_embedding, dense_factorization };

/// Exact sampler for a stationary Gaussian field on a fixed grid. The
/// factorization is computed once; sample() is const and may be called
/// concurrently from several threads.
class GaussianSampler {
 public:
  GaussianSampler(const CovarianceModel& model, const GridSpec& spec,
                  const SimulationOptions& options = {});
  ~GaussianSampler();
  GaussianSampler(GaussianSampler&&) noexcept;
  GaussianSampler& operator=(GaussianSampler&&) noexcept;

  [[nodiscard]] GridField sample(std::uint64_t seed) const;

  [[nodiscard]] SamplerMethod method() const noexcept;
  /// Embedding lattice sizes actually used (empty for the dense path).
  [[nodiscard]] const std::vector<std::size_t>& embedding_sizes() const noexcept;
  [[nodiscard]] int padding_doublings() const noexcept;
  /// Most negative embedding eigenvalue relative to the largest one, for the
  /// accepted embedding (clipped to zero before sampling).
  [[nodiscard]] double min_relative_eigenvalue() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper around GaussianSampler.
GridField simulate_gaussian(const CovarianceModel& model, const GridSpec& spec, std::uint64_t seed,
                            const SimulationOptions& options = {});

}  // namespace exclt
