#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exclt/asymptotic.hpp"
#include "exclt/shot_noise.hpp"

namespace exclt {

struct CovEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for deterministic evaluators
};

/// Pointwise evaluator of cov(1{X(0) >= u_l}, 1{X(t) >= u_m}).
class IndicatorCovEvaluator {
 public:
  virtual ~IndicatorCovEvaluator() = default;
  [[nodiscard]] virtual int dimension() const = 0;
  [[nodiscard]] virtual std::size_t order() const = 0;
  /// Depends on t only through |t|_2.
  [[nodiscard]] virtual bool isotropic() const = 0;
  /// Evaluations carry Monte Carlo noise.
  [[nodiscard]] virtual bool stochastic() const = 0;
  /// Lag radius beyond which the covariance is neglected.
  [[nodiscard]] virtual double cutoff_radius(const QuadratureSpec& quad) const = 0;
  /// Radii where the evaluator has kinks (used as quadrature breakpoints).
  [[nodiscard]] virtual std::vector<double> breakpoints() const { return {}; }
  [[nodiscard]] virtual CovEstimate evaluate(std::size_t l, std::size_t m,
                                             std::span<const double> lag) const = 0;
};

/// Exact evaluator for Gaussian fields.
class GaussianIndicatorEvaluator final : public IndicatorCovEvaluator {
 public:
  GaussianIndicatorEvaluator(GaussianMarginal marginal, CovarianceModel model, ThresholdVector u,
                             QuadratureSpec inner = {});
  [[nodiscard]] int dimension() const override { return model_.dimension(); }
  [[nodiscard]] std::size_t order() const override { return u_.size(); }
  [[nodiscard]] bool isotropic() const override { return true; }
  [[nodiscard]] bool stochastic() const override { return false; }
  [[nodiscard]] double cutoff_radius(const QuadratureSpec& quad) const override;
  [[nodiscard]] std::vector<double> breakpoints() const override;
  [[nodiscard]] CovEstimate evaluate(std::size_t l, std::size_t m,
                                     std::span<const double> lag) const override;

 private:
  GaussianMarginal marginal_;
  CovarianceModel model_;
  ThresholdVector u_;
  QuadratureSpec inner_;
};

/// Monte Carlo evaluator for shot-noise fields. Each sample draws one
/// realization around the lag pair and uses the mirrored pairs
/// (X(0), X(t)) and (X(-t), X(0)), which share the law of the pair by
/// stationarity.
class ShotNoiseIndicatorEvaluator final : public IndicatorCovEvaluator {
 public:
  ShotNoiseIndicatorEvaluator(ShotNoiseModel model, ThresholdVector u, std::size_t samples_per_lag,
                              std::uint64_t seed, double cutoff_radius = 0.0);
  [[nodiscard]] int dimension() const override { return model_.dimension(); }
  [[nodiscard]] std::size_t order() const override { return u_.size(); }
  [[nodiscard]] bool isotropic() const override { return true; }
  [[nodiscard]] bool stochastic() const override { return true; }
  [[nodiscard]] double cutoff_radius(const QuadratureSpec& quad) const override;
  [[nodiscard]] CovEstimate evaluate(std::size_t l, std::size_t m,
                                     std::span<const double> lag) const override;
  [[nodiscard]] std::size_t samples_per_lag() const noexcept { return samples_; }

 private:
  ShotNoiseModel model_;
  ThresholdVector u_;
  std::size_t samples_;
  std::uint64_t seed_;
  double cutoff_;
};

class MonteCarloPrecisionError : public std::runtime_error {
 public:
  MonteCarloPrecisionError(const std::string& what, std::size_t required_samples)
      : std::runtime_error(what), required_samples_(required_samples) {}
  [[nodiscard]] std::size_t required_samples() const noexcept { return required_samples_; }

 private:
  std::size_t required_samples_;
};

struct GenericSigmaOptions {
  LagIntegration route = LagIntegration::radial;
  /// Gauss-Legendre nodes for the radial integral of stochastic evaluators.
  std::size_t stochastic_nodes = 24;
  /// Largest acceptable standard error of any entry (stochastic evaluators).
  double max_std_error = 0.05;
};

struct GenericSigma {
  CovMatrix matrix;
  /// Row-major standard errors of the entries (all zero when deterministic).
  std::vector<double> std_errors;
};

/// sigma_lm = int_{R^d} cov_lm(t) dt for every pair, symmetrized by
/// averaging the (l, m) and (m, l) integrals. Deterministic evaluators use
/// adaptive quadrature (radial or cartesian); stochastic ones a fixed
/// Gauss-Legendre radial rule with propagated standard errors, throwing
/// MonteCarloPrecisionError with the required per-lag sample size when an
/// entry's standard error exceeds options.max_std_error.
GenericSigma sigma_matrix_generic(const IndicatorCovEvaluator& evaluator, const QuadratureSpec& quad,
                                  const GenericSigmaOptions& options = {});

}  // namespace exclt
