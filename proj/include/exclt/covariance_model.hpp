#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <string_view>

#include "exclt/quadrature.hpp"

namespace exclt {

enum class CovarianceKind { spherical, exponential, powered_exponential, white_noise };

std::string_view to_string(CovarianceKind kind);
CovarianceKind covariance_kind_from_string(std::string_view name);

/// Tail-decay summary against the integrability conditions of the CLT:
/// (A) needs alpha > 3d, (B) needs alpha > d.
struct DecayReport {
  double alpha = std::numeric_limits<double>::infinity();
  int dimension = 1;
  double threshold_a = 3.0;
  double threshold_b = 1.0;
  bool satisfies_condition_a = true;
  bool satisfies_condition_b = true;
};

/// Threshold arithmetic shared by every model family; also usable for
/// declared power-law tails that have no model class here.
DecayReport decay_report(double alpha, int dimension);

/// Isotropic stationary covariance R(t) = variance * correlation(|t|_2).
///
///   spherical            (1 - 3v/(2a) + v^3/(2a^3)) for v <= a, else 0
///   exponential          exp(-v/b)
///   powered_exponential  exp(-(v/b)^p), 0 < p <= 2
///   white_noise          1 at v = 0, else 0 (nugget; harness sanity only)
///
/// Immutable after construction.
class CovarianceModel {
 public:
  static CovarianceModel spherical(double variance, double range, int dimension, double mean = 0.0);
  static CovarianceModel exponential(double variance, double scale, int dimension, double mean = 0.0);
  static CovarianceModel powered_exponential(double variance, double scale, double power,
                                             int dimension, double mean = 0.0);
  static CovarianceModel white_noise(double variance, int dimension, double mean = 0.0);

  [[nodiscard]] CovarianceKind kind() const noexcept { return kind_; }
  [[nodiscard]] double variance() const noexcept { return variance_; }
  [[nodiscard]] double stddev() const noexcept;
  [[nodiscard]] double mean() const noexcept { return mean_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  /// Spherical range a, or the exponential scale b.
  [[nodiscard]] double scale() const noexcept { return scale_; }
  [[nodiscard]] double power() const noexcept { return power_; }

  /// R(t) for a lag vector of length dimension().
  [[nodiscard]] double evaluate(std::span<const double> lag) const;
  /// R as a function of the Euclidean lag length.
  [[nodiscard]] double evaluate_radial(double distance) const;
  [[nodiscard]] double correlation(std::span<const double> lag) const;
  [[nodiscard]] double correlation_radial(double distance) const;

  /// Radius beyond which R vanishes identically; +inf when not compact.
  [[nodiscard]] double support_radius() const noexcept;
  [[nodiscard]] bool has_compact_support() const noexcept;
  /// Smallest radius R with integral_{|t|_2 > R} |rho(t)| dt <= tol.
  /// Equals support_radius() for compactly supported models.
  [[nodiscard]] double tail_radius(double tol) const;
  /// False for white_noise: it violates the continuity assumption.
  [[nodiscard]] bool is_continuous() const noexcept { return kind_ != CovarianceKind::white_noise; }

  [[nodiscard]] std::string describe() const;

 private:
  CovarianceModel(CovarianceKind kind, double variance, double scale, double power, int dimension,
                  double mean);

  CovarianceKind kind_;
  double variance_;
  double scale_;
  double power_;
  int dimension_;
  double mean_;
};

/// theta_r = 2 * integral over {|t|_inf >= r} of |R(t)| dt, by tensor-product
/// quadrature over the 3^d - 1 boxes surrounding the cube [-r, r]^d.
/// White noise has no integrable continuous part and returns 0.
double theta_coefficient(const CovarianceModel& model, double r, const QuadratureSpec& quad);

/// Declared tail exponent of the model family (all supported families decay
/// faster than any polynomial, so alpha = +inf).
DecayReport check_decay(const CovarianceModel& model);

/// Surface area of the unit sphere in R^d, i.e. d * omega_d.
double unit_sphere_area(int dimension);

}  // namespace exclt
