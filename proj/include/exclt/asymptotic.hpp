#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "exclt/covariance_model.hpp"
#include "exclt/excursion.hpp"
#include "exclt/quadrature.hpp"

namespace exclt {

/// X(0) ~ N(mean, stddev^2).
struct GaussianMarginal {
  double mean = 0.0;
  double stddev = 1.0;

  GaussianMarginal() = default;
  GaussianMarginal(double mean_, double stddev_);
  static GaussianMarginal of(const CovarianceModel& model) {
    return {model.mean(), model.stddev()};
  }
  [[nodiscard]] double standardize(double u) const { return (u - mean) / stddev; }
};

enum class Provenance { theoretical, estimated };

/// Symmetric r x r matrix, row-major.
class CovMatrix {
 public:
  CovMatrix(std::size_t order, std::vector<double> entries, Provenance provenance);
  static CovMatrix from_eigen(const Eigen::MatrixXd& m, Provenance provenance);
  static CovMatrix identity(std::size_t order, Provenance provenance = Provenance::theoretical);

  [[nodiscard]] std::size_t order() const noexcept { return order_; }
  [[nodiscard]] double operator()(std::size_t l, std::size_t m) const {
    return entries_[l * order_ + m];
  }
  [[nodiscard]] const std::vector<double>& entries() const noexcept { return entries_; }
  [[nodiscard]] Provenance provenance() const noexcept { return provenance_; }
  [[nodiscard]] Eigen::MatrixXd to_eigen() const;
  [[nodiscard]] double trace() const;
  [[nodiscard]] double min_eigenvalue() const;
  /// Smallest eigenvalue >= -rel_tol * trace.
  [[nodiscard]] bool is_psd(double rel_tol = 1e-8) const;

 private:
  std::size_t order_;
  std::vector<double> entries_;
  Provenance provenance_;
};

class DegenerateMatrixError : public std::runtime_error {
 public:
  DegenerateMatrixError(const std::string& what, double eigenvalue)
      : std::runtime_error(what), eigenvalue_(eigenvalue) {}
  [[nodiscard]] double eigenvalue() const noexcept { return eigenvalue_; }

 private:
  double eigenvalue_;
};

/// Standard normal survival function 1 - Phi(z).
double gaussian_tail(double z);

/// int_0^{rho} (1-r^2)^{-1/2} exp{-(z^2 - 2 r z w + w^2) / (2(1-r^2))} dr for
/// standardized levels z, w, evaluated with r = sin(s). Well defined up to
/// and including |rho| = 1.
double indicator_kernel_integral(double z, double w, double rho, const QuadratureSpec& quad);

/// cov(1{U >= u}, 1{V >= v}) for a Gaussian pair with common marginal and
/// correlation rho. |rho| = 1 uses the closed comonotone/antitone forms.
double gaussian_indicator_cov(const GaussianMarginal& m, double u, double v, double rho,
                              const QuadratureSpec& quad);

/// 3 * 2^{2/3} * a^{2/3} * |cov|^{1/3}: bound on indicator covariances of a
/// quasi-associated pair whose densities are bounded by a.
double qa_indicator_bound(double density_bound, double cov);

/// Route for the outer lag-space integral.
enum class LagIntegration {
  radial,     ///< isotropic reduction: (d omega_d / 2 pi) int v^{d-1} ... dv
  cartesian,  ///< full d-dimensional nested quadrature over R^d
};

/// Outer truncation radius for the lag integral: the compact support, or
/// the radius where the |rho|/4 envelope tail drops below the tolerance.
double lag_cutoff_radius(const CovarianceModel& model, const QuadratureSpec& quad);

/// sigma_lm for levels u_l, u_m of a Gaussian field.
double sigma_entry_gaussian(const GaussianMarginal& m, const CovarianceModel& model, double u_l,
                            double u_m, const QuadratureSpec& quad,
                            LagIntegration route = LagIntegration::radial);

double sigma2_gaussian(const GaussianMarginal& m, const CovarianceModel& model, double u,
                       const QuadratureSpec& quad, LagIntegration route = LagIntegration::radial);

/// (1/2pi) int arcsin(rho(t)) dt, the mean-level variance, via the radial route.
double sigma2_at_mean(const CovarianceModel& model, const QuadratureSpec& quad);

/// Full matrix; the upper triangle is computed once and mirrored.
CovMatrix sigma_matrix_gaussian(const GaussianMarginal& m, const CovarianceModel& model,
                                const ThresholdVector& u, const QuadratureSpec& quad,
                                LagIntegration route = LagIntegration::radial);

/// Symmetric M with M * S * M = I. Throws DegenerateMatrixError when the
/// smallest eigenvalue is below floor_rel * trace.
CovMatrix inv_sqrt(const CovMatrix& matrix, double floor_rel = 1e-10);

}  // namespace exclt
