#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "exclt/asymptotic.hpp"

namespace exclt {

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// One-sample Kolmogorov-Smirnov test against N(0, 1) with the asymptotic
/// Kolmogorov p-value (Stephens' small-sample correction of the argument).
KsResult ks_standard_normal(std::span<const double> sample);

/// Kolmogorov survival function P(K > x).
double kolmogorov_survival(double x);

struct QqPoint {
  double probability = 0.0;
  double empirical = 0.0;    ///< sample quantile of |Z|^2
  double theoretical = 0.0;  ///< chi-square(r) quantile
};

struct NormalityDiagnostics {
  std::size_t order = 0;
  std::size_t count = 0;
  std::vector<KsResult> ks;  ///< per component
  std::vector<QqPoint> qq;   ///< deciles 0.1 .. 0.9
};

/// Vectors are row-major, `order` entries each; at least 20 vectors.
NormalityDiagnostics normality_diagnostics(std::span<const double> vectors, std::size_t order);

/// Sample quantile with linear interpolation between order statistics
/// (type 7). `sorted` must be ascending.
double sample_quantile(std::span<const double> sorted, double p);

/// 100 * (mean(estimates) - reference) / reference, entrywise; nullopt
/// where the reference entry is zero.
std::vector<std::optional<double>> mean_error_matrix(std::span<const CovMatrix> estimates,
                                                     const CovMatrix& reference);

double standard_normal_cdf(double z);
double standard_normal_pdf(double z);
double chi_square_quantile(double dof, double p);

}  // namespace exclt
