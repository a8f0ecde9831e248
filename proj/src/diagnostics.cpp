#include "exclt/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <boost/math/distributions/chi_squared.hpp>

namespace exclt {

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double standard_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double chi_square_quantile(double dof, double p) {
  return boost::math::quantile(boost::math::chi_squared(dof), p);
}

double kolmogorov_survival(double x) {
  if (x <= 0.0) return 1.0;
  if (x < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_standard_normal(std::span<const double> sample) {
  if (sample.empty()) throw std::invalid_argument("ks test: empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const auto n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = standard_normal_cdf(x[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, hi - f, f - lo});
  }
  const double root = std::sqrt(n);
  return {d, kolmogorov_survival((root + 0.12 + 0.11 / root) * d)};
}

double sample_quantile(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("sample_quantile: empty sample");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

NormalityDiagnostics normality_diagnostics(std::span<const double> vectors, std::size_t order) {
  if (order == 0) throw std::invalid_argument("normality diagnostics: order must be >= 1");
  if (vectors.size() % order != 0) {
    throw std::invalid_argument("normality diagnostics: data length is not a multiple of the order");
  }
  const std::size_t n = vectors.size() / order;
  if (n < 20) {
    throw std::invalid_argument("normality diagnostics: need at least 20 vectors, got " +
                                std::to_string(n));
  }
  NormalityDiagnostics out{order, n, {}, {}};
  std::vector<double> column(n);
  for (std::size_t k = 0; k < order; ++k) {
    for (std::size_t i = 0; i < n; ++i) column[i] = vectors[i * order + k];
    out.ks.push_back(ks_standard_normal(column));
  }
  std::vector<double> norms(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < order; ++k) norms[i] += vectors[i * order + k] * vectors[i * order + k];
  }
  std::sort(norms.begin(), norms.end());
  for (int dec = 1; dec <= 9; ++dec) {
    const double p = dec / 10.0;
    out.qq.push_back({p, sample_quantile(norms, p), chi_square_quantile(static_cast<double>(order), p)});
  }
  return out;
}

std::vector<std::optional<double>> mean_error_matrix(std::span<const CovMatrix> estimates,
                                                     const CovMatrix& reference) {
  if (estimates.empty()) throw std::invalid_argument("mean_error_matrix: no estimates");
  const std::size_t r = reference.order();
  std::vector<double> mean(r * r, 0.0);
  for (const CovMatrix& e : estimates) {
    if (e.order() != r) throw std::invalid_argument("mean_error_matrix: order mismatch");
    for (std::size_t i = 0; i < r * r; ++i) mean[i] += e.entries()[i];
  }
  std::vector<std::optional<double>> out(r * r);
  const auto count = static_cast<double>(estimates.size());
  for (std::size_t i = 0; i < r * r; ++i) {
    const double ref = reference.entries()[i];
    if (ref == 0.0) continue;
    out[i] = 100.0 * (mean[i] / count - ref) / ref;
  }
  return out;
}

}  // namespace exclt
