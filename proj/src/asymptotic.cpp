#include "exclt/asymptotic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace exclt {

GaussianMarginal::GaussianMarginal(double mean_, double stddev_) : mean(mean_), stddev(stddev_) {
  if (!std::isfinite(mean_)) throw std::invalid_argument("gaussian marginal: mean must be finite");
  if (!(stddev_ > 0.0) || !std::isfinite(stddev_)) {
    throw std::invalid_argument("gaussian marginal: standard deviation must be positive");
  }
}

CovMatrix::CovMatrix(std::size_t order, std::vector<double> entries, Provenance provenance)
    : order_(order), entries_(std::move(entries)), provenance_(provenance) {
  if (order_ == 0) throw std::invalid_argument("covariance matrix: order must be >= 1");
  if (entries_.size() != order_ * order_) {
    throw std::invalid_argument("covariance matrix: expected " + std::to_string(order_ * order_) +
                                " entries, got " + std::to_string(entries_.size()));
  }
  double scale = 0.0;
  for (double x : entries_) {
    if (!std::isfinite(x)) throw std::invalid_argument("covariance matrix: entries must be finite");
    scale = std::max(scale, std::abs(x));
  }
  for (std::size_t l = 0; l < order_; ++l) {
    for (std::size_t m = l + 1; m < order_; ++m) {
      const double a = entries_[l * order_ + m];
      const double b = entries_[m * order_ + l];
      if (std::abs(a - b) > 1e-12 * scale) {
        std::ostringstream msg;
        msg << "covariance matrix: not symmetric at (" << l << ", " << m << "): " << a << " vs " << b;
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

CovMatrix CovMatrix::from_eigen(const Eigen::MatrixXd& m, Provenance provenance) {
  if (m.rows() != m.cols()) throw std::invalid_argument("covariance matrix: must be square");
  const auto r = static_cast<std::size_t>(m.rows());
  std::vector<double> e(r * r);
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t k = 0; k < r; ++k) {
      e[l * r + k] = m(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(k));
    }
  }
  return {r, std::move(e), provenance};
}

CovMatrix CovMatrix::identity(std::size_t order, Provenance provenance) {
  std::vector<double> e(order * order, 0.0);
  for (std::size_t k = 0; k < order; ++k) e[k * order + k] = 1.0;
  return {order, std::move(e), provenance};
}

Eigen::MatrixXd CovMatrix::to_eigen() const {
  const auto r = static_cast<Eigen::Index>(order_);
  Eigen::MatrixXd m(r, r);
  for (Eigen::Index l = 0; l < r; ++l) {
    for (Eigen::Index k = 0; k < r; ++k) m(l, k) = entries_[static_cast<std::size_t>(l * r + k)];
  }
  return m;
}

double CovMatrix::trace() const {
  double t = 0.0;
  for (std::size_t k = 0; k < order_; ++k) t += entries_[k * order_ + k];
  return t;
}

double CovMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

bool CovMatrix::is_psd(double rel_tol) const {
  return min_eigenvalue() >= -rel_tol * std::abs(trace());
}

double gaussian_tail(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

double indicator_kernel_integral(double z, double w, double rho, const QuadratureSpec& quad) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw std::invalid_argument("indicator kernel: correlation must lie in [-1, 1]");
  }
  if (rho == 0.0) return 0.0;
  // z^2 - 2 r z w + w^2 = (z -+ w)^2 +- 2 z w (1 -+ r); dividing by
  // 2(1 - r^2) separates a term that stays finite as |r| -> 1.
  auto integrand = [z, w](double s) {
    const double sn = std::sin(s);
    const double c2 = std::max(0.0, 1.0 - sn * sn);
    double exponent;
    if (s >= 0.0) {
      const double diff = z - w;
      const double sing = diff == 0.0 ? 0.0 : diff * diff / (2.0 * c2);
      exponent = sing + z * w / (1.0 + sn);
    } else {
      const double sum = z + w;
      const double sing = sum == 0.0 ? 0.0 : sum * sum / (2.0 * c2);
      exponent = sing - z * w / (1.0 - sn);
    }
    return std::exp(-exponent);
  };
  const double upper = std::asin(rho);
  const QuadResult r = integrate_adaptive(integrand, 0.0, upper, quad);
  if (!r.converged) {
    throw QuadratureError("indicator kernel: inner integral did not converge", r.abs_error);
  }
  return r.value;
}

double gaussian_indicator_cov(const GaussianMarginal& m, double u, double v, double rho,
                              const QuadratureSpec& quad) {
  if (!(rho >= -1.0 && rho <= 1.0)) {
    throw std::invalid_argument("gaussian_indicator_cov: correlation must lie in [-1, 1]");
  }
  const double z = m.standardize(u);
  const double w = m.standardize(v);
  if (rho == 1.0) {
    return gaussian_tail(std::max(z, w)) - gaussian_tail(z) * gaussian_tail(w);
  }
  if (rho == -1.0) {
    // V = -U in standard units: P(z <= Z <= -w).
    const double joint = std::max(0.0, gaussian_tail(z) + gaussian_tail(w) - 1.0);
    return joint - gaussian_tail(z) * gaussian_tail(w);
  }
  return indicator_kernel_integral(z, w, rho, quad) / (2.0 * std::numbers::pi);
}

double qa_indicator_bound(double density_bound, double cov) {
  if (!(density_bound > 0.0)) throw std::invalid_argument("qa_indicator_bound: density bound must be > 0");
  return 3.0 * std::cbrt(4.0) * std::cbrt(density_bound * density_bound) * std::cbrt(std::abs(cov));
}

double lag_cutoff_radius(const CovarianceModel& model, const QuadratureSpec& quad) {
  if (model.has_compact_support()) return model.support_radius();
  // Tail of the |rho|/4 envelope below a tenth of the absolute tolerance.
  return model.tail_radius(0.4 * quad.abs_tol);
}

namespace {

QuadratureSpec inner_kernel_spec() {
  QuadratureSpec q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-13;
  q.max_subdivisions = 200;
  return q;
}

}  // namespace

double sigma_entry_gaussian(const GaussianMarginal& m, const CovarianceModel& model, double u_l,
                            double u_m, const QuadratureSpec& quad, LagIntegration route) {
  quad.validate();
  const double z = m.standardize(u_l);
  const double w = m.standardize(u_m);
  const double cutoff = lag_cutoff_radius(model, quad);
  if (cutoff == 0.0) return 0.0;  // white noise: correlation vanishes off a null set
  const QuadratureSpec inner = inner_kernel_spec();
  const int d = model.dimension();
  const double two_pi = 2.0 * std::numbers::pi;

  if (route == LagIntegration::radial) {
    auto f = [&](double v) {
      return std::pow(v, d - 1) * indicator_kernel_integral(z, w, model.correlation_radial(v), inner);
    };
    const QuadResult r = integrate_adaptive(f, 0.0, cutoff, quad);
    if (!r.converged) {
      throw QuadratureError("sigma (radial): quadrature did not converge, achieved error " +
                                std::to_string(r.abs_error),
                            r.abs_error);
    }
    return unit_sphere_area(d) / two_pi * r.value;
  }

  // Cartesian: integrand depends on t only through |t|, so integrate the
  // positive orthant and multiply by 2^d.
  const std::vector<double> lo(static_cast<std::size_t>(d), 0.0);
  const std::vector<double> hi(static_cast<std::size_t>(d), cutoff);
  const std::vector<double> breaks{cutoff};
  QuadratureSpec box = quad;
  box.abs_tol = quad.abs_tol / std::pow(2.0, d);
  const QuadResult r = integrate_box(
      [&](std::span<const double> t) {
        return indicator_kernel_integral(z, w, model.correlation(t), inner);
      },
      lo, hi, box, breaks);
  if (!r.converged) {
    throw QuadratureError("sigma (cartesian): quadrature did not converge, achieved error " +
                              std::to_string(r.abs_error),
                          r.abs_error);
  }
  return std::pow(2.0, d) / two_pi * r.value;
}

double sigma2_gaussian(const GaussianMarginal& m, const CovarianceModel& model, double u,
                       const QuadratureSpec& quad, LagIntegration route) {
  return sigma_entry_gaussian(m, model, u, u, quad, route);
}

double sigma2_at_mean(const CovarianceModel& model, const QuadratureSpec& quad) {
  quad.validate();
  const double cutoff = lag_cutoff_radius(model, quad);
  if (cutoff == 0.0) return 0.0;
  const int d = model.dimension();
  auto f = [&](double v) { return std::pow(v, d - 1) * std::asin(model.correlation_radial(v)); };
  const double integral = integrate_or_throw(f, 0.0, cutoff, quad, {}, "sigma2 at mean");
  return unit_sphere_area(d) / (2.0 * std::numbers::pi) * integral;
}

CovMatrix sigma_matrix_gaussian(const GaussianMarginal& m, const CovarianceModel& model,
                                const ThresholdVector& u, const QuadratureSpec& quad,
                                LagIntegration route) {
  const std::size_t r = u.size();
  std::vector<double> e(r * r, 0.0);
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t k = l; k < r; ++k) {
      const double s = sigma_entry_gaussian(m, model, u[l], u[k], quad, route);
      e[l * r + k] = s;
      e[k * r + l] = s;
    }
  }
  CovMatrix out(r, std::move(e), Provenance::theoretical);
  if (!out.is_psd(1e-8)) {
    std::ostringstream msg;
    msg << "sigma matrix is not positive semidefinite (min eigenvalue " << out.min_eigenvalue()
        << "); quadrature tolerance too loose";
    throw QuadratureError(msg.str(), out.min_eigenvalue());
  }
  return out;
}

CovMatrix inv_sqrt(const CovMatrix& matrix, double floor_rel) {
  const Eigen::MatrixXd a = matrix.to_eigen();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw DegenerateMatrixError("inv_sqrt: eigen-decomposition failed", 0.0);
  }
  const Eigen::VectorXd& lambda = solver.eigenvalues();
  const double floor = floor_rel * std::abs(matrix.trace());
  const double smallest = lambda.minCoeff();
  if (!(smallest > floor)) {
    std::ostringstream msg;
    msg << "degenerate covariance matrix: eigenvalue " << smallest << " <= floor " << floor;
    throw DegenerateMatrixError(msg.str(), smallest);
  }
  const Eigen::MatrixXd& v = solver.eigenvectors();
  Eigen::MatrixXd out = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
  out = 0.5 * (out + out.transpose()).eval();
  return CovMatrix::from_eigen(out, matrix.provenance());
}

}  // namespace exclt
