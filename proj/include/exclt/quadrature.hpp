#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace exclt {

/// How the outer (lag-space) integrals are truncated.
enum class CutoffPolicy {
  analytic_support,  ///< use the model's compact support when it has one
  tolerance_tail,    ///< truncate where the |rho|/4 envelope tail is below tolerance
};

struct QuadratureSpec {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_subdivisions = 2000;
  CutoffPolicy cutoff = CutoffPolicy::analytic_support;

  /// Throws std::invalid_argument unless both tolerances are positive and
  /// at least one subdivision is allowed.
  void validate() const;

  /// Same policy with tolerances scaled by `factor`, used for nested
  /// integrals that must be resolved more tightly than their parent.
  [[nodiscard]] QuadratureSpec tightened(double factor) const;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
  bool converged = false;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double achieved_error)
      : std::runtime_error(what), achieved_error_(achieved_error) {}
  [[nodiscard]] double achieved_error() const noexcept { return achieved_error_; }

 private:
  double achieved_error_;
};

using Integrand = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod quadrature on [lo, hi].
/// The interval is first split at every breakpoint strictly inside it; the
/// interval with the largest error estimate is bisected until
/// err <= max(abs_tol, rel_tol * |value|) or the subdivision budget runs out.
/// Never throws on non-convergence; check `converged`.
QuadResult integrate_adaptive(const Integrand& f, double lo, double hi,
                              const QuadratureSpec& spec,
                              std::span<const double> breakpoints = {});

/// As integrate_adaptive, but throws QuadratureError carrying the achieved
/// error estimate when the tolerance is not met.
double integrate_or_throw(const Integrand& f, double lo, double hi,
                          const QuadratureSpec& spec,
                          std::span<const double> breakpoints = {},
                          const char* context = "quadrature");

using PointIntegrand = std::function<double(std::span<const double>)>;

/// Nested adaptive quadrature of f over the box [lo, hi] (one coordinate per
/// level, innermost = last coordinate). Each level splits its interval at 0
/// and at +-sqrt(b^2 - s) for every radius b in `radial_breaks`, where s is
/// the squared norm of the coordinates already fixed by outer levels; this
/// keeps kinks of isotropic integrands (spherical support, origin cusp) on
/// panel edges. Inner levels are resolved ten times tighter than their parent.
QuadResult integrate_box(const PointIntegrand& f, std::span<const double> lo,
                         std::span<const double> hi, const QuadratureSpec& spec,
                         std::span<const double> radial_breaks = {});

struct GaussLegendreRule {
  std::vector<double> nodes;    // on [-1, 1], ascending
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule computed by Newton iteration on P_n.
GaussLegendreRule gauss_legendre(std::size_t n);

}  // namespace exclt
