#include "exclt/covariance_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

namespace exclt {

std::string_view to_string(CovarianceKind kind) {
  switch (kind) {
    case CovarianceKind::spherical: return "spherical";
    case CovarianceKind::exponential: return "exponential";
    case CovarianceKind::powered_exponential: return "powered_exponential";
    case CovarianceKind::white_noise: return "white_noise";
  }
  return "unknown";
}

CovarianceKind covariance_kind_from_string(std::string_view name) {
  if (name == "spherical") return CovarianceKind::spherical;
  if (name == "exponential") return CovarianceKind::exponential;
  if (name == "powered_exponential") return CovarianceKind::powered_exponential;
  if (name == "white_noise") return CovarianceKind::white_noise;
  throw std::invalid_argument("unknown covariance kind '" + std::string(name) + "'");
}

DecayReport decay_report(double alpha, int dimension) {
  if (dimension < 1) throw std::invalid_argument("decay_report: dimension must be >= 1");
  DecayReport r;
  r.alpha = alpha;
  r.dimension = dimension;
  r.threshold_a = 3.0 * dimension;
  r.threshold_b = static_cast<double>(dimension);
  r.satisfies_condition_a = alpha > r.threshold_a;
  r.satisfies_condition_b = alpha > r.threshold_b;
  return r;
}

CovarianceModel::CovarianceModel(CovarianceKind kind, double variance, double scale, double power,
                                 int dimension, double mean)
    : kind_(kind), variance_(variance), scale_(scale), power_(power), dimension_(dimension),
      mean_(mean) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("covariance model: variance must be positive and finite");
  }
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("covariance model: dimension must be 1, 2 or 3");
  }
  if (!std::isfinite(mean)) throw std::invalid_argument("covariance model: mean must be finite");
  if (kind != CovarianceKind::white_noise && (!(scale > 0.0) || !std::isfinite(scale))) {
    throw std::invalid_argument("covariance model: range/scale must be positive and finite");
  }
  if (kind == CovarianceKind::powered_exponential && !(power > 0.0 && power <= 2.0)) {
    throw std::invalid_argument("covariance model: power must lie in (0, 2]");
  }
}

CovarianceModel CovarianceModel::spherical(double variance, double range, int dimension,
                                           double mean) {
  return {CovarianceKind::spherical, variance, range, 1.0, dimension, mean};
}

CovarianceModel CovarianceModel::exponential(double variance, double scale, int dimension,
                                             double mean) {
  return {CovarianceKind::exponential, variance, scale, 1.0, dimension, mean};
}

CovarianceModel CovarianceModel::powered_exponential(double variance, double scale, double power,
                                                     int dimension, double mean) {
  return {CovarianceKind::powered_exponential, variance, scale, power, dimension, mean};
}

CovarianceModel CovarianceModel::white_noise(double variance, int dimension, double mean) {
  return {CovarianceKind::white_noise, variance, 0.0, 1.0, dimension, mean};
}

double CovarianceModel::stddev() const noexcept { return std::sqrt(variance_); }

double CovarianceModel::correlation_radial(double distance) const {
  const double v = std::abs(distance);
  switch (kind_) {
    case CovarianceKind::spherical: {
      if (v >= scale_) return 0.0;
      const double x = v / scale_;
      return 1.0 - 1.5 * x + 0.5 * x * x * x;
    }
    case CovarianceKind::exponential:
      return std::exp(-v / scale_);
    case CovarianceKind::powered_exponential:
      return std::exp(-std::pow(v / scale_, power_));
    case CovarianceKind::white_noise:
      return v == 0.0 ? 1.0 : 0.0;
  }
  return 0.0;
}

double CovarianceModel::evaluate_radial(double distance) const {
  return variance_ * correlation_radial(distance);
}

namespace {
double euclidean_norm(std::span<const double> lag) {
  double s = 0.0;
  for (double x : lag) s += x * x;
  return std::sqrt(s);
}
}  // namespace

double CovarianceModel::evaluate(std::span<const double> lag) const {
  return evaluate_radial(euclidean_norm(lag));
}

double CovarianceModel::correlation(std::span<const double> lag) const {
  return correlation_radial(euclidean_norm(lag));
}

double CovarianceModel::support_radius() const noexcept {
  switch (kind_) {
    case CovarianceKind::spherical: return scale_;
    case CovarianceKind::white_noise: return 0.0;
    default: return std::numeric_limits<double>::infinity();
  }
}

bool CovarianceModel::has_compact_support() const noexcept {
  return std::isfinite(support_radius());
}

double unit_sphere_area(int dimension) {
  const double d = dimension;
  return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

double CovarianceModel::tail_radius(double tol) const {
  if (has_compact_support()) return support_radius();
  if (!(tol > 0.0)) throw std::invalid_argument("tail_radius: tolerance must be positive");
  const double area = unit_sphere_area(dimension_);
  const int d = dimension_;
  // Radial tail integral area * int_R^inf v^{d-1} rho(v) dv. With
  // w = (v/b)^p it becomes area * b^d / p * Gamma(d/p, (R/b)^p).
  const double p = kind_ == CovarianceKind::exponential ? 1.0 : power_;
  auto tail = [&](double radius) {
    const double x = std::pow(radius / scale_, p);
    return area * std::pow(scale_, d) / p * boost::math::tgamma(d / p, x);
  };
  double hi = scale_;
  while (tail(hi) > tol) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 60 && hi - lo > 1e-6 * scale_; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (tail(mid) > tol) lo = mid; else hi = mid;
  }
  return hi;
}

std::string CovarianceModel::describe() const {
  std::ostringstream os;
  os << to_string(kind_) << "(variance=" << variance_;
  if (kind_ == CovarianceKind::spherical) os << ", range=" << scale_;
  if (kind_ == CovarianceKind::exponential || kind_ == CovarianceKind::powered_exponential) {
    os << ", scale=" << scale_;
  }
  if (kind_ == CovarianceKind::powered_exponential) os << ", power=" << power_;
  os << ", d=" << dimension_ << ", mean=" << mean_ << ")";
  return os.str();
}

double theta_coefficient(const CovarianceModel& model, double r, const QuadratureSpec& quad) {
  if (!(r > 0.0)) throw std::invalid_argument("theta_coefficient: r must be positive");
  quad.validate();
  if (model.kind() == CovarianceKind::white_noise) return 0.0;
  // |t|_2 >= |t|_inf, so nothing of a compact support survives beyond its radius.
  if (model.has_compact_support() && r >= model.support_radius()) return 0.0;

  const int d = model.dimension();
  const double outer = model.has_compact_support()
                           ? model.support_radius()
                           : std::max(r, model.tail_radius(0.01 * quad.abs_tol / model.variance()));
  const std::vector<double> radial{model.support_radius()};
  const std::span<const double> breaks =
      model.has_compact_support() ? std::span<const double>(radial) : std::span<const double>();

  // Per-axis pieces: 0 = [-outer, -r], 1 = [-r, r], 2 = [r, outer].
  const double piece_lo[3] = {-outer, -r, r};
  const double piece_hi[3] = {-r, r, outer};
  std::size_t boxes = 1;
  for (int k = 0; k < d; ++k) boxes *= 3;

  QuadratureSpec box_quad = quad;
  box_quad.abs_tol = quad.abs_tol / static_cast<double>(boxes);
  double total = 0.0;
  std::vector<double> lo(d), hi(d);
  for (std::size_t code = 0; code < boxes; ++code) {
    std::size_t c = code;
    bool all_middle = true;
    for (int k = 0; k < d; ++k) {
      const std::size_t piece = c % 3;
      c /= 3;
      if (piece != 1) all_middle = false;
      lo[k] = piece_lo[piece];
      hi[k] = piece_hi[piece];
    }
    if (all_middle) continue;
    const QuadResult res = integrate_box(
        [&model](std::span<const double> t) { return std::abs(model.evaluate(t)); }, lo, hi,
        box_quad, breaks);
    if (!res.converged) {
      std::ostringstream msg;
      msg << "theta_coefficient: quadrature did not converge for r=" << r << " on "
          << model.describe() << " (achieved error " << res.abs_error << ")";
      throw QuadratureError(msg.str(), res.abs_error);
    }
    total += res.value;
  }
  return 2.0 * total;
}

DecayReport check_decay(const CovarianceModel& model) {
  // Every supported family is compactly supported or decays faster than any power.
  return decay_report(std::numeric_limits<double>::infinity(), model.dimension());
}

}  // namespace exclt
