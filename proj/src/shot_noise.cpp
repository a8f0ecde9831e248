#include "exclt/shot_noise.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "exclt/covariance_model.hpp"

namespace exclt {

double MarkDistribution::mean() const {
  switch (kind) {
    case Kind::constant: return p1;
    case Kind::exponential: return p1;
    case Kind::lognormal: return std::exp(p1 + 0.5 * p2 * p2);
  }
  return 0.0;
}

double MarkDistribution::second_moment() const {
  switch (kind) {
    case Kind::constant: return p1 * p1;
    case Kind::exponential: return 2.0 * p1 * p1;
    case Kind::lognormal: return std::exp(2.0 * p1 + 2.0 * p2 * p2);
  }
  return 0.0;
}

double MarkDistribution::sample(std::mt19937_64& rng) const {
  switch (kind) {
    case Kind::constant: return p1;
    case Kind::exponential: return std::exponential_distribution<double>(1.0 / p1)(rng);
    case Kind::lognormal: return std::lognormal_distribution<double>(p1, p2)(rng);
  }
  return 0.0;
}

std::string MarkDistribution::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::constant: os << "constant(" << p1 << ")"; break;
    case Kind::exponential: os << "exponential(mean=" << p1 << ")"; break;
    case Kind::lognormal: os << "lognormal(mu=" << p1 << ", sigma=" << p2 << ")"; break;
  }
  return os.str();
}

double ResponseFunction::operator()(double distance) const {
  const double v = std::abs(distance);
  if (kind == Kind::exp_decay) return amplitude * std::exp(-rate * v);
  return v <= 1.0 ? amplitude : amplitude * std::pow(v, -rate);
}

double ResponseFunction::tail_integral(int dimension, double radius, int power) const {
  const double d = dimension;
  const double area = unit_sphere_area(dimension);
  const double ak = std::pow(amplitude, power);
  const double bk = rate * power;
  radius = std::max(radius, 0.0);
  if (kind == Kind::exp_decay) {
    // int_R^inf v^{d-1} e^{-bk v} dv = Gamma(d, bk R) / bk^d
    return ak * area * boost::math::tgamma(d, bk * radius) / std::pow(bk, d);
  }
  if (bk <= d) return std::numeric_limits<double>::infinity();
  double inner = 0.0;
  double outer_from = radius;
  if (radius < 1.0) {
    inner = (1.0 - std::pow(radius, d)) / d;
    outer_from = 1.0;
  }
  return ak * area * (inner + std::pow(outer_from, d - bk) / (bk - d));
}

double ResponseFunction::power_integral(int dimension, int power) const {
  return tail_integral(dimension, 0.0, power);
}

std::string ResponseFunction::describe() const {
  std::ostringstream os;
  if (kind == Kind::exp_decay) {
    os << "exp_decay(a=" << amplitude << ", b=" << rate << ")";
  } else {
    os << "capped_power(a=" << amplitude << ", b=" << rate << ")";
  }
  return os.str();
}

ShotNoiseModel::ShotNoiseModel(double intensity, MarkDistribution marks, ResponseFunction response,
                               int dimension, double buffer_radius)
    : intensity_(intensity), marks_(marks), response_(response), dimension_(dimension),
      buffer_(buffer_radius) {
  if (!(intensity >= 0.0) || !std::isfinite(intensity)) {
    throw std::invalid_argument("shot noise: intensity must be non-negative and finite");
  }
  if (dimension < 1 || dimension > 3) {
    throw std::invalid_argument("shot noise: dimension must be 1, 2 or 3");
  }
  if (!(response.amplitude > 0.0) || !(response.rate > 0.0)) {
    throw std::invalid_argument("shot noise: response parameters a, b must be positive");
  }
  switch (marks.kind) {
    case MarkDistribution::Kind::constant:
      if (!(marks.p1 >= 0.0)) throw std::invalid_argument("shot noise: constant mark must be >= 0");
      break;
    case MarkDistribution::Kind::exponential:
      if (!(marks.p1 > 0.0)) throw std::invalid_argument("shot noise: exponential mark mean must be > 0");
      break;
    case MarkDistribution::Kind::lognormal:
      if (!std::isfinite(marks.p1) || !(marks.p2 >= 0.0)) {
        throw std::invalid_argument("shot noise: lognormal mark needs finite mu and sigma >= 0");
      }
      break;
  }
  if (!(buffer_radius >= 0.0)) throw std::invalid_argument("shot noise: buffer radius must be >= 0");
}

double ShotNoiseModel::campbell_mean() const {
  return intensity_ * marks_.mean() * response_.power_integral(dimension_, 1);
}

double ShotNoiseModel::campbell_variance() const {
  return intensity_ * marks_.second_moment() * response_.power_integral(dimension_, 2);
}

double ShotNoiseModel::truncation_error(double radius) const {
  return intensity_ * marks_.mean() * response_.tail_integral(dimension_, radius, 1);
}

double ShotNoiseModel::required_buffer(double tol) const {
  if (!(tol > 0.0)) throw std::invalid_argument("required_buffer: tolerance must be positive");
  if (intensity_ == 0.0 || marks_.mean() == 0.0) return 0.0;
  if (!std::isfinite(truncation_error(1e300))) {
    throw TruncationError("shot noise: response " + response_.describe() +
                              " is not integrable in d=" + std::to_string(dimension_) +
                              "; no finite buffer meets the truncation tolerance",
                          std::numeric_limits<double>::infinity());
  }
  double hi = 1.0;
  while (truncation_error(hi) > tol) {
    hi *= 2.0;
    if (hi > 1e12) {
      throw TruncationError("shot noise: required buffer exceeds 1e12", hi);
    }
  }
  double lo = 0.0;
  for (int i = 0; i < 80 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (truncation_error(mid) > tol) lo = mid; else hi = mid;
  }
  return hi;
}

double ShotNoiseModel::resolved_buffer(double tol) const {
  const double required = required_buffer(tol);
  if (buffer_ == 0.0) return required;
  if (buffer_ < required) {
    std::ostringstream msg;
    msg << "shot noise: buffer radius " << buffer_ << " leaves truncation error "
        << truncation_error(buffer_) << " > " << tol << "; required buffer " << required;
    throw TruncationError(msg.str(), required);
  }
  return buffer_;
}

std::string ShotNoiseModel::describe() const {
  std::ostringstream os;
  os << "shot_noise(lambda=" << intensity_ << ", marks=" << marks_.describe()
     << ", phi=" << response_.describe() << ", d=" << dimension_ << ")";
  return os.str();
}

GridField shot_noise_from_points(const ResponseFunction& response, const GridSpec& spec,
                                 const MarkedPoints& points, double cutoff, std::string model_tag,
                                 std::uint64_t seed) {
  const std::size_t d = static_cast<std::size_t>(spec.dimension());
  if (points.coords.size() != points.size() * d) {
    throw std::invalid_argument("shot_noise_from_points: coordinate count does not match dimension");
  }
  // Pad to three axes; unused axes have one lattice point at coordinate 0.
  std::array<std::size_t, 3> count{1, 1, 1};
  std::array<double, 3> origin{0.0, 0.0, 0.0};
  for (std::size_t k = 0; k < d; ++k) {
    count[k] = spec.counts()[k];
    origin[k] = spec.origin()[k];
  }
  const double h = spec.mesh();
  std::vector<double> values(spec.point_count(), 0.0);
  const double cutoff_sq = std::isfinite(cutoff) ? cutoff * cutoff : std::numeric_limits<double>::infinity();

  for (std::size_t p = 0; p < points.size(); ++p) {
    const double mark = points.marks[p];
    if (mark == 0.0) continue;
    std::array<double, 3> x{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < d; ++k) x[k] = points.coords[p * d + k];
    std::array<std::size_t, 3> first{0, 0, 0};
    std::array<std::size_t, 3> last{0, 0, 0};  // exclusive
    bool empty = false;
    for (std::size_t k = 0; k < 3; ++k) {
      if (k >= d || !std::isfinite(cutoff)) {
        first[k] = 0;
        last[k] = count[k];
        continue;
      }
      const double lo = std::ceil((x[k] - cutoff - origin[k]) / h);
      const double hi = std::floor((x[k] + cutoff - origin[k]) / h);
      const double clo = std::max(lo, 0.0);
      const double chi = std::min(hi, static_cast<double>(count[k]) - 1.0);
      if (chi < clo) {
        empty = true;
        break;
      }
      first[k] = static_cast<std::size_t>(clo);
      last[k] = static_cast<std::size_t>(chi) + 1;
    }
    if (empty) continue;
    for (std::size_t i = first[0]; i < last[0]; ++i) {
      const double d0 = origin[0] + static_cast<double>(i) * h - x[0];
      for (std::size_t j = first[1]; j < last[1]; ++j) {
        const double d1 = d > 1 ? origin[1] + static_cast<double>(j) * h - x[1] : 0.0;
        const std::size_t row = (i * count[1] + j) * count[2];
        for (std::size_t l = first[2]; l < last[2]; ++l) {
          const double d2 = d > 2 ? origin[2] + static_cast<double>(l) * h - x[2] : 0.0;
          const double r2 = d0 * d0 + d1 * d1 + d2 * d2;
          if (r2 > cutoff_sq) continue;
          values[row + l] += mark * response(std::sqrt(r2));
        }
      }
    }
  }
  return GridField(spec, std::move(values), std::move(model_tag), seed);
}

MarkedPoints sample_marked_points(const ShotNoiseModel& model, std::span<const double> lo,
                                  std::span<const double> hi, std::mt19937_64& rng) {
  const std::size_t d = lo.size();
  double volume = 1.0;
  for (std::size_t k = 0; k < d; ++k) volume *= hi[k] - lo[k];
  MarkedPoints pts;
  const double mean_count = model.intensity() * volume;
  if (!(mean_count > 0.0)) return pts;
  const auto n = std::poisson_distribution<std::uint64_t>(mean_count)(rng);
  pts.coords.resize(n * d);
  pts.marks.resize(n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t k = 0; k < d; ++k) {
      pts.coords[p * d + k] = lo[k] + (hi[k] - lo[k]) * unit(rng);
    }
    pts.marks[p] = model.marks().sample(rng);
  }
  return pts;
}

GridField simulate_shot_noise(const ShotNoiseModel& model, const GridSpec& spec, std::uint64_t seed,
                              double truncation_tol) {
  if (model.dimension() != spec.dimension()) {
    throw std::invalid_argument("shot noise: model dimension does not match grid");
  }
  const double buffer = model.resolved_buffer(truncation_tol);
  const std::size_t d = static_cast<std::size_t>(spec.dimension());
  std::vector<double> lo(d), hi(d);
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = spec.origin()[k] - buffer;
    hi[k] = spec.origin()[k] + static_cast<double>(spec.counts()[k] - 1) * spec.mesh() + buffer;
  }
  std::mt19937_64 rng(seed);
  const MarkedPoints pts = sample_marked_points(model, lo, hi, rng);
  return shot_noise_from_points(model.response(), spec, pts, buffer, model.describe(), seed);
}

std::vector<double> shot_noise_at_points(const ShotNoiseModel& model,
                                         std::span<const double> queries, std::mt19937_64& rng,
                                         double truncation_tol) {
  const std::size_t d = static_cast<std::size_t>(model.dimension());
  if (queries.size() % d != 0 || queries.empty()) {
    throw std::invalid_argument("shot_noise_at_points: query coordinates must be a multiple of d");
  }
  const std::size_t nq = queries.size() / d;
  const double buffer = model.resolved_buffer(truncation_tol);
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t q = 0; q < nq; ++q) {
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], queries[q * d + k] - buffer);
      hi[k] = std::max(hi[k], queries[q * d + k] + buffer);
    }
  }
  const MarkedPoints pts = sample_marked_points(model, lo, hi, rng);
  std::vector<double> out(nq, 0.0);
  const double buffer_sq = buffer * buffer;
  for (std::size_t q = 0; q < nq; ++q) {
    double sum = 0.0;
    for (std::size_t p = 0; p < pts.size(); ++p) {
      double r2 = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = queries[q * d + k] - pts.coords[p * d + k];
        r2 += diff * diff;
      }
      if (r2 <= buffer_sq) sum += pts.marks[p] * model.response()(std::sqrt(r2));
    }
    out[q] = sum;
  }
  return out;
}

bool check_bounded_density(const ShotNoiseModel& model, const QuadratureSpec& quad,
                           double convergence_tol, int max_levels) {
  quad.validate();
  if (model.marks().kind != MarkDistribution::Kind::constant) {
    throw std::domain_error(
        "check_bounded_density: only constant marks have a closed-form characteristic function; "
        "declare the bounded-density assumption manually for " + model.marks().describe());
  }
  const double c = model.marks().p1;
  if (model.intensity() == 0.0 || c == 0.0) return false;  // X(0) == 0, no density
  const ResponseFunction& phi = model.response();
  const int d = model.dimension();
  if (!std::isfinite(phi.power_integral(d, 2))) {
    throw std::domain_error("check_bounded_density: response is not square integrable");
  }
  const double area = unit_sphere_area(d);
  const double lambda = model.intensity();

  QuadratureSpec inner_quad = quad;
  inner_quad.abs_tol = std::min(quad.abs_tol, 1e-10);
  inner_quad.rel_tol = std::min(quad.rel_tol, 1e-8);
  inner_quad.max_subdivisions = std::max<std::size_t>(quad.max_subdivisions, 20000);

  // |E exp(i s X(0))| = exp(lambda * area * int_0^inf v^{d-1} (cos(s c phi(v)) - 1) dv).
  auto modulus = [&](double s) {
    if (s == 0.0) return 1.0;
    // Beyond v_max the integrand is bounded by (s c)^2 phi^2 / 2, so the
    // neglected part is below 1e-12 in the exponent.
    double v_max = 1.0;
    while ((s * c) * (s * c) * 0.5 * phi.tail_integral(d, v_max, 2) / area > 1e-12) v_max *= 2.0;
    std::vector<double> breaks;
    if (phi.kind == ResponseFunction::Kind::capped_power) breaks.push_back(1.0);
    const QuadResult r = integrate_adaptive(
        [&](double v) { return std::pow(v, d - 1) * (std::cos(s * c * phi(v)) - 1.0); }, 0.0,
        v_max, inner_quad, breaks);
    return std::exp(lambda * area * r.value);
  };

  QuadratureSpec outer_quad = inner_quad;
  outer_quad.rel_tol = std::max(1e-8, 0.01 * convergence_tol);
  double level = 1.0;
  double total = integrate_adaptive(modulus, 0.0, level, outer_quad).value;
  for (int k = 0; k < max_levels; ++k) {
    const double piece = integrate_adaptive(modulus, level, 2.0 * level, outer_quad).value;
    level *= 2.0;
    const double next = total + piece;
    if (std::abs(piece) <= convergence_tol * std::abs(next)) return true;
    total = next;
  }
  return false;
}

}  // namespace exclt
