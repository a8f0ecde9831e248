#include "exclt/sigma_generic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

namespace exclt {

GaussianIndicatorEvaluator::GaussianIndicatorEvaluator(GaussianMarginal marginal, CovarianceModel model,
                                                       ThresholdVector u, QuadratureSpec inner)
    : marginal_(marginal), model_(std::move(model)), u_(std::move(u)), inner_(inner) {
  inner_.validate();
}

double GaussianIndicatorEvaluator::cutoff_radius(const QuadratureSpec& quad) const {
  return lag_cutoff_radius(model_, quad);
}

std::vector<double> GaussianIndicatorEvaluator::breakpoints() const {
  if (model_.has_compact_support()) return {model_.support_radius()};
  return {};
}

CovEstimate GaussianIndicatorEvaluator::evaluate(std::size_t l, std::size_t m,
                                                 std::span<const double> lag) const {
  const double rho = model_.correlation(lag);
  return {gaussian_indicator_cov(marginal_, u_[l], u_[m], rho, inner_), 0.0};
}

ShotNoiseIndicatorEvaluator::ShotNoiseIndicatorEvaluator(ShotNoiseModel model, ThresholdVector u,
                                                         std::size_t samples_per_lag,
                                                         std::uint64_t seed, double cutoff_radius)
    : model_(std::move(model)), u_(std::move(u)), samples_(samples_per_lag), seed_(seed),
      cutoff_(cutoff_radius) {
  if (samples_ < 2) throw std::invalid_argument("shot-noise evaluator: need at least 2 samples per lag");
  if (cutoff_ < 0.0 || !std::isfinite(cutoff_)) {
    throw std::invalid_argument("shot-noise evaluator: cutoff radius must be finite and >= 0");
  }
}

double ShotNoiseIndicatorEvaluator::cutoff_radius(const QuadratureSpec&) const {
  if (cutoff_ > 0.0) return cutoff_;
  // Two points further apart than twice the radius holding all but 1e-3 of
  // the response mass share almost no shots.
  return 2.0 * model_.required_buffer(1e-3);
}

CovEstimate ShotNoiseIndicatorEvaluator::evaluate(std::size_t l, std::size_t m,
                                                  std::span<const double> lag) const {
  const auto d = static_cast<std::size_t>(model_.dimension());
  double norm2 = 0.0;
  for (double x : lag) norm2 += x * x;
  // Realizations depend on the lag only through its length, so (l, m) and
  // (m, l) at the same lag reuse the same draws.
  std::mt19937_64 rng(seed_ ^ mix64(std::bit_cast<std::uint64_t>(std::sqrt(norm2))));

  std::vector<double> queries(3 * d, 0.0);
  for (std::size_t k = 0; k < d; ++k) {
    queries[k] = -lag[k];
    queries[2 * d + k] = lag[k];
  }
  const double ul = u_[l];
  const double um = u_[m];
  const auto n = static_cast<double>(samples_);
  std::vector<double> prod(samples_), bl(samples_), bm(samples_);
  for (std::size_t i = 0; i < samples_; ++i) {
    const std::vector<double> x = shot_noise_at_points(model_, queries, rng);
    const double il[3] = {x[0] >= ul ? 1.0 : 0.0, x[1] >= ul ? 1.0 : 0.0, x[2] >= ul ? 1.0 : 0.0};
    const double im[3] = {x[0] >= um ? 1.0 : 0.0, x[1] >= um ? 1.0 : 0.0, x[2] >= um ? 1.0 : 0.0};
    prod[i] = 0.5 * (il[1] * im[2] + il[0] * im[1]);
    bl[i] = (il[0] + il[1] + il[2]) / 3.0;
    bm[i] = (im[0] + im[1] + im[2]) / 3.0;
  }
  double mp = 0.0, ml = 0.0, mm = 0.0;
  for (std::size_t i = 0; i < samples_; ++i) {
    mp += prod[i];
    ml += bl[i];
    mm += bm[i];
  }
  mp /= n;
  ml /= n;
  mm /= n;
  // Delta-method influence values of mean(prod) - mean(bl) * mean(bm).
  double mean_inf = 0.0;
  std::vector<double> inf(samples_);
  for (std::size_t i = 0; i < samples_; ++i) {
    inf[i] = prod[i] - mm * bl[i] - ml * bm[i];
    mean_inf += inf[i];
  }
  mean_inf /= n;
  double ss = 0.0;
  for (double v : inf) ss += (v - mean_inf) * (v - mean_inf);
  return {mp - ml * mm, std::sqrt(ss / (n - 1.0) / n)};
}

namespace {

std::vector<double> radial_breaks_within(const IndicatorCovEvaluator& ev, double cutoff) {
  std::vector<double> out;
  for (double b : ev.breakpoints()) {
    if (b > 0.0 && b < cutoff) out.push_back(b);
  }
  return out;
}

double deterministic_entry(const IndicatorCovEvaluator& ev, std::size_t l, std::size_t m,
                           double cutoff, const QuadratureSpec& quad, LagIntegration route) {
  const int d = ev.dimension();
  const auto du = static_cast<std::size_t>(d);
  const std::vector<double> breaks = radial_breaks_within(ev, cutoff);

  if (route == LagIntegration::radial) {
    if (!ev.isotropic()) {
      throw std::invalid_argument("sigma_matrix_generic: radial route needs an isotropic evaluator");
    }
    std::vector<double> lag(du, 0.0);
    auto f = [&](double v) {
      lag[0] = v;
      return std::pow(v, d - 1) * ev.evaluate(l, m, lag).value;
    };
    const QuadResult r = integrate_adaptive(f, 0.0, cutoff, quad, breaks);
    if (!r.converged) {
      throw QuadratureError("sigma_matrix_generic (radial): achieved error " +
                                std::to_string(r.abs_error),
                            r.abs_error);
    }
    // |S^{d-1}| is 2 for d = 1, matching the two half-lines.
    return unit_sphere_area(d) * r.value;
  }

  std::vector<double> box_breaks = breaks;
  box_breaks.push_back(cutoff);
  QuadratureSpec box = quad;
  PointIntegrand f = [&](std::span<const double> t) { return ev.evaluate(l, m, t).value; };
  if (ev.isotropic()) {
    box.abs_tol = quad.abs_tol / std::pow(2.0, d);
    const std::vector<double> lo(du, 0.0), hi(du, cutoff);
    const QuadResult r = integrate_box(f, lo, hi, box, box_breaks);
    if (!r.converged) {
      throw QuadratureError("sigma_matrix_generic (cartesian): achieved error " +
                                std::to_string(r.abs_error),
                            r.abs_error);
    }
    return std::pow(2.0, d) * r.value;
  }
  const std::vector<double> lo(du, -cutoff), hi(du, cutoff);
  const QuadResult r = integrate_box(f, lo, hi, box, box_breaks);
  if (!r.converged) {
    throw QuadratureError("sigma_matrix_generic (cartesian): achieved error " +
                              std::to_string(r.abs_error),
                          r.abs_error);
  }
  return r.value;
}

struct StochasticEntry {
  double value;
  double std_error;
};

StochasticEntry stochastic_entry(const IndicatorCovEvaluator& ev, std::size_t l, std::size_t m,
                                 double cutoff, const GaussLegendreRule& rule) {
  if (!ev.isotropic()) {
    throw std::invalid_argument("sigma_matrix_generic: Monte Carlo evaluators must be isotropic");
  }
  const int d = ev.dimension();
  const double area = unit_sphere_area(d);
  std::vector<double> lag(static_cast<std::size_t>(d), 0.0);
  double sum = 0.0, var = 0.0;
  for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
    const double v = 0.5 * cutoff * (rule.nodes[k] + 1.0);
    const double w = 0.5 * cutoff * rule.weights[k] * area * std::pow(v, d - 1);
    lag[0] = v;
    const CovEstimate c = ev.evaluate(l, m, lag);
    sum += w * c.value;
    var += w * w * c.std_error * c.std_error;
  }
  return {sum, std::sqrt(var)};
}

}  // namespace

GenericSigma sigma_matrix_generic(const IndicatorCovEvaluator& evaluator, const QuadratureSpec& quad,
                                  const GenericSigmaOptions& options) {
  quad.validate();
  const std::size_t r = evaluator.order();
  if (r == 0) throw std::invalid_argument("sigma_matrix_generic: evaluator has order 0");
  const double cutoff = evaluator.cutoff_radius(quad);
  std::vector<double> e(r * r, 0.0), se(r * r, 0.0);
  if (cutoff == 0.0) {
    return {CovMatrix(r, std::move(e), Provenance::theoretical), std::move(se)};
  }

  if (!evaluator.stochastic()) {
    for (std::size_t l = 0; l < r; ++l) {
      for (std::size_t m = l; m < r; ++m) {
        double v = deterministic_entry(evaluator, l, m, cutoff, quad, options.route);
        if (m != l) v = 0.5 * (v + deterministic_entry(evaluator, m, l, cutoff, quad, options.route));
        e[l * r + m] = v;
        e[m * r + l] = v;
      }
    }
    return {CovMatrix(r, std::move(e), Provenance::theoretical), std::move(se)};
  }

  if (options.stochastic_nodes == 0) {
    throw std::invalid_argument("sigma_matrix_generic: need at least one quadrature node");
  }
  const GaussLegendreRule rule = gauss_legendre(options.stochastic_nodes);
  double worst = 0.0;
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t m = l; m < r; ++m) {
      StochasticEntry a = stochastic_entry(evaluator, l, m, cutoff, rule);
      if (m != l) {
        const StochasticEntry b = stochastic_entry(evaluator, m, l, cutoff, rule);
        // The two estimates share draws; bound the averaged error by the mean.
        a = {0.5 * (a.value + b.value), 0.5 * (a.std_error + b.std_error)};
      }
      e[l * r + m] = e[m * r + l] = a.value;
      se[l * r + m] = se[m * r + l] = a.std_error;
      worst = std::max(worst, a.std_error);
    }
  }
  if (worst > options.max_std_error) {
    std::size_t samples = 0;
    if (const auto* sn = dynamic_cast<const ShotNoiseIndicatorEvaluator*>(&evaluator)) {
      samples = sn->samples_per_lag();
    }
    const double ratio = worst / options.max_std_error;
    const auto required = static_cast<std::size_t>(
        std::ceil(static_cast<double>(std::max<std::size_t>(samples, 1)) * ratio * ratio));
    std::ostringstream msg;
    msg << "sigma_matrix_generic: Monte Carlo standard error " << worst << " exceeds "
        << options.max_std_error << "; about " << required << " samples per lag are required";
    throw MonteCarloPrecisionError(msg.str(), required);
  }
  return {CovMatrix(r, std::move(e), Provenance::estimated), std::move(se)};
}

}  // namespace exclt
