#include "exclt/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

namespace exclt {

void QuadratureSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (max_subdivisions < 1) {
    throw std::invalid_argument("quadrature max_subdivisions must be >= 1");
  }
}

QuadratureSpec QuadratureSpec::tightened(double factor) const {
  QuadratureSpec out = *this;
  out.abs_tol *= factor;
  out.rel_tol *= factor;
  return out;
}

namespace {

// QUADPACK qk21 abscissae and weights.
constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600109544354, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// 10-point Gauss weights for kXgk[1], kXgk[3], ..., kXgk[9].
constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment gauss_kronrod21(const Integrand& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double f_center = f(center);
  double kronrod = f_center * kWgk[10];
  double gauss = 0.0;
  double abs_sum = std::abs(kronrod);
  std::array<double, 10> f_lo{};
  std::array<double, 10> f_hi{};
  for (std::size_t j = 0; j < 10; ++j) {
    const double dx = half * kXgk[j];
    f_lo[j] = f(center - dx);
    f_hi[j] = f(center + dx);
    const double pair = f_lo[j] + f_hi[j];
    kronrod += kWgk[j] * pair;
    abs_sum += kWgk[j] * (std::abs(f_lo[j]) + std::abs(f_hi[j]));
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kWgk[10] * std::abs(f_center - mean);
  for (std::size_t j = 0; j < 10; ++j) {
    asc += kWgk[j] * (std::abs(f_lo[j] - mean) + std::abs(f_hi[j] - mean));
  }
  const double result = kronrod * half;
  const double res_abs = abs_sum * std::abs(half);
  const double res_asc = asc * std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (res_asc != 0.0 && err != 0.0) {
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * res_abs, err);
  }
  return {lo, hi, result, err};
}

}  // namespace

QuadResult integrate_adaptive(const Integrand& f, double lo, double hi,
                              const QuadratureSpec& spec,
                              std::span<const double> breakpoints) {
  spec.validate();
  QuadResult out;
  if (lo == hi) {
    out.converged = true;
    return out;
  }
  double sign = 1.0;
  if (hi < lo) {
    std::swap(lo, hi);
    sign = -1.0;
  }

  std::vector<double> cuts{lo};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Segment> heap;
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Segment s = gauss_kronrod21(f, cuts[i], cuts[i + 1]);
    out.evaluations += 21;
    total += s.value;
    total_err += s.error;
    heap.push(s);
  }

  auto target = [&] { return std::max(spec.abs_tol, spec.rel_tol * std::abs(total)); };
  std::size_t splits = 0;
  while (total_err > target() && splits < spec.max_subdivisions) {
    const Segment worst = heap.top();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (!(mid > worst.lo && mid < worst.hi)) break;  // interval exhausted at machine precision
    heap.pop();
    Segment left = gauss_kronrod21(f, worst.lo, mid);
    Segment right = gauss_kronrod21(f, mid, worst.hi);
    out.evaluations += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++splits;
  }

  // Re-sum to shed accumulated cancellation from the incremental updates.
  total = 0.0;
  total_err = 0.0;
  out.intervals = heap.size();
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = sign * total;
  out.abs_error = total_err;
  out.converged = total_err <= std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
  return out;
}

double integrate_or_throw(const Integrand& f, double lo, double hi,
                          const QuadratureSpec& spec,
                          std::span<const double> breakpoints, const char* context) {
  const QuadResult r = integrate_adaptive(f, lo, hi, spec, breakpoints);
  if (!r.converged) {
    std::ostringstream msg;
    msg << context << ": quadrature did not converge on [" << lo << ", " << hi
        << "], achieved error " << r.abs_error << " after " << r.intervals << " intervals";
    throw QuadratureError(msg.str(), r.abs_error);
  }
  return r.value;
}

namespace {

struct BoxIntegrator {
  const PointIntegrand& f;
  std::span<const double> lo;
  std::span<const double> hi;
  std::span<const double> radial_breaks;
  std::vector<double> point;
  std::size_t evaluations = 0;
  bool all_converged = true;

  QuadResult level(std::size_t axis, const QuadratureSpec& spec, double fixed_sq) {
    const std::size_t dim = lo.size();
    std::vector<double> breaks{0.0};
    for (double b : radial_breaks) {
      const double rem = b * b - fixed_sq;
      if (rem > 0.0) {
        breaks.push_back(std::sqrt(rem));
        breaks.push_back(-std::sqrt(rem));
      }
    }
    const double width = std::max(hi[axis] - lo[axis], 1e-300);
    QuadratureSpec inner = spec.tightened(0.1);
    inner.abs_tol = 0.1 * spec.abs_tol / width;
    auto g = [&](double x) {
      point[axis] = x;
      if (axis + 1 == dim) {
        ++evaluations;
        return f(point);
      }
      const QuadResult r = level(axis + 1, inner, fixed_sq + x * x);
      return r.value;
    };
    QuadResult r = integrate_adaptive(g, lo[axis], hi[axis], spec, breaks);
    if (!r.converged) all_converged = false;
    return r;
  }
};

}  // namespace

QuadResult integrate_box(const PointIntegrand& f, std::span<const double> lo,
                         std::span<const double> hi, const QuadratureSpec& spec,
                         std::span<const double> radial_breaks) {
  if (lo.size() != hi.size() || lo.empty()) {
    throw std::invalid_argument("integrate_box: bounds must be non-empty and of equal length");
  }
  BoxIntegrator integrator{f, lo, hi, radial_breaks, std::vector<double>(lo.size(), 0.0)};
  QuadResult r = integrator.level(0, spec, 0.0);
  r.evaluations = integrator.evaluations;
  r.converged = integrator.all_converged;
  return r;
}

GaussLegendreRule gauss_legendre(std::size_t n) {
  if (n == 0) throw std::invalid_argument("gauss_legendre: n must be positive");
  GaussLegendreRule rule;
  if (n == 1) {
    rule.nodes = {0.0};
    rule.weights = {2.0};
    return rule;
  }
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace exclt
