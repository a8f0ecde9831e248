#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "exclt/grid.hpp"
#include "exclt/quadrature.hpp"

namespace exclt {

struct MarkDistribution {
  enum class Kind { constant, exponential, lognormal };
  Kind kind = Kind::constant;
  /// constant: the value c; exponential: the mean; lognormal: mu.
  double p1 = 1.0;
  /// lognormal: sigma; unused otherwise.
  double p2 = 0.0;

  static MarkDistribution constant(double c) { return {Kind::constant, c, 0.0}; }
  static MarkDistribution exponential(double mean) { return {Kind::exponential, mean, 0.0}; }
  static MarkDistribution lognormal(double mu, double sigma) { return {Kind::lognormal, mu, sigma}; }

  [[nodiscard]] double mean() const;
  [[nodiscard]] double second_moment() const;
  [[nodiscard]] double sample(std::mt19937_64& rng) const;
  [[nodiscard]] std::string describe() const;
};

/// Radial response function phi(t) = f(|t|_2).
struct ResponseFunction {
  enum class Kind { exp_decay, capped_power };
  Kind kind = Kind::exp_decay;
  double amplitude = 1.0;  // a
  double rate = 1.0;       // b

  static ResponseFunction exp_decay(double a, double b) { return {Kind::exp_decay, a, b}; }
  static ResponseFunction capped_power(double a, double b) { return {Kind::capped_power, a, b}; }

  /// a e^{-b v}  or  a min(1, v^{-b}).
  [[nodiscard]] double operator()(double distance) const;
  /// integral over R^d of phi^power.
  [[nodiscard]] double power_integral(int dimension, int power) const;
  /// integral over {|t|_2 > radius} of phi^power.
  [[nodiscard]] double tail_integral(int dimension, double radius, int power = 1) const;
  [[nodiscard]] std::string describe() const;
};

class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, double required_buffer)
      : std::runtime_error(what), required_buffer_(required_buffer) {}
  [[nodiscard]] double required_buffer() const noexcept { return required_buffer_; }

 private:
  double required_buffer_;
};

/// X(t) = sum_i xi_i phi(t - x_i) over a homogeneous Poisson process of
/// intensity lambda in R^d. Intensity 0 is allowed and gives X == 0.
class ShotNoiseModel {
 public:
  static constexpr double kDefaultTruncation = 1e-6;

  ShotNoiseModel(double intensity, MarkDistribution marks, ResponseFunction response, int dimension,
                 double buffer_radius = 0.0);

  [[nodiscard]] double intensity() const noexcept { return intensity_; }
  [[nodiscard]] const MarkDistribution& marks() const noexcept { return marks_; }
  [[nodiscard]] const ResponseFunction& response() const noexcept { return response_; }
  [[nodiscard]] int dimension() const noexcept { return dimension_; }
  /// Declared buffer; 0 means "choose from the truncation tolerance".
  [[nodiscard]] double declared_buffer() const noexcept { return buffer_; }

  /// lambda E[xi] int phi.
  [[nodiscard]] double campbell_mean() const;
  /// lambda E[xi^2] int phi^2.
  [[nodiscard]] double campbell_variance() const;
  /// Neglected mean mass lambda E[xi] int_{|y| > radius} phi(y) dy.
  [[nodiscard]] double truncation_error(double radius) const;
  /// Smallest radius whose neglected mass is below tol; throws
  /// TruncationError if phi is not integrable.
  [[nodiscard]] double required_buffer(double tol = kDefaultTruncation) const;
  /// Declared buffer if it meets tol (TruncationError naming the required
  /// size otherwise), else required_buffer(tol).
  [[nodiscard]] double resolved_buffer(double tol = kDefaultTruncation) const;

  [[nodiscard]] std::string describe() const;

 private:
  double intensity_;
  MarkDistribution marks_;
  ResponseFunction response_;
  int dimension_;
  double buffer_;
};

/// Points (row-major, dimension coordinates each) with their marks.
struct MarkedPoints {
  std::vector<double> coords;
  std::vector<double> marks;
  [[nodiscard]] std::size_t size() const noexcept { return marks.size(); }
};

/// Sum of xi_i phi(t - x_i) at every lattice point, dropping pairs further
/// apart than `cutoff` (pass +inf for the exact finite sum).
GridField shot_noise_from_points(const ResponseFunction& response, const GridSpec& spec,
                                 const MarkedPoints& points, double cutoff,
                                 std::string model_tag = "shot_noise", std::uint64_t seed = 0);

/// Poisson points with marks in the box [lo, hi].
MarkedPoints sample_marked_points(const ShotNoiseModel& model, std::span<const double> lo,
                                  std::span<const double> hi, std::mt19937_64& rng);

/// Realization on the grid: Poisson points on the window dilated by the
/// resolved buffer, each contributing within the buffer radius.
GridField simulate_shot_noise(const ShotNoiseModel& model, const GridSpec& spec, std::uint64_t seed,
                              double truncation_tol = ShotNoiseModel::kDefaultTruncation);

/// Field values at arbitrary query points (row-major) from one realization.
std::vector<double> shot_noise_at_points(const ShotNoiseModel& model,
                                         std::span<const double> queries, std::mt19937_64& rng,
                                         double truncation_tol = ShotNoiseModel::kDefaultTruncation);

/// Tests integrability of |characteristic function of X(0)| by truncated
/// quadrature over s with doubling truncation levels; true once two
/// successive levels agree within `convergence_tol` (relative). Constant
/// marks only; other mark laws throw std::domain_error.
bool check_bounded_density(const ShotNoiseModel& model, const QuadratureSpec& quad,
                           double convergence_tol = 1e-3, int max_levels = 14);

}  // namespace exclt
