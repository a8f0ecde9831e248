#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "exclt/asymptotic.hpp"
#include "exclt/covariance_model.hpp"
#include "exclt/diagnostics.hpp"
#include "exclt/excursion.hpp"
#include "exclt/grid.hpp"
#include "exclt/shot_noise.hpp"

namespace exclt {

enum class NormalizationMode { theoretical_sigma, self_normalized };

std::string_view to_string(NormalizationMode mode);

struct ExperimentConfig {
  std::optional<CovarianceModel> gaussian;
  std::optional<ShotNoiseModel> shot_noise;
  GridSpec grid = GridSpec::cube(1, 2.0);
  ThresholdVector thresholds{0.0};
  std::size_t replications = 2;
  std::uint64_t base_seed = 0;
  std::optional<double> subwindow_edge;
  NormalizationMode mode = NormalizationMode::theoretical_sigma;
  QuadratureSpec quad;
  /// Worker threads; 0 means hardware concurrency.
  std::size_t threads = 1;
  /// Theoretical Sigma supplied by the user (required for theoretical
  /// normalization of shot-noise fields).
  std::optional<CovMatrix> supplied_sigma;
  /// Monte Carlo draws of X(0) for shot-noise tail probabilities.
  std::size_t tail_samples = 20000;

  /// Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
  [[nodiscard]] int dimension() const;
};

/// Scale at which the field decorrelates: the support radius for compact
/// models, the 5% correlation distance otherwise, and for shot noise the
/// distance where the response falls to 5% of its peak.
double correlation_range(const ExperimentConfig& cfg);

struct ReplicationRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  std::vector<double> volumes;
  std::vector<double> centered;
  /// Empty when not computed or the replication was excluded.
  std::vector<double> whitened_theory;
  std::vector<double> whitened_self;
  /// Row-major r x r subwindow estimate; empty without a subwindow edge.
  std::vector<double> sigma_hat;
  bool excluded_self = false;
  std::string exclusion_reason;
};

struct ExperimentReport {
  ThresholdVector thresholds{0.0};
  NormalizationMode mode = NormalizationMode::theoretical_sigma;
  double window_volume = 0.0;
  std::size_t point_count = 0;
  std::uint64_t base_seed = 0;
  std::vector<double> tail_probabilities;
  /// Monte Carlo standard errors of the tail probabilities (zero if exact).
  std::vector<double> tail_std_errors;
  std::vector<ReplicationRecord> replications;

  std::vector<double> sample_mean;
  std::optional<CovMatrix> sample_covariance;
  std::optional<CovMatrix> theoretical_sigma;
  std::optional<CovMatrix> mean_sigma_hat;
  /// Sigma-hat mean error against the theoretical Sigma, percent.
  std::vector<std::optional<double>> mean_error;
  /// Sample covariance of the centered statistics against Sigma, percent.
  std::vector<std::optional<double>> sample_covariance_error;

  std::optional<NormalityDiagnostics> theory_diagnostics;
  std::optional<NormalityDiagnostics> self_diagnostics;
  std::vector<double> theory_component_variance;
  std::vector<double> self_component_variance;
  std::size_t excluded_self = 0;
  std::vector<std::string> warnings;
  std::optional<double> subwindow_edge;
  std::size_t subwindow_count = 0;

  double runtime_seconds = 0.0;

  [[nodiscard]] std::size_t order() const { return thresholds.size(); }
};

class ExperimentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Runs all replications (concurrently when cfg.threads > 1) and folds the
/// results in replication order, so the report depends only on cfg.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Rejects window sequences where some side fails to grow strictly between
/// consecutive windows (rectangles are Van Hove growing iff all sides
/// diverge). Sides are given per window.
void validate_window_growth(const std::vector<std::vector<double>>& sides);

/// One experiment per window, each with the grid sides replaced.
std::vector<ExperimentReport> run_window_growth(const ExperimentConfig& cfg,
                                                const std::vector<std::vector<double>>& sides);

/// Interquartile range of Sigma-hat entry (l, m) across replications.
double sigma_hat_iqr(const ExperimentReport& report, std::size_t l, std::size_t m);

nlohmann::json covmatrix_to_json(const CovMatrix& m);
nlohmann::json report_to_json(const ExperimentReport& report);

void write_report_json(const ExperimentReport& report, const std::filesystem::path& path);
/// One row per replication and threshold.
void write_replications_csv(const ExperimentReport& report, const std::filesystem::path& path);
/// Histogram of whitened components on [-4, 4] with standard normal ordinates.
void write_histogram_csv(const ExperimentReport& report, const std::filesystem::path& path,
                         std::size_t bins = 32);
/// Chi-square decile QQ pairs of the squared norms.
void write_qq_csv(const ExperimentReport& report, const std::filesystem::path& path);

/// Lower-triangular aligned table, one row per threshold.
std::string format_lower_triangular(const CovMatrix& m, int precision = 4);

}  // namespace exclt
