#include "exclt/clt_harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

#include "exclt/gaussian_simulation.hpp"
#include "exclt/subwindow.hpp"

namespace exclt {

std::string_view to_string(NormalizationMode mode) {
  return mode == NormalizationMode::theoretical_sigma ? "theoretical_sigma" : "self_normalized";
}

int ExperimentConfig::dimension() const {
  return gaussian ? gaussian->dimension() : shot_noise->dimension();
}

void ExperimentConfig::validate() const {
  if (gaussian.has_value() == shot_noise.has_value()) {
    throw std::invalid_argument("experiment: exactly one of a Gaussian or a shot-noise model is required");
  }
  if (dimension() != grid.dimension()) {
    throw std::invalid_argument("experiment: model dimension " + std::to_string(dimension()) +
                                " does not match grid dimension " + std::to_string(grid.dimension()));
  }
  if (replications < 2) throw std::invalid_argument("experiment: at least 2 replications are required");
  if (mode == NormalizationMode::self_normalized && !subwindow_edge) {
    throw std::invalid_argument("experiment: self_normalized mode requires a subwindow edge");
  }
  if (shot_noise && mode == NormalizationMode::theoretical_sigma && !supplied_sigma) {
    throw std::invalid_argument(
        "experiment: theoretical_sigma mode for shot noise requires a supplied sigma matrix");
  }
  if (supplied_sigma && supplied_sigma->order() != thresholds.size()) {
    throw std::invalid_argument("experiment: supplied sigma order does not match the thresholds");
  }
  if (shot_noise && tail_samples < 2) {
    throw std::invalid_argument("experiment: tail_samples must be at least 2");
  }
  quad.validate();
}

double correlation_range(const ExperimentConfig& cfg) {
  constexpr double kLevel = 0.05;
  if (cfg.gaussian) {
    const CovarianceModel& m = *cfg.gaussian;
    switch (m.kind()) {
      case CovarianceKind::spherical:
        return m.support_radius();
      case CovarianceKind::exponential:
        return -std::log(kLevel) * m.scale();
      case CovarianceKind::powered_exponential:
        return m.scale() * std::pow(-std::log(kLevel), 1.0 / m.power());
      case CovarianceKind::white_noise:
        return cfg.grid.mesh();
    }
  }
  const ResponseFunction& f = cfg.shot_noise->response();
  if (f.kind == ResponseFunction::Kind::exp_decay) return -std::log(kLevel) / f.rate;
  return std::pow(1.0 / kLevel, 1.0 / f.rate);
}

namespace {

std::vector<double> mat_vec(const CovMatrix& m, std::span<const double> v) {
  const std::size_t r = m.order();
  std::vector<double> out(r, 0.0);
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t k = 0; k < r; ++k) out[l] += m(l, k) * v[k];
  }
  return out;
}

struct TailEstimate {
  std::vector<double> p;
  std::vector<double> se;
};

TailEstimate shot_noise_tails(const ShotNoiseModel& model, const ThresholdVector& u,
                              std::size_t samples, std::uint64_t base_seed) {
  std::mt19937_64 rng(mix64(base_seed ^ 0x7461696c70726f62ULL));
  const std::vector<double> origin(static_cast<std::size_t>(model.dimension()), 0.0);
  std::vector<std::size_t> hits(u.size(), 0);
  for (std::size_t i = 0; i < samples; ++i) {
    const double x = shot_noise_at_points(model, origin, rng)[0];
    for (std::size_t k = 0; k < u.size(); ++k) {
      if (x >= u[k]) ++hits[k];
    }
  }
  TailEstimate out;
  const auto n = static_cast<double>(samples);
  for (std::size_t h : hits) {
    const double p = static_cast<double>(h) / n;
    out.p.push_back(p);
    out.se.push_back(std::sqrt(p * (1.0 - p) / n));
  }
  return out;
}

std::vector<double> component_variance(const std::vector<ReplicationRecord>& reps, std::size_t r,
                                       bool theory) {
  std::vector<double> sum(r, 0.0), sq(r, 0.0);
  std::size_t n = 0;
  for (const ReplicationRecord& rec : reps) {
    const auto& z = theory ? rec.whitened_theory : rec.whitened_self;
    if (z.empty()) continue;
    ++n;
    for (std::size_t k = 0; k < r; ++k) sum[k] += z[k];
  }
  if (n < 2) return {};
  for (double& s : sum) s /= static_cast<double>(n);
  for (const ReplicationRecord& rec : reps) {
    const auto& z = theory ? rec.whitened_theory : rec.whitened_self;
    if (z.empty()) continue;
    for (std::size_t k = 0; k < r; ++k) sq[k] += (z[k] - sum[k]) * (z[k] - sum[k]);
  }
  for (double& s : sq) s /= static_cast<double>(n - 1);
  return sq;
}

std::optional<NormalityDiagnostics> diagnostics_of(const std::vector<ReplicationRecord>& reps,
                                                   std::size_t r, bool theory) {
  std::vector<double> flat;
  for (const ReplicationRecord& rec : reps) {
    const auto& z = theory ? rec.whitened_theory : rec.whitened_self;
    flat.insert(flat.end(), z.begin(), z.end());
  }
  if (flat.size() / r < 20) return std::nullopt;
  return normality_diagnostics(flat, r);
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::size_t r = cfg.thresholds.size();
  const std::size_t m_reps = cfg.replications;

  ExperimentReport report;
  report.thresholds = cfg.thresholds;
  report.mode = cfg.mode;
  report.window_volume = cfg.grid.window_volume();
  report.point_count = cfg.grid.point_count();
  report.base_seed = cfg.base_seed;
  report.subwindow_edge = cfg.subwindow_edge;

  // Tail probabilities.
  if (cfg.gaussian) {
    const GaussianMarginal marginal = GaussianMarginal::of(*cfg.gaussian);
    for (double u : cfg.thresholds.levels()) {
      report.tail_probabilities.push_back(gaussian_tail(marginal.standardize(u)));
      report.tail_std_errors.push_back(0.0);
    }
    if (!cfg.gaussian->is_continuous()) {
      report.warnings.emplace_back("white-noise model violates the continuity assumption of the CLT");
    }
  } else {
    const TailEstimate t = shot_noise_tails(*cfg.shot_noise, cfg.thresholds, cfg.tail_samples, cfg.base_seed);
    report.tail_probabilities = t.p;
    report.tail_std_errors = t.se;
  }

  // Theoretical Sigma and its inverse square root.
  std::optional<CovMatrix> whitener;
  if (cfg.supplied_sigma) {
    report.theoretical_sigma = cfg.supplied_sigma;
  } else if (cfg.gaussian) {
    report.theoretical_sigma = sigma_matrix_gaussian(GaussianMarginal::of(*cfg.gaussian), *cfg.gaussian,
                                                     cfg.thresholds, cfg.quad);
  }
  if (report.theoretical_sigma) {
    try {
      whitener = inv_sqrt(*report.theoretical_sigma);
    } catch (const DegenerateMatrixError& e) {
      if (cfg.mode == NormalizationMode::theoretical_sigma) {
        throw ExperimentError(std::string("theoretical sigma is degenerate: ") + e.what());
      }
      report.warnings.emplace_back(std::string("theoretical whitening skipped: ") + e.what());
    }
  }

  std::optional<SubwindowTiling> tiling;
  if (cfg.subwindow_edge) {
    tiling = make_tiling(cfg.grid, *cfg.subwindow_edge);
    report.subwindow_count = tiling->tile_count();
    const bool compact = cfg.gaussian && cfg.gaussian->has_compact_support();
    if (!compact) {
      report.warnings.emplace_back(
          "model lacks compact support; consistency of the subwindow estimator is assumed, not verified");
    }
  }

  std::optional<GaussianSampler> sampler;
  if (cfg.gaussian) sampler.emplace(*cfg.gaussian, cfg.grid);

  auto run_one = [&](std::size_t i) {
    ReplicationRecord rec;
    rec.index = i;
    rec.seed = replication_seed(cfg.base_seed, i);
    const GridField field =
        sampler ? sampler->sample(rec.seed) : simulate_shot_noise(*cfg.shot_noise, cfg.grid, rec.seed);
    const ExcursionStats stats = excursion_vector(field, cfg.thresholds);
    rec.volumes = stats.volumes;
    rec.centered = centered_statistic(stats, report.tail_probabilities);
    if (whitener) rec.whitened_theory = mat_vec(*whitener, rec.centered);
    if (tiling) {
      const CovMatrix est =
          subwindow_estimate(subwindow_means(field, *tiling, cfg.thresholds), tiling->subwindow_volume());
      rec.sigma_hat = est.entries();
      try {
        rec.whitened_self = mat_vec(inv_sqrt(est), rec.centered);
      } catch (const DegenerateMatrixError& e) {
        rec.excluded_self = true;
        rec.exclusion_reason = e.what();
      }
    }
    return rec;
  };

  report.replications.resize(m_reps);
  std::size_t workers = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
  workers = std::min(workers, m_reps);
  std::vector<std::exception_ptr> errors(m_reps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < m_reps; i = next++) {
      try {
        report.replications[i] = run_one(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  // Deterministic fold in replication order.
  report.sample_mean.assign(r, 0.0);
  for (const auto& rec : report.replications) {
    for (std::size_t k = 0; k < r; ++k) report.sample_mean[k] += rec.centered[k];
    if (rec.excluded_self) ++report.excluded_self;
  }
  for (double& x : report.sample_mean) x /= static_cast<double>(m_reps);
  std::vector<double> cov(r * r, 0.0);
  for (const auto& rec : report.replications) {
    for (std::size_t l = 0; l < r; ++l) {
      for (std::size_t k = l; k < r; ++k) {
        cov[l * r + k] += (rec.centered[l] - report.sample_mean[l]) * (rec.centered[k] - report.sample_mean[k]);
      }
    }
  }
  for (std::size_t l = 0; l < r; ++l) {
    for (std::size_t k = l; k < r; ++k) {
      cov[l * r + k] /= static_cast<double>(m_reps - 1);
      cov[k * r + l] = cov[l * r + k];
    }
  }
  report.sample_covariance = CovMatrix(r, std::move(cov), Provenance::estimated);

  if (tiling) {
    std::vector<CovMatrix> estimates;
    for (const auto& rec : report.replications) estimates.emplace_back(r, rec.sigma_hat, Provenance::estimated);
    std::vector<double> mean(r * r, 0.0);
    for (const auto& e : estimates) {
      for (std::size_t q = 0; q < r * r; ++q) mean[q] += e.entries()[q];
    }
    for (double& x : mean) x /= static_cast<double>(estimates.size());
    report.mean_sigma_hat = CovMatrix(r, std::move(mean), Provenance::estimated);
    if (report.theoretical_sigma) report.mean_error = mean_error_matrix(estimates, *report.theoretical_sigma);
  }
  if (report.theoretical_sigma) {
    const CovMatrix one[] = {*report.sample_covariance};
    report.sample_covariance_error = mean_error_matrix(one, *report.theoretical_sigma);
  }

  if (cfg.mode == NormalizationMode::self_normalized && report.excluded_self == m_reps) {
    throw ExperimentError("every replication has a degenerate subwindow estimate; nothing to normalize");
  }
  report.theory_component_variance = component_variance(report.replications, r, true);
  report.self_component_variance = component_variance(report.replications, r, false);
  report.theory_diagnostics = diagnostics_of(report.replications, r, true);
  report.self_diagnostics = diagnostics_of(report.replications, r, false);

  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void validate_window_growth(const std::vector<std::vector<double>>& sides) {
  if (sides.size() < 2) throw std::invalid_argument("window growth: need at least two windows");
  for (std::size_t i = 1; i < sides.size(); ++i) {
    if (sides[i].size() != sides[0].size()) {
      throw std::invalid_argument("window growth: all windows must have the same dimension");
    }
    for (std::size_t a = 0; a < sides[i].size(); ++a) {
      if (!(sides[i][a] > sides[i - 1][a])) {
        throw std::invalid_argument("window growth: side " + std::to_string(a) + " does not grow from window " +
                                    std::to_string(i - 1) + " to window " + std::to_string(i) +
                                    "; rectangles grow in the Van Hove sense only if every side diverges");
      }
    }
  }
}

std::vector<ExperimentReport> run_window_growth(const ExperimentConfig& cfg,
                                                const std::vector<std::vector<double>>& sides) {
  validate_window_growth(sides);
  std::vector<ExperimentReport> out;
  for (const auto& s : sides) {
    ExperimentConfig c = cfg;
    c.grid = GridSpec(s, cfg.grid.mesh(), cfg.grid.origin());
    out.push_back(run_experiment(c));
  }
  return out;
}

double sigma_hat_iqr(const ExperimentReport& report, std::size_t l, std::size_t m) {
  const std::size_t r = report.order();
  std::vector<double> v;
  for (const auto& rec : report.replications) {
    if (!rec.sigma_hat.empty()) v.push_back(rec.sigma_hat[l * r + m]);
  }
  if (v.empty()) throw std::invalid_argument("sigma_hat_iqr: report has no subwindow estimates");
  std::sort(v.begin(), v.end());
  return sample_quantile(v, 0.75) - sample_quantile(v, 0.25);
}

nlohmann::json covmatrix_to_json(const CovMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t l = 0; l < m.order(); ++l) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < m.order(); ++k) row.push_back(m(l, k));
    rows.push_back(row);
  }
  return {{"order", m.order()},
          {"provenance", m.provenance() == Provenance::theoretical ? "theoretical" : "estimated"},
          {"entries", rows}};
}

namespace {

nlohmann::json optional_matrix(const std::vector<std::optional<double>>& v, std::size_t r) {
  if (v.empty()) return nullptr;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t l = 0; l < r; ++l) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < r; ++k) {
      const auto& x = v[l * r + k];
      row.push_back(x ? nlohmann::json(*x) : nlohmann::json(nullptr));
    }
    rows.push_back(row);
  }
  return rows;
}

nlohmann::json diagnostics_json(const std::optional<NormalityDiagnostics>& d) {
  if (!d) return nullptr;
  nlohmann::json ks = nlohmann::json::array();
  for (const auto& k : d->ks) ks.push_back({{"statistic", k.statistic}, {"p_value", k.p_value}});
  nlohmann::json qq = nlohmann::json::array();
  for (const auto& q : d->qq) {
    qq.push_back({{"probability", q.probability}, {"empirical", q.empirical}, {"chi_square", q.theoretical}});
  }
  return {{"count", d->count}, {"ks", ks}, {"chi_square_qq", qq}};
}

nlohmann::json matrix_or_null(const std::optional<CovMatrix>& m) {
  return m ? covmatrix_to_json(*m) : nlohmann::json(nullptr);
}

template <class T>
nlohmann::json maybe(const std::optional<T>& x) {
  return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << std::setprecision(17);
  return out;
}

void csv_cell(std::ostream& os, const std::vector<double>& v, std::size_t k) {
  if (!v.empty()) os << v[k];
}

}  // namespace

nlohmann::json report_to_json(const ExperimentReport& report) {
  const std::size_t r = report.order();
  nlohmann::json reps = nlohmann::json::array();
  for (const auto& rec : report.replications) {
    nlohmann::json j = {{"index", rec.index},
                        {"seed", rec.seed},
                        {"volumes", rec.volumes},
                        {"centered", rec.centered},
                        {"whitened_theory", rec.whitened_theory},
                        {"whitened_self", rec.whitened_self},
                        {"sigma_hat", rec.sigma_hat},
                        {"excluded_self", rec.excluded_self}};
    if (rec.excluded_self) j["exclusion_reason"] = rec.exclusion_reason;
    reps.push_back(std::move(j));
  }
  nlohmann::json j = {
      {"thresholds", report.thresholds.levels()},
      {"mode", std::string(to_string(report.mode))},
      {"window_volume", report.window_volume},
      {"point_count", report.point_count},
      {"base_seed", report.base_seed},
      {"tail_probabilities", report.tail_probabilities},
      {"tail_std_errors", report.tail_std_errors},
      {"sample_mean", report.sample_mean},
      {"sample_covariance", matrix_or_null(report.sample_covariance)},
      {"theoretical_sigma", matrix_or_null(report.theoretical_sigma)},
      {"mean_sigma_hat", matrix_or_null(report.mean_sigma_hat)},
      {"mean_error_percent", optional_matrix(report.mean_error, r)},
      {"sample_covariance_error_percent", optional_matrix(report.sample_covariance_error, r)},
      {"theory_diagnostics", diagnostics_json(report.theory_diagnostics)},
      {"self_diagnostics", diagnostics_json(report.self_diagnostics)},
      {"theory_component_variance", report.theory_component_variance},
      {"self_component_variance", report.self_component_variance},
      {"excluded_self", report.excluded_self},
      {"subwindow_edge", maybe(report.subwindow_edge)},
      {"subwindow_count", report.subwindow_count},
      {"warnings", report.warnings},
      {"replications", reps},
      {"timing", {{"runtime_seconds", report.runtime_seconds}}},
  };
  return j;
}

void write_report_json(const ExperimentReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << report_to_json(report).dump(2) << '\n';
}

void write_replications_csv(const ExperimentReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "index,seed,k,u,S,window_volume,T,Z_theory,Z_self\n";
  for (const auto& rec : report.replications) {
    for (std::size_t k = 0; k < report.order(); ++k) {
      out << rec.index << ',' << rec.seed << ',' << k << ',' << report.thresholds[k] << ','
          << rec.volumes[k] << ',' << report.window_volume << ',' << rec.centered[k] << ',';
      csv_cell(out, rec.whitened_theory, k);
      out << ',';
      csv_cell(out, rec.whitened_self, k);
      out << '\n';
    }
  }
}

void write_histogram_csv(const ExperimentReport& report, const std::filesystem::path& path,
                         std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram: need at least one bin");
  auto out = open_out(path);
  out << "source,component,bin_lo,bin_hi,count,density,normal_density\n";
  const double lo = -4.0, hi = 4.0, width = (hi - lo) / static_cast<double>(bins);
  for (int pass = 0; pass < 2; ++pass) {
    const bool theory = pass == 0;
    for (std::size_t k = 0; k < report.order(); ++k) {
      std::vector<std::size_t> counts(bins, 0);
      std::size_t n = 0;
      for (const auto& rec : report.replications) {
        const auto& z = theory ? rec.whitened_theory : rec.whitened_self;
        if (z.empty()) continue;
        ++n;
        const double x = z[k];
        if (x < lo || x >= hi) continue;
        ++counts[std::min(bins - 1, static_cast<std::size_t>((x - lo) / width))];
      }
      if (n == 0) continue;
      for (std::size_t b = 0; b < bins; ++b) {
        const double a = lo + width * static_cast<double>(b);
        out << (theory ? "theory" : "self") << ',' << k << ',' << a << ',' << a + width << ','
            << counts[b] << ',' << static_cast<double>(counts[b]) / (static_cast<double>(n) * width)
            << ',' << standard_normal_pdf(a + 0.5 * width) << '\n';
      }
    }
  }
}

void write_qq_csv(const ExperimentReport& report, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "source,probability,empirical,chi_square\n";
  const std::pair<const char*, const std::optional<NormalityDiagnostics>*> sources[] = {
      {"theory", &report.theory_diagnostics}, {"self", &report.self_diagnostics}};
  for (const auto& [name, diag] : sources) {
    if (!*diag) continue;
    for (const auto& q : (*diag)->qq) {
      out << name << ',' << q.probability << ',' << q.empirical << ',' << q.theoretical << '\n';
    }
  }
}

std::string format_lower_triangular(const CovMatrix& m, int precision) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(precision);
  for (std::size_t l = 0; l < m.order(); ++l) {
    for (std::size_t k = 0; k <= l; ++k) os << std::setw(precision + 8) << m(l, k);
    os << '\n';
  }
  return os.str();
}

}  // namespace exclt
