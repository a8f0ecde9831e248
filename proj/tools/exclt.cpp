// Command-line front end: simulate, theory, estimate, experiment.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "exclt/asymptotic.hpp"
#include "exclt/clt_harness.hpp"
#include "exclt/config.hpp"
#include "exclt/field_io.hpp"
#include "exclt/gaussian_simulation.hpp"
#include "exclt/shot_noise.hpp"
#include "exclt/subwindow.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace exclt;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitConfig = 2;

struct Options {
  std::string config;
  std::string out;
  std::string field;
  int verbosity = 0;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> reps;
  std::optional<std::size_t> threads;
  std::optional<double> edge;
  std::string grid;
  std::vector<double> thresholds;
};

std::string one_line(std::string s) {
  for (char& c : s) {
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> sides;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, 'x')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(part, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != part.size() || part.empty()) {
      throw ConfigError({"--grid: expected SIDE or SIDExSIDE[xSIDE], got '" + text + "'"});
    }
    sides.push_back(v);
  }
  return sides;
}

ValidatedConfig load(const Options& opt) {
  if (opt.config.empty()) throw ConfigError({"--config: a configuration file is required"});
  if (!fs::exists(opt.config)) throw ConfigError({opt.config + ": configuration file not found"});
  std::ifstream in(opt.config);
  if (!in) throw ConfigError({opt.config + ": cannot open configuration file"});
  std::stringstream buf;
  buf << in.rdbuf();
  if (buf.str().find_first_not_of(" \t\r\n") == std::string::npos) {
    throw ConfigError({opt.config + ": configuration file is empty"});
  }
  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError({opt.config + ": " + e.what()});
  }
  ConfigOverrides o;
  o.seed = opt.seed;
  o.replications = opt.reps;
  o.threads = opt.threads;
  o.edge = opt.edge;
  if (!opt.grid.empty()) o.grid = parse_grid(opt.grid);
  if (!opt.thresholds.empty()) o.thresholds = opt.thresholds;
  apply_overrides(doc, o);
  return load_config(doc);
}

fs::path out_dir(const Options& opt) {
  fs::path p = opt.out.empty() ? fs::path("out") : fs::path(opt.out);
  fs::create_directories(p);
  return p;
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void write_common(const fs::path& dir, const ValidatedConfig& cfg, const std::string& command) {
  write_json(dir / "config.normalized.json", cfg.normalized);
  write_json(dir / "manifest.json", make_manifest(cfg, command));
}

int cmd_simulate(const Options& opt) {
  const ValidatedConfig cfg = load(opt);
  const ExperimentConfig& e = cfg.experiment;
  const fs::path dir = out_dir(opt);
  const std::size_t count = opt.reps.value_or(1);
  std::optional<GaussianSampler> sampler;
  if (e.gaussian) sampler.emplace(*e.gaussian, e.grid);
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t seed = replication_seed(e.base_seed, i);
    const GridField field = sampler ? sampler->sample(seed)
                                    : simulate_shot_noise(*e.shot_noise, e.grid, seed, cfg.truncation_tol);
    const std::string stem = "field_" + std::to_string(i);
    write_field_binary(field, dir / (stem + ".bin"));
    write_json(dir / (stem + ".json"), field_sidecar(field, cfg.normalized["field"]));
    if (e.grid.dimension() <= 2) write_field_csv(field, dir / (stem + ".csv"));
    if (opt.verbosity > 0) std::cerr << "wrote " << (dir / (stem + ".bin")).string() << '\n';
  }
  write_common(dir, cfg, "simulate");
  std::cout << "simulated " << count << " field(s) into " << dir.string() << '\n';
  return kExitOk;
}

int cmd_theory(const Options& opt) {
  const ValidatedConfig cfg = load(opt);
  const ExperimentConfig& e = cfg.experiment;
  std::optional<CovMatrix> sigma;
  if (e.supplied_sigma) {
    sigma = e.supplied_sigma;
  } else if (e.gaussian) {
    sigma = sigma_matrix_gaussian(GaussianMarginal::of(*e.gaussian), *e.gaussian, e.thresholds, e.quad);
  } else {
    throw ConfigError({"/field: theory needs a Gaussian field or a supplied sigma matrix"});
  }
  std::cout << "Sigma(u), u = (";
  for (std::size_t k = 0; k < e.thresholds.size(); ++k) std::cout << (k ? ", " : "") << e.thresholds[k];
  std::cout << ")\n" << format_lower_triangular(*sigma);
  if (!opt.out.empty()) {
    const fs::path dir = out_dir(opt);
    json j = covmatrix_to_json(*sigma);
    j["thresholds"] = e.thresholds.levels();
    j["quadrature"] = cfg.normalized["quadrature"];
    write_json(dir / "sigma.json", j);
    write_common(dir, cfg, "theory");
  }
  return kExitOk;
}

int cmd_estimate(const Options& opt) {
  const ValidatedConfig cfg = load(opt);
  const ExperimentConfig& e = cfg.experiment;
  if (opt.field.empty()) throw ConfigError({"--field: a field dump is required"});
  if (!fs::exists(opt.field)) throw ConfigError({opt.field + ": field dump not found"});
  json sidecar = json::object();
  fs::path side = fs::path(opt.field).replace_extension(".json");
  if (fs::exists(side)) {
    std::ifstream in(side);
    sidecar = json::parse(in);
  }
  const GridField field = read_field_binary(opt.field, sidecar);
  if (!e.subwindow_edge) throw ConfigError({"/subwindow_edge: estimate needs a subwindow edge"});
  const SubwindowTiling tiling = make_tiling(field.spec(), *e.subwindow_edge);
  const CovMatrix est =
      subwindow_estimate(subwindow_means(field, tiling, e.thresholds), tiling.subwindow_volume());
  std::cout << "Sigma-hat(u), edge " << *e.subwindow_edge << ", " << tiling.tile_count() << " subwindows\n"
            << format_lower_triangular(est);
  if (!opt.out.empty()) {
    const fs::path dir = out_dir(opt);
    json j = covmatrix_to_json(est);
    j["thresholds"] = e.thresholds.levels();
    j["tiling"] = {{"edge", *e.subwindow_edge},
                   {"subwindows", tiling.tile_count()},
                   {"tiles_per_axis", tiling.tiles_per_axis},
                   {"margin_before", tiling.margin_before()},
                   {"margin_total", tiling.margin_total()}};
    j["field"] = opt.field;
    write_json(dir / "sigma_hat.json", j);
    write_common(dir, cfg, "estimate");
  }
  return kExitOk;
}

void write_report_files(const ExperimentReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  write_report_json(report, dir / "report.json");
  write_replications_csv(report, dir / "replications.csv");
  write_histogram_csv(report, dir / "histogram.csv");
  write_qq_csv(report, dir / "qq.csv");
}

void print_summary(const ExperimentReport& report) {
  std::cout << "replications: " << report.replications.size() << ", window volume " << report.window_volume
            << ", mode " << to_string(report.mode) << '\n';
  if (report.theoretical_sigma) {
    std::cout << "theoretical Sigma:\n" << format_lower_triangular(*report.theoretical_sigma);
  }
  if (report.mean_sigma_hat) std::cout << "mean Sigma-hat:\n" << format_lower_triangular(*report.mean_sigma_hat);
  if (!report.mean_error.empty()) {
    std::cout << "mean error (%):\n";
    const std::size_t r = report.order();
    for (std::size_t l = 0; l < r; ++l) {
      for (std::size_t k = 0; k <= l; ++k) {
        const auto& v = report.mean_error[l * r + k];
        std::ostringstream cell;
        if (v) {
          cell << std::fixed << std::setprecision(2) << *v;
        } else {
          cell << "n/a";
        }
        std::cout << std::setw(10) << cell.str();
      }
      std::cout << '\n';
    }
  }
  for (const char* which : {"theory", "self"}) {
    const bool theory = std::string(which) == "theory";
    const auto& d = theory ? report.theory_diagnostics : report.self_diagnostics;
    if (!d) continue;
    std::cout << which << " whitening KS p-values:";
    for (const auto& k : d->ks) std::cout << ' ' << k.p_value;
    std::cout << '\n';
  }
  if (report.excluded_self > 0) std::cout << "excluded (degenerate Sigma-hat): " << report.excluded_self << '\n';
  for (const auto& w : report.warnings) std::cout << "warning: " << w << '\n';
}

int cmd_experiment(const Options& opt) {
  const ValidatedConfig cfg = load(opt);
  const fs::path dir = out_dir(opt);
  write_common(dir, cfg, "experiment");
  if (!cfg.window_growth.empty()) {
    const auto reports = run_window_growth(cfg.experiment, cfg.window_growth);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      const fs::path sub = dir / ("window_" + std::to_string(i));
      write_report_files(reports[i], sub);
      std::cout << "window " << i << ":\n";
      print_summary(reports[i]);
    }
    return kExitOk;
  }
  const ExperimentReport report = run_experiment(cfg.experiment);
  write_report_files(report, dir);
  print_summary(report);
  std::cout << "report written to " << (dir / "report.json").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Excursion-set volume CLT toolkit: simulation, theory, estimation, experiments"};
  app.require_subcommand(1);
  Options opt;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON configuration file")->required();
    sub->add_option("--out", opt.out, "Output directory");
    sub->add_flag("-v,--verbose", opt.verbosity, "Verbosity (repeatable)");
    sub->add_option("--seed", opt.seed, "Override the base seed");
    sub->add_option("--reps", opt.reps, "Override the replication count");
    sub->add_option("--threads", opt.threads, "Worker threads (0 = all cores)");
    sub->add_option("--edge", opt.edge, "Override the subwindow edge");
    sub->add_option("--grid", opt.grid, "Override the window sides, e.g. 512 or 512x256");
    sub->add_option("--thresholds", opt.thresholds, "Override the thresholds")->delimiter(',');
  };
  CLI::App* simulate = app.add_subcommand("simulate", "Simulate field realizations and dump them");
  CLI::App* theory = app.add_subcommand("theory", "Print the theoretical Sigma matrix");
  CLI::App* estimate = app.add_subcommand("estimate", "Subwindow estimate of Sigma from a field dump");
  CLI::App* experiment = app.add_subcommand("experiment", "Run the Monte Carlo CLT experiment");
  for (CLI::App* s : {simulate, theory, estimate, experiment}) common(s);
  estimate->add_option("--field", opt.field, "Field dump (.bin) with optional .json sidecar")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[config]: " << one_line(e.what()) << '\n';
    return kExitConfig;
  }

  try {
    if (*simulate) return cmd_simulate(opt);
    if (*theory) return cmd_theory(opt);
    if (*estimate) return cmd_estimate(opt);
    return cmd_experiment(opt);
  } catch (const ConfigError& e) {
    for (const auto& msg : e.errors()) std::cerr << "error[config]: " << one_line(msg) << '\n';
    return kExitConfig;
  } catch (const FormatError& e) {
    std::cerr << "error[config]: " << one_line(e.what()) << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error[domain]: " << one_line(e.what()) << '\n';
    return kExitDomain;
  }
}
