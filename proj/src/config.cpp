#include "exclt/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <boost/version.hpp>
#include <Eigen/Core>

#include "exclt/subwindow.hpp"

namespace exclt {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
  std::string s = "invalid configuration:";
  for (const auto& e : errors) s += "\n  " + e;
  return s;
}

using json = nlohmann::json;

/// Collects schema violations while reading typed values.
class Reader {
 public:
  std::vector<std::string> errors;

  void fail(const std::string& path, const std::string& message) { errors.push_back(path + ": " + message); }

  const json* find(const json& obj, const std::string& key) {
    if (!obj.is_object()) return nullptr;
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
  }

  std::optional<double> number(const json& obj, const std::string& key, const std::string& path,
                               std::optional<double> fallback) {
    const json* v = find(obj, key);
    if (!v) {
      if (!fallback) fail(path, "required number is missing");
      return fallback;
    }
    if (!v->is_number()) {
      fail(path, "must be a number");
      return std::nullopt;
    }
    const double x = v->get<double>();
    if (!std::isfinite(x)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return x;
  }

  std::optional<double> positive(const json& obj, const std::string& key, const std::string& path,
                                 std::optional<double> fallback) {
    auto x = number(obj, key, path, fallback);
    if (x && !(*x > 0.0)) {
      fail(path, "must be > 0");
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::uint64_t> unsigned_int(const json& obj, const std::string& key, const std::string& path,
                                            std::optional<std::uint64_t> fallback) {
    const json* v = find(obj, key);
    if (!v) {
      if (!fallback) fail(path, "required integer is missing");
      return fallback;
    }
    if (!v->is_number_unsigned()) {
      fail(path, "must be a non-negative integer");
      return std::nullopt;
    }
    return v->get<std::uint64_t>();
  }

  std::optional<std::string> string(const json& obj, const std::string& key, const std::string& path,
                                    std::optional<std::string> fallback) {
    const json* v = find(obj, key);
    if (!v) {
      if (!fallback) fail(path, "required string is missing");
      return fallback;
    }
    if (!v->is_string()) {
      fail(path, "must be a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::optional<std::vector<double>> numbers(const json& v, const std::string& path) {
    if (!v.is_array() || v.empty()) {
      fail(path, "must be a non-empty array of numbers");
      return std::nullopt;
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
        fail(path + "/" + std::to_string(i), "must be a finite number");
        return std::nullopt;
      }
      out.push_back(v[i].get<double>());
    }
    return out;
  }

  void unknown_keys(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) return;
    for (const auto& [key, _] : obj.items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || key == a;
      if (!ok) fail(path + "/" + key, "unknown key");
    }
  }
};

struct GaussianPart {
  std::optional<CovarianceModel> model;
  json normalized;
};

GaussianPart read_gaussian(Reader& rd, const json& field, int d) {
  GaussianPart out;
  const json* cov = rd.find(field, "covariance");
  if (!cov || !cov->is_object()) {
    rd.fail("/field/covariance", "required object is missing");
    return out;
  }
  const std::string base = "/field/covariance";
  const auto kind = rd.string(*cov, "kind", base + "/kind", std::nullopt);
  const auto variance = rd.positive(*cov, "variance", base + "/variance", 1.0);
  const auto mean = rd.number(*cov, "mean", base + "/mean", 0.0);
  if (!kind) return out;
  json norm = {{"kind", *kind}};
  try {
    if (*kind == "spherical") {
      rd.unknown_keys(*cov, base, {"kind", "variance", "mean", "range"});
      const auto range = rd.positive(*cov, "range", base + "/range", std::nullopt);
      if (variance && mean && range && d > 0) {
        out.model = CovarianceModel::spherical(*variance, *range, d, *mean);
        norm["range"] = *range;
      }
    } else if (*kind == "exponential") {
      rd.unknown_keys(*cov, base, {"kind", "variance", "mean", "scale"});
      const auto scale = rd.positive(*cov, "scale", base + "/scale", std::nullopt);
      if (variance && mean && scale && d > 0) {
        out.model = CovarianceModel::exponential(*variance, *scale, d, *mean);
        norm["scale"] = *scale;
      }
    } else if (*kind == "powered_exponential") {
      rd.unknown_keys(*cov, base, {"kind", "variance", "mean", "scale", "power"});
      const auto scale = rd.positive(*cov, "scale", base + "/scale", std::nullopt);
      const auto power = rd.positive(*cov, "power", base + "/power", std::nullopt);
      if (power && *power > 2.0) rd.fail(base + "/power", "must lie in (0, 2]");
      if (variance && mean && scale && power && *power <= 2.0 && d > 0) {
        out.model = CovarianceModel::powered_exponential(*variance, *scale, *power, d, *mean);
        norm["scale"] = *scale;
        norm["power"] = *power;
      }
    } else if (*kind == "white_noise") {
      rd.unknown_keys(*cov, base, {"kind", "variance", "mean"});
      if (variance && mean && d > 0) out.model = CovarianceModel::white_noise(*variance, d, *mean);
    } else {
      rd.fail(base + "/kind",
              "unknown covariance kind '" + *kind +
                  "' (expected spherical, exponential, powered_exponential or white_noise)");
    }
  } catch (const std::invalid_argument& e) {
    rd.fail(base, e.what());
  }
  if (out.model) {
    norm["variance"] = *variance;
    norm["mean"] = *mean;
    out.normalized = {{"type", "gaussian"}, {"covariance", norm}};
  }
  return out;
}

struct ShotPart {
  std::optional<ShotNoiseModel> model;
  double truncation_tol = ShotNoiseModel::kDefaultTruncation;
  json normalized;
};

ShotPart read_shot_noise(Reader& rd, const json& field, int d) {
  ShotPart out;
  rd.unknown_keys(field, "/field", {"type", "intensity", "marks", "response", "buffer", "truncation_tol"});
  const auto intensity = rd.number(field, "intensity", "/field/intensity", std::nullopt);
  if (intensity && *intensity < 0.0) rd.fail("/field/intensity", "must be >= 0");
  const auto buffer = rd.number(field, "buffer", "/field/buffer", 0.0);
  if (buffer && *buffer < 0.0) rd.fail("/field/buffer", "must be >= 0 (0 selects the buffer automatically)");
  const auto tol = rd.positive(field, "truncation_tol", "/field/truncation_tol", ShotNoiseModel::kDefaultTruncation);

  std::optional<MarkDistribution> marks;
  json marks_norm;
  const json* mk = rd.find(field, "marks");
  if (!mk) {
    marks = MarkDistribution::constant(1.0);
    marks_norm = {{"kind", "constant"}, {"value", 1.0}};
  } else if (!mk->is_object()) {
    rd.fail("/field/marks", "must be an object");
  } else {
    const auto kind = rd.string(*mk, "kind", "/field/marks/kind", std::nullopt);
    if (kind == "constant") {
      rd.unknown_keys(*mk, "/field/marks", {"kind", "value"});
      const auto v = rd.positive(*mk, "value", "/field/marks/value", std::nullopt);
      if (v) {
        marks = MarkDistribution::constant(*v);
        marks_norm = {{"kind", "constant"}, {"value", *v}};
      }
    } else if (kind == "exponential") {
      rd.unknown_keys(*mk, "/field/marks", {"kind", "mean"});
      const auto v = rd.positive(*mk, "mean", "/field/marks/mean", std::nullopt);
      if (v) {
        marks = MarkDistribution::exponential(*v);
        marks_norm = {{"kind", "exponential"}, {"mean", *v}};
      }
    } else if (kind == "lognormal") {
      rd.unknown_keys(*mk, "/field/marks", {"kind", "mu", "sigma"});
      const auto mu = rd.number(*mk, "mu", "/field/marks/mu", std::nullopt);
      const auto sigma = rd.positive(*mk, "sigma", "/field/marks/sigma", std::nullopt);
      if (mu && sigma) {
        marks = MarkDistribution::lognormal(*mu, *sigma);
        marks_norm = {{"kind", "lognormal"}, {"mu", *mu}, {"sigma", *sigma}};
      }
    } else if (kind) {
      rd.fail("/field/marks/kind", "unknown mark law '" + *kind + "' (expected constant, exponential or lognormal)");
    }
  }

  std::optional<ResponseFunction> response;
  const json* rs = rd.find(field, "response");
  if (!rs || !rs->is_object()) {
    rd.fail("/field/response", "required object is missing");
  } else {
    rd.unknown_keys(*rs, "/field/response", {"kind", "amplitude", "rate"});
    const auto kind = rd.string(*rs, "kind", "/field/response/kind", std::nullopt);
    const auto a = rd.positive(*rs, "amplitude", "/field/response/amplitude", 1.0);
    const auto b = rd.positive(*rs, "rate", "/field/response/rate", std::nullopt);
    if (kind && *kind != "exp_decay" && *kind != "capped_power") {
      rd.fail("/field/response/kind", "unknown response '" + *kind + "' (expected exp_decay or capped_power)");
    } else if (kind && a && b) {
      response = *kind == "exp_decay" ? ResponseFunction::exp_decay(*a, *b) : ResponseFunction::capped_power(*a, *b);
    }
  }

  if (!intensity || *intensity < 0.0 || !buffer || *buffer < 0.0 || !tol || !marks || !response || d <= 0) {
    return out;
  }
  try {
    ShotNoiseModel probe(*intensity, *marks, *response, d, *buffer);
    const double resolved = probe.resolved_buffer(*tol);
    out.model.emplace(*intensity, *marks, *response, d, resolved);
    out.truncation_tol = *tol;
    out.normalized = {{"type", "shot_noise"},
                      {"intensity", *intensity},
                      {"marks", marks_norm},
                      {"response",
                       {{"kind", response->kind == ResponseFunction::Kind::exp_decay ? "exp_decay" : "capped_power"},
                        {"amplitude", response->amplitude},
                        {"rate", response->rate}}},
                      {"buffer", resolved},
                      {"truncation_tol", *tol}};
  } catch (const TruncationError& e) {
    rd.fail("/field/buffer", std::string(e.what()) + " (required buffer " + std::to_string(e.required_buffer()) + ")");
  } catch (const std::invalid_argument& e) {
    rd.fail("/field", e.what());
  }
  return out;
}

std::optional<CovMatrix> read_matrix(Reader& rd, const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) {
    rd.fail(path, "must be a square array of rows");
    return std::nullopt;
  }
  const std::size_t r = v.size();
  std::vector<double> e;
  for (std::size_t l = 0; l < r; ++l) {
    auto row = rd.numbers(v[l], path + "/" + std::to_string(l));
    if (!row) return std::nullopt;
    if (row->size() != r) {
      rd.fail(path + "/" + std::to_string(l), "row length must equal the number of rows");
      return std::nullopt;
    }
    e.insert(e.end(), row->begin(), row->end());
  }
  try {
    return CovMatrix(r, std::move(e), Provenance::theoretical);
  } catch (const std::invalid_argument& ex) {
    rd.fail(path, ex.what());
    return std::nullopt;
  }
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

ConfigResult validate_config(const json& doc) {
  Reader rd;
  ConfigResult result;
  if (!doc.is_object()) {
    result.errors.emplace_back("/: configuration must be a JSON object");
    return result;
  }
  rd.unknown_keys(doc, "",
                  {"field", "grid", "thresholds", "replications", "seed", "subwindow_edge", "normalization",
                   "quadrature", "threads", "tail_samples", "sigma", "window_growth"});

  // Grid.
  std::optional<GridSpec> grid;
  json grid_norm;
  int d = 0;
  const json* g = rd.find(doc, "grid");
  if (!g || !g->is_object()) {
    rd.fail("/grid", "required object is missing");
  } else {
    rd.unknown_keys(*g, "/grid", {"sides", "mesh", "origin"});
    std::optional<std::vector<double>> sides;
    if (const json* s = rd.find(*g, "sides")) {
      sides = rd.numbers(*s, "/grid/sides");
    } else {
      rd.fail("/grid/sides", "required array is missing");
    }
    const auto mesh = rd.positive(*g, "mesh", "/grid/mesh", 1.0);
    std::optional<std::vector<double>> origin;
    if (const json* o = rd.find(*g, "origin")) {
      origin = rd.numbers(*o, "/grid/origin");
    } else if (sides) {
      origin = std::vector<double>(sides->size(), 0.0);
    }
    if (sides && (sides->size() < 1 || sides->size() > 3)) {
      rd.fail("/grid/sides", "dimension must be 1, 2 or 3");
    } else if (sides && mesh && origin) {
      if (origin->size() != sides->size()) {
        rd.fail("/grid/origin", "must have one coordinate per side");
      } else {
        try {
          grid.emplace(*sides, *mesh, *origin);
          d = grid->dimension();
          grid_norm = {{"sides", *sides}, {"mesh", *mesh}, {"origin", *origin}};
        } catch (const std::invalid_argument& e) {
          rd.fail("/grid", e.what());
        }
      }
    }
  }

  // Field model.
  std::optional<CovarianceModel> gaussian;
  std::optional<ShotNoiseModel> shot;
  double trunc_tol = ShotNoiseModel::kDefaultTruncation;
  json field_norm;
  const json* f = rd.find(doc, "field");
  if (!f || !f->is_object()) {
    rd.fail("/field", "required object is missing");
  } else {
    const auto type = rd.string(*f, "type", "/field/type", std::nullopt);
    if (type == "gaussian") {
      rd.unknown_keys(*f, "/field", {"type", "covariance"});
      auto part = read_gaussian(rd, *f, d);
      gaussian = part.model;
      field_norm = part.normalized;
    } else if (type == "shot_noise") {
      auto part = read_shot_noise(rd, *f, d);
      shot = part.model;
      trunc_tol = part.truncation_tol;
      field_norm = part.normalized;
    } else if (type) {
      rd.fail("/field/type", "unknown field type '" + *type + "' (expected gaussian or shot_noise)");
    }
  }

  // Thresholds.
  std::optional<ThresholdVector> thresholds;
  if (const json* t = rd.find(doc, "thresholds")) {
    if (auto levels = rd.numbers(*t, "/thresholds")) {
      try {
        thresholds.emplace(*levels);
      } catch (const std::invalid_argument& e) {
        rd.fail("/thresholds", e.what());
      }
    }
  } else {
    rd.fail("/thresholds", "required array is missing");
  }

  const auto reps = rd.unsigned_int(doc, "replications", "/replications", 100);
  if (reps && *reps < 2) rd.fail("/replications", "must be at least 2");
  const auto seed = rd.unsigned_int(doc, "seed", "/seed", 0);
  const auto threads = rd.unsigned_int(doc, "threads", "/threads", 1);
  const auto tail_samples = rd.unsigned_int(doc, "tail_samples", "/tail_samples", 20000);
  if (tail_samples && *tail_samples < 2) rd.fail("/tail_samples", "must be at least 2");

  const auto mode_name = rd.string(doc, "normalization", "/normalization", "theoretical_sigma");
  std::optional<NormalizationMode> mode;
  if (mode_name == "theoretical_sigma") {
    mode = NormalizationMode::theoretical_sigma;
  } else if (mode_name == "self_normalized") {
    mode = NormalizationMode::self_normalized;
  } else if (mode_name) {
    rd.fail("/normalization", "must be 'theoretical_sigma' or 'self_normalized'");
  }

  QuadratureSpec quad;
  bool quad_ok = true;
  if (const json* q = rd.find(doc, "quadrature")) {
    rd.unknown_keys(*q, "/quadrature", {"abs_tol", "rel_tol", "max_subdivisions", "cutoff"});
    const auto a = rd.positive(*q, "abs_tol", "/quadrature/abs_tol", quad.abs_tol);
    const auto r = rd.positive(*q, "rel_tol", "/quadrature/rel_tol", quad.rel_tol);
    const auto n = rd.unsigned_int(*q, "max_subdivisions", "/quadrature/max_subdivisions", quad.max_subdivisions);
    const auto c = rd.string(*q, "cutoff", "/quadrature/cutoff", "analytic_support");
    if (n && *n < 1) rd.fail("/quadrature/max_subdivisions", "must be at least 1");
    if (c && *c != "analytic_support" && *c != "tolerance_tail") {
      rd.fail("/quadrature/cutoff", "must be 'analytic_support' or 'tolerance_tail'");
    }
    quad_ok = a && r && n && *n >= 1 && c && (*c == "analytic_support" || *c == "tolerance_tail");
    if (quad_ok) {
      quad.abs_tol = *a;
      quad.rel_tol = *r;
      quad.max_subdivisions = *n;
      quad.cutoff = *c == "analytic_support" ? CutoffPolicy::analytic_support : CutoffPolicy::tolerance_tail;
    }
  }

  std::optional<CovMatrix> sigma;
  if (const json* s = rd.find(doc, "sigma")) {
    sigma = read_matrix(rd, *s, "/sigma");
    if (sigma && thresholds && sigma->order() != thresholds->size()) {
      rd.fail("/sigma", "order must equal the number of thresholds");
    }
  }

  std::vector<std::vector<double>> growth;
  if (const json* w = rd.find(doc, "window_growth")) {
    if (!w->is_array()) {
      rd.fail("/window_growth", "must be an array of side arrays");
    } else {
      for (std::size_t i = 0; i < w->size(); ++i) {
        if (auto s = rd.numbers((*w)[i], "/window_growth/" + std::to_string(i))) growth.push_back(*s);
      }
      if (growth.size() == w->size()) {
        try {
          validate_window_growth(growth);
          for (const auto& s : growth) {
            if (static_cast<int>(s.size()) != d) throw std::invalid_argument("window dimension differs from the grid");
          }
        } catch (const std::invalid_argument& e) {
          rd.fail("/window_growth", e.what());
        }
      }
    }
  }

  // Subwindow edge: absent selects the heuristic, null disables it.
  std::optional<double> edge;
  bool edge_ok = true;
  const json* e = rd.find(doc, "subwindow_edge");
  if (e && e->is_null()) {
    if (mode == NormalizationMode::self_normalized) {
      rd.fail("/subwindow_edge", "self_normalized mode requires a subwindow edge");
    }
  } else if (e) {
    edge = rd.positive(doc, "subwindow_edge", "/subwindow_edge", std::nullopt);
    edge_ok = edge.has_value();
  }

  if (shot && mode == NormalizationMode::theoretical_sigma && !doc.contains("sigma")) {
    rd.fail("/sigma", "theoretical_sigma normalization of a shot-noise field needs a supplied sigma matrix");
  }

  if (!rd.errors.empty() || !grid || !thresholds || !(gaussian || shot) || !mode || !quad_ok || !edge_ok) {
    if (rd.errors.empty()) rd.fail("/", "configuration incomplete");
    result.errors = std::move(rd.errors);
    return result;
  }

  ExperimentConfig cfg;
  cfg.gaussian = gaussian;
  cfg.shot_noise = shot;
  cfg.grid = *grid;
  cfg.thresholds = *thresholds;
  cfg.replications = *reps;
  cfg.base_seed = *seed;
  cfg.mode = *mode;
  cfg.quad = quad;
  cfg.threads = *threads;
  cfg.tail_samples = *tail_samples;
  cfg.supplied_sigma = sigma;
  if (!e) edge = default_subwindow_edge(correlation_range(cfg), grid->mesh());
  cfg.subwindow_edge = edge;
  if (edge) {
    try {
      (void)make_tiling(*grid, *edge);
    } catch (const std::invalid_argument& ex) {
      result.errors.push_back(std::string("/subwindow_edge: ") + ex.what());
      return result;
    }
  }
  try {
    cfg.validate();
  } catch (const std::invalid_argument& ex) {
    result.errors.push_back(std::string("/: ") + ex.what());
    return result;
  }

  json norm = {{"field", field_norm},
               {"grid", grid_norm},
               {"thresholds", thresholds->levels()},
               {"replications", *reps},
               {"seed", *seed},
               {"subwindow_edge", edge ? json(*edge) : json(nullptr)},
               {"normalization", *mode_name},
               {"quadrature",
                {{"abs_tol", quad.abs_tol},
                 {"rel_tol", quad.rel_tol},
                 {"max_subdivisions", quad.max_subdivisions},
                 {"cutoff", quad.cutoff == CutoffPolicy::analytic_support ? "analytic_support" : "tolerance_tail"}}},
               {"threads", *threads},
               {"tail_samples", *tail_samples}};
  if (sigma) {
    json rows = json::array();
    for (std::size_t l = 0; l < sigma->order(); ++l) {
      json row = json::array();
      for (std::size_t k = 0; k < sigma->order(); ++k) row.push_back((*sigma)(l, k));
      rows.push_back(row);
    }
    norm["sigma"] = rows;
  }
  if (!growth.empty()) norm["window_growth"] = growth;

  result.config = ValidatedConfig{std::move(cfg), std::move(norm), std::move(growth), trunc_tol};
  return result;
}

ConfigResult validate_config_file(const std::filesystem::path& path) {
  ConfigResult result;
  std::ifstream in(path);
  if (!in) {
    result.errors.push_back(path.string() + ": cannot open configuration file");
    return result;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    result.errors.push_back(path.string() + ": configuration file is empty");
    return result;
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    result.errors.push_back(path.string() + ": " + e.what());
    return result;
  }
  return validate_config(doc);
}

ValidatedConfig load_config(const json& doc) {
  ConfigResult r = validate_config(doc);
  if (!r.ok()) throw ConfigError(std::move(r.errors));
  return std::move(*r.config);
}

void apply_overrides(json& doc, const ConfigOverrides& o) {
  if (!doc.is_object()) return;
  if (o.seed) doc["seed"] = *o.seed;
  if (o.replications) doc["replications"] = *o.replications;
  if (o.threads) doc["threads"] = *o.threads;
  if (o.edge) doc["subwindow_edge"] = *o.edge;
  if (o.thresholds) doc["thresholds"] = *o.thresholds;
  if (o.grid) {
    std::vector<double> sides = *o.grid;
    if (sides.size() == 1 && doc.contains("grid") && doc["grid"].contains("sides") &&
        doc["grid"]["sides"].is_array() && !doc["grid"]["sides"].empty()) {
      sides.assign(doc["grid"]["sides"].size(), sides[0]);
    }
    if (!doc.contains("grid") || !doc["grid"].is_object()) doc["grid"] = json::object();
    doc["grid"]["sides"] = sides;
    if (doc["grid"].contains("origin") && doc["grid"]["origin"].is_array() &&
        doc["grid"]["origin"].size() != sides.size()) {
      doc["grid"]["origin"] = std::vector<double>(sides.size(), 0.0);
    }
  }
}

std::uint64_t config_hash(const json& normalized) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : normalized.dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

nlohmann::json make_manifest(const ValidatedConfig& cfg, const std::string& command) {
  std::ostringstream hash;
  hash << std::hex << std::setfill('0') << std::setw(16) << config_hash(cfg.normalized);
  return {{"command", command},
          {"config_hash", hash.str()},
          {"seed", cfg.experiment.base_seed},
          {"config", cfg.normalized},
          {"versions",
           {{"exclt", "1.0.0"},
            {"compiler", __VERSION__},
            {"cxx_standard", static_cast<long>(__cplusplus)},
            {"boost", BOOST_LIB_VERSION},
            {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                          std::to_string(EIGEN_MINOR_VERSION)},
            {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                         std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
}

}  // namespace exclt
