#include "exclt/gaussian_simulation.hpp"

#include <fftw3.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <random>
#include <sstream>

namespace exclt {

namespace {

// FFTW planning is not thread safe; execution with new-array execute is.
std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanPtr = std::unique_ptr<fftw_plan_s, PlanDeleter>;

PlanPtr make_plan(const std::vector<std::size_t>& sizes, fftw_complex* in, fftw_complex* out) {
  std::vector<int> n(sizes.begin(), sizes.end());
  std::lock_guard lock(fftw_planner_mutex());
  fftw_plan p = fftw_plan_dft(static_cast<int>(n.size()), n.data(), in, out, FFTW_FORWARD,
                              FFTW_ESTIMATE);
  if (p == nullptr) throw SimulationError("FFTW failed to create a plan");
  return PlanPtr(p);
}

std::size_t product(const std::vector<std::size_t>& v) {
  std::size_t p = 1;
  for (std::size_t x : v) p *= x;
  return p;
}

}  // namespace

struct GaussianSampler::Impl {
  CovarianceModel model;
  GridSpec spec;
  SamplerMethod method = SamplerMethod::circulant_embedding;
  std::vector<std::size_t> embedding;
  int doublings = 0;
  double min_rel_eigen = 0.0;

  // Circulant path: sqrt(lambda / M) on the embedding lattice.
  std::vector<double> sqrt_eigen;
  PlanPtr plan;

  // Dense path: C = P^T L D L^T P.
  Eigen::MatrixXd dense_factor;  // L * sqrt(D)
  Eigen::Transpositions<Eigen::Dynamic> perm;

  Impl(const CovarianceModel& m, const GridSpec& s) : model(m), spec(s) {}

  // Returns the most negative relative eigenvalue; fills sqrt_eigen.
  double try_embedding(const std::vector<std::size_t>& sizes) {
    const std::size_t total = product(sizes);
    const std::size_t d = sizes.size();
    FftwBuffer in(total);
    FftwBuffer out(total);
    std::vector<std::size_t> idx(d, 0);
    std::vector<double> lag(d);
    for (std::size_t lin = 0; lin < total; ++lin) {
      std::size_t rem = lin;
      for (std::size_t k = d; k-- > 0;) {
        idx[k] = rem % sizes[k];
        rem /= sizes[k];
        const std::size_t wrapped = std::min(idx[k], sizes[k] - idx[k]);
        lag[k] = static_cast<double>(wrapped) * spec.mesh();
      }
      in.data[lin][0] = model.evaluate(lag);
      in.data[lin][1] = 0.0;
    }
    PlanPtr p = make_plan(sizes, in.data, out.data);
    fftw_execute(p.get());
    double max_eig = 0.0;
    double min_eig = 0.0;
    for (std::size_t i = 0; i < total; ++i) {
      max_eig = std::max(max_eig, out.data[i][0]);
      min_eig = std::min(min_eig, out.data[i][0]);
    }
    const double rel = max_eig > 0.0 ? min_eig / max_eig : -1.0;
    sqrt_eigen.resize(total);
    const double scale = 1.0 / static_cast<double>(total);
    for (std::size_t i = 0; i < total; ++i) {
      sqrt_eigen[i] = std::sqrt(std::max(out.data[i][0], 0.0) * scale);
    }
    return rel;
  }

  void build_dense() {
    const std::size_t n = spec.point_count();
    const std::size_t d = static_cast<std::size_t>(spec.dimension());
    Eigen::MatrixXd cov(n, n);
    std::vector<std::size_t> a(d), b(d);
    std::vector<double> lag(d);
    for (std::size_t i = 0; i < n; ++i) {
      spec.multi_index(i, a);
      for (std::size_t j = 0; j <= i; ++j) {
        spec.multi_index(j, b);
        for (std::size_t k = 0; k < d; ++k) {
          lag[k] = (static_cast<double>(a[k]) - static_cast<double>(b[k])) * spec.mesh();
        }
        cov(i, j) = cov(j, i) = model.evaluate(lag);
      }
    }
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    if (ldlt.info() != Eigen::Success) throw SimulationError("dense LDLT factorization failed");
    Eigen::VectorXd diag = ldlt.vectorD().cwiseMax(0.0).cwiseSqrt();
    dense_factor = Eigen::MatrixXd(ldlt.matrixL()) * diag.asDiagonal();
    perm = ldlt.transpositionsP();
    method = SamplerMethod::dense_factorization;
  }
};

GaussianSampler::GaussianSampler(const CovarianceModel& model, const GridSpec& spec,
                                 const SimulationOptions& options)
    : impl_(std::make_unique<Impl>(model, spec)) {
  if (model.dimension() != spec.dimension()) {
    throw std::invalid_argument("gaussian sampler: model dimension " +
                                std::to_string(model.dimension()) + " != grid dimension " +
                                std::to_string(spec.dimension()));
  }
  const bool dense_ok = spec.point_count() <= options.dense_limit;
  if (options.force_dense) {
    if (!dense_ok) {
      throw SimulationError("dense factorization requested for " +
                            std::to_string(spec.point_count()) + " points, limit is " +
                            std::to_string(options.dense_limit));
    }
    impl_->build_dense();
    return;
  }

  std::vector<std::size_t> sizes;
  for (std::size_t n : spec.counts()) sizes.push_back(2 * (n - 1));
  const std::vector<std::size_t> minimal = sizes;
  double rel = 0.0;
  for (int attempt = 0; attempt <= options.max_padding_doublings; ++attempt) {
    rel = impl_->try_embedding(sizes);
    if (rel >= -options.negative_tolerance) {
      impl_->embedding = sizes;
      impl_->doublings = attempt;
      impl_->min_rel_eigen = rel;
      FftwBuffer scratch_in(product(sizes));
      FftwBuffer scratch_out(product(sizes));
      impl_->plan = make_plan(sizes, scratch_in.data, scratch_out.data);
      return;
    }
    if (attempt < options.max_padding_doublings) {
      for (auto& s : sizes) s *= 2;
    }
  }
  impl_->sqrt_eigen.clear();
  if (dense_ok) {
    impl_->build_dense();
    return;
  }
  std::ostringstream msg;
  msg << "gaussian simulation failed: circulant embedding has relative eigenvalue " << rel
      << " below -" << options.negative_tolerance << " (minimal embedding";
  for (std::size_t s : minimal) msg << ' ' << s;
  msg << ", " << options.max_padding_doublings << " doublings up to";
  for (std::size_t s : sizes) msg << ' ' << s;
  msg << "); dense factorization unavailable for " << spec.point_count()
      << " points (limit " << options.dense_limit << ")";
  throw SimulationError(msg.str());
}

GaussianSampler::~GaussianSampler() = default;
GaussianSampler::GaussianSampler(GaussianSampler&&) noexcept = default;
GaussianSampler& GaussianSampler::operator=(GaussianSampler&&) noexcept = default;

SamplerMethod GaussianSampler::method() const noexcept { return impl_->method; }
const std::vector<std::size_t>& GaussianSampler::embedding_sizes() const noexcept {
  return impl_->embedding;
}
int GaussianSampler::padding_doublings() const noexcept { return impl_->doublings; }
double GaussianSampler::min_relative_eigenvalue() const noexcept { return impl_->min_rel_eigen; }

GridField GaussianSampler::sample(std::uint64_t seed) const {
  const Impl& s = *impl_;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t n = s.spec.point_count();
  std::vector<double> values(n);
  const double mean = s.model.mean();

  if (s.method == SamplerMethod::dense_factorization) {
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = normal(rng);
    Eigen::VectorXd x = s.dense_factor * z;
    x = s.perm.transpose() * x;
    for (std::size_t i = 0; i < n; ++i) values[i] = mean + x[static_cast<Eigen::Index>(i)];
    return GridField(s.spec, std::move(values), s.model.describe(), seed);
  }

  const std::size_t total = product(s.embedding);
  FftwBuffer in(total);
  FftwBuffer out(total);
  for (std::size_t i = 0; i < total; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    in.data[i][0] = s.sqrt_eigen[i] * re;
    in.data[i][1] = s.sqrt_eigen[i] * im;
  }
  fftw_execute_dft(s.plan.get(), in.data, out.data);

  // Restrict the embedding lattice to the grid; real part only.
  const std::size_t d = s.embedding.size();
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t lin = 0; lin < n; ++lin) {
    s.spec.multi_index(lin, idx);
    std::size_t e = 0;
    for (std::size_t k = 0; k < d; ++k) e = e * s.embedding[k] + idx[k];
    values[lin] = mean + out.data[e][0];
  }
  return GridField(s.spec, std::move(values), s.model.describe(), seed);
}

GridField simulate_gaussian(const CovarianceModel& model, const GridSpec& spec, std::uint64_t seed,
                            const SimulationOptions& options) {
  return GaussianSampler(model, spec, options).sample(seed);
}

}  // namespace exclt
