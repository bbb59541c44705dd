#include "wishartsum/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "wishartsum/eigen_hermitian.hpp"
#include "wishartsum/errors.hpp"
#include "wishartsum/kernels/gram.hpp"
#include "wishartsum/specfun.hpp"

namespace wishartsum::sampler {

namespace {

using cplx = std::complex<double>;

void check_config(const SampleConfig& config) {
  if (config.num_samples < 1) {
    throw std::invalid_argument("sampler: num_samples must be >= 1");
  }
  if (config.workers < 1) {
    throw std::invalid_argument("sampler: workers must be >= 1");
  }
  if (!config.bin_edges.empty()) {
    if (config.bin_edges.size() < 2) {
      throw std::invalid_argument("sampler: bin_edges needs at least two entries");
    }
    for (size_t i = 1; i < config.bin_edges.size(); ++i) {
      if (!(config.bin_edges[i] > config.bin_edges[i - 1])) {
        throw std::invalid_argument("sampler: bin_edges must be strictly increasing");
      }
    }
  }
}

// Fills rows of an n x cols complex matrix with CN(0, row_variance) entries;
// consumption order is row-major, two normals per entry.
void fill_complex_gaussian(rng::GaussianStream& stream, cplx* a, int n, int cols,
                           const double* row_stddev_half) {
  for (int i = 0; i < n; ++i) {
    double s = row_stddev_half[i];
    for (int k = 0; k < cols; ++k) {
      double re = s * stream.next();
      double im = s * stream.next();
      a[size_t(i) * cols + k] = cplx(re, im);
    }
  }
}

void bin_eigenvalues(const std::vector<double>& lambdas, SpectrumHistogram& hist) {
  for (double l : lambdas) {
    ++hist.total_eigenvalues;
    hist.sum_lambda += l;
    hist.sum_lambda_sq += l * l;
    if (l < hist.edges.front() || l >= hist.edges.back()) continue;
    size_t bin = size_t(std::upper_bound(hist.edges.begin(), hist.edges.end(), l) -
                        hist.edges.begin()) - 1;
    if (bin < hist.counts.size()) ++hist.counts[bin];
  }
}

// Integral of the piecewise-linear curve over [left, right].
double curve_mass(const DensityCurve& curve, double left, double right) {
  const auto& g = curve.grid;
  const auto& v = curve.values;
  double total = 0.0;
  for (size_t s = 0; s + 1 < g.size(); ++s) {
    double a = std::max(g[s], left);
    double b = std::min(g[s + 1], right);
    if (b <= a) continue;
    double width = g[s + 1] - g[s];
    double va = v[s] + (v[s + 1] - v[s]) * (a - g[s]) / width;
    double vb = v[s] + (v[s + 1] - v[s]) * (b - g[s]) / width;
    total += 0.5 * (va + vb) * (b - a);
  }
  return total;
}

}  // namespace

std::vector<double> sample_spectrum(const EnsembleParams& params, rng::GaussianStream& stream) {
  const int n = params.n;
  static thread_local std::vector<cplx> a, b, h;
  a.resize(size_t(n) * params.n_a);
  b.resize(size_t(n) * params.n_b);
  h.assign(size_t(n) * n, cplx(0.0));

  static thread_local std::vector<double> stddev;
  stddev.assign(n, std::sqrt(params.sigma_a / 2.0));
  fill_complex_gaussian(stream, a.data(), n, params.n_a, stddev.data());
  for (int i = 0; i < n; ++i) stddev[i] = std::sqrt(params.sigma_b[i] / 2.0);
  fill_complex_gaussian(stream, b.data(), n, params.n_b, stddev.data());

  const kernels::KernelInfo& kernel = kernels::selected_gram_kernel();
  kernel.fn(a.data(), n, params.n_a, h.data());
  kernel.fn(b.data(), n, params.n_b, h.data());

  return hermitian_eigenvalues(h, n);  // ascending
}

std::vector<double> auto_bin_edges(const EnsembleParams& params, const SampleConfig& config) {
  const double upper = analytic::lambda_max(params);
  const std::uint64_t pilot_n = std::min<std::uint64_t>(config.num_samples, 10000);

  std::vector<double> values;
  values.reserve(size_t(pilot_n) * params.n);
  for (std::uint64_t i = 0; i < pilot_n; ++i) {
    rng::GaussianStream stream(config.seed, config.first_sample + i);
    for (double l : sample_spectrum(params, stream)) values.push_back(l);
  }
  std::sort(values.begin(), values.end());
  double q1 = values[values.size() / 4];
  double q3 = values[(values.size() * 3) / 4];
  double width = 2.0 * (q3 - q1) / std::cbrt(double(values.size()));

  int bins = 200;
  if (width > 0.0) {
    bins = int(std::lround(upper / width));
  }
  bins = std::clamp(bins, 50, 400);

  std::vector<double> edges(bins + 1);
  for (int i = 0; i <= bins; ++i) edges[i] = upper * double(i) / bins;
  return edges;
}

SpectrumHistogram run(const EnsembleParams& params, const SampleConfig& config) {
  check_config(config);
  std::vector<double> edges = config.bin_edges.empty() ? auto_bin_edges(params, config)
                                                       : config.bin_edges;

  const int workers = int(std::min<std::uint64_t>(config.workers, config.num_samples));
  std::vector<SpectrumHistogram> partial(workers);
  for (auto& h : partial) {
    h.edges = edges;
    h.counts.assign(edges.size() - 1, 0);
  }

  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker_body = [&](int w) {
    try {
      for (std::uint64_t i = w; i < config.num_samples; i += workers) {
        rng::GaussianStream stream(config.seed, config.first_sample + i);
        bin_eigenvalues(sample_spectrum(params, stream), partial[w]);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };

  if (workers == 1) {
    worker_body(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker_body, w);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SpectrumHistogram out = std::move(partial[0]);
  for (int w = 1; w < workers; ++w) out = merge(out, partial[w]);
  return out;
}

SpectrumHistogram merge(const SpectrumHistogram& a, const SpectrumHistogram& b) {
  if (a.edges != b.edges) {
    throw std::invalid_argument("merge: histograms have different bin edges");
  }
  SpectrumHistogram out = a;
  for (size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
  out.total_eigenvalues += b.total_eigenvalues;
  out.sum_lambda += b.sum_lambda;
  out.sum_lambda_sq += b.sum_lambda_sq;
  return out;
}

ComparisonReport compare(const SpectrumHistogram& hist, const DensityCurve& curve) {
  ComparisonReport report;
  if (hist.counts.empty() || hist.total_eigenvalues == 0) return report;

  if (curve.grid.size() < 2 || curve.grid.front() > hist.edges.front() ||
      curve.grid.back() < hist.edges.back()) {
    throw std::invalid_argument("compare: curve does not cover the histogram support");
  }

  const double total = double(hist.total_eigenvalues);
  for (size_t i = 0; i < hist.counts.size(); ++i) {
    ComparisonBin bin;
    bin.left = hist.edges[i];
    bin.right = hist.edges[i + 1];
    const double width = bin.right - bin.left;
    const double prob = curve_mass(curve, bin.left, bin.right);
    const double expected = prob * total;
    const double observed = double(hist.counts[i]);
    bin.observed_density = observed / (total * width);
    bin.expected_density = prob / width;
    bin.residual = expected > 0.0 ? (observed - expected) / std::sqrt(expected) : 0.0;
    if (expected >= 5.0) {
      report.max_abs_residual = std::max(report.max_abs_residual, std::fabs(bin.residual));
      report.chi_square += bin.residual * bin.residual;
      ++report.dof;
    }
    report.bins.push_back(bin);
  }
  report.p_value = report.dof > 0
                       ? specfun::gamma_q(0.5 * report.dof, 0.5 * report.chi_square)
                       : 1.0;
  return report;
}

void write_csv(const SpectrumHistogram& hist, std::ostream& os) {
  os << "bin_left,bin_right,count,density\n";
  const double total = double(hist.total_eigenvalues);
  char buf[128];
  for (size_t i = 0; i < hist.counts.size(); ++i) {
    double width = hist.edges[i + 1] - hist.edges[i];
    double density = total > 0.0 ? double(hist.counts[i]) / (total * width) : 0.0;
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%llu,%.17g\n", hist.edges[i], hist.edges[i + 1],
                  static_cast<unsigned long long>(hist.counts[i]), density);
    os << buf;
  }
}

std::string report_to_json(const ComparisonReport& report) {
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : report.bins) {
    bins.push_back({{"left", b.left},
                    {"right", b.right},
                    {"observed_density", b.observed_density},
                    {"expected_density", b.expected_density},
                    {"residual", b.residual}});
  }
  nlohmann::json doc = {{"bins", bins},
                        {"max_abs_residual", report.max_abs_residual},
                        {"chi_square", report.chi_square},
                        {"dof", report.dof},
                        {"p_value", report.p_value}};
  return doc.dump(2);
}

}  // namespace wishartsum::sampler
