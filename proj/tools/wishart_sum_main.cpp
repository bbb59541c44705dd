// Command-line front end: evaluates the analytic eigenvalue densities of
// H = AA^H + BB^H, runs the Monte Carlo sampler, and scores them against
// each other. See README.md for the file formats.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wishartsum/analytic.hpp"
#include "wishartsum/ensemble.hpp"
#include "wishartsum/errors.hpp"
#include "wishartsum/quadrature.hpp"
#include "wishartsum/sampler.hpp"
#include "wishartsum/specfun.hpp"

namespace {

using namespace wishartsum;

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
  static LogLevel level = [] {
    const char* env = std::getenv("WISHART_SUM_LOG");
    std::string v = env ? env : "error";
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::error;
  }();
  return level;
}

void log_info(const std::string& msg) {
  if (log_level() >= LogLevel::info) std::cerr << "[info] " << msg << "\n";
}

void log_debug(const std::string& msg) {
  if (log_level() >= LogLevel::debug) std::cerr << "[debug] " << msg << "\n";
}

struct GridSpec {
  double min = 0.0;
  double max = 0.0;
  int points = 0;
};

// "min:max:points", inclusive endpoints.
GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  char colon1 = 0, colon2 = 0;
  std::istringstream is(text);
  if (!(is >> g.min >> colon1 >> g.max >> colon2 >> g.points) || colon1 != ':' ||
      colon2 != ':' || !is.eof()) {
    throw std::invalid_argument("grid must be min:max:points");
  }
  if (g.min < 0.0 || g.max <= g.min || g.points < 2) {
    throw std::invalid_argument("grid requires min >= 0, max > min, points >= 2");
  }
  return g;
}

std::vector<double> expand_grid(const GridSpec& g) {
  std::vector<double> out(g.points);
  for (int i = 0; i < g.points; ++i) {
    out[i] = g.min + (g.max - g.min) * double(i) / double(g.points - 1);
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open output file " + path);
  out << content;
}

// Everything a subcommand needs, resolved from flags.
struct RunManifest {
  std::string params_path;
  std::string grid_text;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 1;
  int workers = 1;
  std::string bins = "auto";
  std::string output;
};

SampleConfig make_sample_config(const EnsembleParams& params, const RunManifest& manifest) {
  SampleConfig config;
  config.num_samples = manifest.samples;
  config.seed = manifest.seed;
  config.workers = manifest.workers;
  if (manifest.bins != "auto") {
    int nbins = 0;
    try {
      size_t used = 0;
      nbins = std::stoi(manifest.bins, &used);
      if (used != manifest.bins.size()) throw std::invalid_argument(manifest.bins);
    } catch (const std::exception&) {
      throw std::invalid_argument("--bins must be an integer or 'auto'");
    }
    if (nbins < 1) throw std::invalid_argument("--bins must be positive");
    double upper = analytic::lambda_max(params);
    config.bin_edges.resize(nbins + 1);
    for (int i = 0; i <= nbins; ++i) {
      config.bin_edges[i] = upper * double(i) / nbins;
    }
  }
  return config;
}

int cmd_marginal(const RunManifest& manifest) {
  EnsembleParams params = ensemble::params_from_json_file(manifest.params_path);
  std::vector<double> grid = expand_grid(parse_grid(manifest.grid_text));
  log_info("evaluating marginal density at " + std::to_string(grid.size()) + " points");
  DensityCurve curve = analytic::marginal_curve(params, grid);
  std::ostringstream os;
  analytic::write_csv(curve, os);
  write_file(manifest.output, os.str());
  return 0;
}

int cmd_jpdf(const RunManifest& manifest) {
  EnsembleParams params = ensemble::params_from_json_file(manifest.params_path);
  if (params.n != 2) {
    std::cerr << "jpdf requires n=2\n";
    return 1;
  }
  std::vector<double> grid = expand_grid(parse_grid(manifest.grid_text));
  JointDensityGrid jdg = analytic::joint_grid(params, grid);
  std::ostringstream os;
  analytic::write_csv(jdg, os);
  write_file(manifest.output, os.str());
  return 0;
}

int cmd_sample(const RunManifest& manifest) {
  EnsembleParams params = ensemble::params_from_json_file(manifest.params_path);
  SampleConfig config = make_sample_config(params, manifest);
  log_info("sampling " + std::to_string(config.num_samples) + " spectra with " +
           std::to_string(config.workers) + " worker(s)");
  SpectrumHistogram hist = sampler::run(params, config);
  std::ostringstream os;
  sampler::write_csv(hist, os);
  write_file(manifest.output, os.str());
  return 0;
}

int cmd_compare(const RunManifest& manifest) {
  EnsembleParams params = ensemble::params_from_json_file(manifest.params_path);
  SampleConfig config = make_sample_config(params, manifest);
  SpectrumHistogram hist = sampler::run(params, config);

  double upper = analytic::lambda_max(params);
  int points = std::max<int>(1001, 4 * int(hist.counts.size()) + 1);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = upper * double(i) / (points - 1);
  DensityCurve curve = analytic::marginal_curve(params, grid);

  ComparisonReport report = sampler::compare(hist, curve);
  write_file(manifest.output, sampler::report_to_json(report) + "\n");
  log_info("compare: max residual " + std::to_string(report.max_abs_residual) + ", p-value " +
           std::to_string(report.p_value));
  bool ok = report.p_value >= 1e-3 && report.max_abs_residual < 5.0;
  return ok ? 0 : 2;
}

// ---- self-test battery -------------------------------------------------

bool check_normalization(const EnsembleParams& params) {
  analytic::MarginalEvaluator eval(params, ensemble::detect_clusters(params));
  double integral = analytic::integrate_density(
      params, [&](double l) { return l == 0.0 ? 0.0 : eval(l); });
  double err = std::fabs(integral - 1.0);
  std::printf("%s normalization: integral of p = %.12f (|err| = %.2e, tol 1e-6)\n",
              err <= 1e-6 ? "PASS" : "FAIL", integral, err);
  return err <= 1e-6;
}

bool check_mean(const EnsembleParams& params) {
  double mean = analytic::mean_eigenvalue(params);
  double sum_b = 0.0;
  for (double s : params.sigma_b) sum_b += s;
  double expected = (params.n_a * params.n * params.sigma_a + params.n_b * sum_b) / params.n;
  double err = std::fabs(mean / expected - 1.0);
  std::printf("%s mean:          first moment = %.9f vs identity %.9f (rel err %.2e, tol 1e-6)\n",
              err <= 1e-6 ? "PASS" : "FAIL", mean, expected, err);
  return err <= 1e-6;
}

bool check_kummer() {
  double worst = 0.0;
  for (double a : {1.0, 2.0, 5.0}) {
    for (int db = 1; db <= 8; ++db) {
      double b = a + db;
      for (int iz = 0; iz <= 20; ++iz) {
        double z = -50.0 + 100.0 * iz / 20.0;
        double lhs = specfun::hyp1f1(a, b, z);
        double rhs = std::exp(z) * specfun::hyp1f1(b - a, b, -z);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(lhs));
      }
    }
  }
  std::printf("%s kummer:        max relative residual %.2e (tol 1e-10)\n",
              worst <= 1e-10 ? "PASS" : "FAIL", worst);
  return worst <= 1e-10;
}

bool check_laplace_transform() {
  // integral_0^inf t^mu e^{-st} 1F1(a;b;ct) dt = Gamma(mu+1)/s^{mu+1} 2F1(a, mu+1; b; c/s)
  std::mt19937 gen(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    double mu = 5.0 * unif(gen);
    double a = 0.5 + 4.0 * unif(gen);
    double b = a + 0.5 + 4.0 * unif(gen);
    double c = -2.0 + 3.0 * unif(gen);
    double s = std::max(0.0, c) + 0.5 + 2.0 * unif(gen);
    double rate = s - std::max(0.0, c);
    double upper = 1.0;
    while (specfun::gamma_q(mu + 1.0, rate * upper) > 1e-13) upper *= 1.5;
    double integral = quadrature::integrate_to_tolerance(
        [&](double t) {
          return t == 0.0 ? 0.0
                          : std::exp(mu * std::log(t) - s * t) * specfun::hyp1f1(a, b, c * t);
        },
        0.0, upper, 1e-10);
    double closed = std::exp(std::lgamma(mu + 1.0) - (mu + 1.0) * std::log(s)) *
                    specfun::hyp2f1(a, mu + 1.0, b, c / s);
    worst = std::max(worst, std::fabs(integral - closed) / std::fabs(closed));
  }
  std::printf("%s laplace:       max relative residual %.2e over 10 draws (tol 1e-8)\n",
              worst <= 1e-8 ? "PASS" : "FAIL", worst);
  return worst <= 1e-8;
}

bool check_degenerate_limit(const EnsembleParams& params) {
  // Collapse sigma_B to its mean, then approach that degenerate point from
  // perturbed non-degenerate parameters, Richardson-extrapolated in epsilon.
  double mean_b = 0.0;
  for (double s : params.sigma_b) mean_b += s;
  mean_b /= params.n;

  EnsembleParams degen = params;
  degen.sigma_b.assign(params.n, mean_b);
  DegeneracyProfile profile;
  profile.clusters.push_back({mean_b, params.n});

  auto perturbed = [&](double eps) {
    EnsembleParams p = params;
    for (int k = 0; k < params.n; ++k) p.sigma_b[k] = mean_b * (1.0 + eps * k);
    return p;
  };

  // An n-fold cluster suppresses the pivots like eps^{n-1}/(n-1)!; keep the
  // smallest epsilon above the evaluator's conditioning floor.
  double eps_min = std::max(1e-3, std::pow(10.0, -18.0 / std::max(1, params.n - 1)));

  std::vector<double> lambdas;
  double peak = 0.0;
  double upper = analytic::lambda_max(degen);
  analytic::MarginalEvaluator exact(degen, profile);
  for (int i = 1; i <= 8; ++i) lambdas.push_back(upper * i / 10.0);
  double worst = 0.0;
  std::vector<double> vals(lambdas.size());
  for (size_t i = 0; i < lambdas.size(); ++i) {
    vals[i] = exact(lambdas[i]);
    peak = std::max(peak, vals[i]);
  }
  for (size_t i = 0; i < lambdas.size(); ++i) {
    double v1 = analytic::marginal_pdf(perturbed(4.0 * eps_min), lambdas[i]);
    double v2 = analytic::marginal_pdf(perturbed(2.0 * eps_min), lambdas[i]);
    double v3 = analytic::marginal_pdf(perturbed(eps_min), lambdas[i]);
    double extrap = (4.0 * (2.0 * v3 - v2) - (2.0 * v2 - v1)) / 3.0;
    worst = std::max(worst, std::fabs(extrap - vals[i]) / peak);
  }
  std::printf("%s degenerate:    Richardson limit residual %.2e (tol 1e-3)\n",
              worst <= 1e-3 ? "PASS" : "FAIL", worst);
  return worst <= 1e-3;
}

int cmd_check(const RunManifest& manifest) {
  EnsembleParams params = ensemble::params_from_json_file(manifest.params_path);
  bool ok = true;
  ok &= check_normalization(params);
  ok &= check_mean(params);
  ok &= check_kummer();
  ok &= check_laplace_transform();
  ok &= check_degenerate_limit(params);
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Eigenvalue densities of sums of two complex Wishart matrices"};
  app.require_subcommand(1);

  RunManifest manifest;

  auto add_common = [&](CLI::App* sub, bool needs_grid, bool needs_sampling) {
    sub->add_option("--params", manifest.params_path, "ensemble parameter JSON file")
        ->required();
    if (needs_grid) {
      sub->add_option("--grid", manifest.grid_text, "evaluation grid min:max:points")
          ->required();
    }
    if (needs_sampling) {
      sub->add_option("--samples", manifest.samples, "number of Monte Carlo samples");
      sub->add_option("--seed", manifest.seed, "RNG seed");
      sub->add_option("--workers", manifest.workers, "worker threads");
      sub->add_option("--bins", manifest.bins, "histogram bins (count or 'auto')");
    }
  };

  CLI::App* marginal = app.add_subcommand("marginal", "write the marginal density curve CSV");
  add_common(marginal, true, false);
  marginal->add_option("-o,--output", manifest.output, "output CSV path")->required();

  CLI::App* jpdf = app.add_subcommand("jpdf", "write the n=2 joint density grid CSV");
  add_common(jpdf, true, false);
  jpdf->add_option("-o,--output", manifest.output, "output CSV path")->required();

  CLI::App* sample = app.add_subcommand("sample", "write a Monte Carlo spectrum histogram CSV");
  add_common(sample, false, true);
  sample->add_option("-o,--output", manifest.output, "output CSV path")->required();

  CLI::App* compare =
      app.add_subcommand("compare", "sample and score against the analytic marginal (JSON)");
  add_common(compare, false, true);
  compare->add_option("-o,--output", manifest.output, "output JSON path")->required();

  CLI::App* check = app.add_subcommand("check", "run the self-test battery");
  add_common(check, false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(marginal)) return cmd_marginal(manifest);
    if (app.got_subcommand(jpdf)) return cmd_jpdf(manifest);
    if (app.got_subcommand(sample)) return cmd_sample(manifest);
    if (app.got_subcommand(compare)) return cmd_compare(manifest);
    if (app.got_subcommand(check)) return cmd_check(manifest);
  } catch (const conditioning_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  log_debug("no subcommand dispatched");
  return 1;
}
