// Acceptance suite: nine go/no-go checks of the analytic densities and the
// Monte Carlo engine on the three reference parameter sets, each printed as
// a single PASS/FAIL line. Exits nonzero on any failure.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "wishartsum/analytic.hpp"
#include "wishartsum/ensemble.hpp"
#include "wishartsum/quadrature.hpp"
#include "wishartsum/sampler.hpp"
#include "wishartsum/specfun.hpp"

using namespace wishartsum;
namespace an = wishartsum::analytic;
namespace ens = wishartsum::ensemble;
namespace smp = wishartsum::sampler;

namespace {

int g_failures = 0;

void report(int criterion, const char* name, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", criterion, name,
              detail.c_str());
  if (!pass) ++g_failures;
}

struct Fixture {
  const char* name;
  EnsembleParams params;
};

std::vector<Fixture> fixtures() {
  return {
      {"fig1", ens::params_from_json_file(std::string(WISHARTSUM_FIXTURE_DIR) + "/fig1.json")},
      {"fig2", ens::params_from_json_file(std::string(WISHARTSUM_FIXTURE_DIR) + "/fig2.json")},
      {"fig3", ens::params_from_json_file(std::string(WISHARTSUM_FIXTURE_DIR) + "/fig3.json")},
  };
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

// 1. Normalization: integral of p = 1 within 1e-6, under 10 s per fixture.
void criterion_normalization() {
  bool pass = true;
  std::ostringstream detail;
  for (const Fixture& f : fixtures()) {
    auto t0 = std::chrono::steady_clock::now();
    an::MarginalEvaluator eval(f.params, ens::detect_clusters(f.params));
    double integral =
        an::integrate_density(f.params, [&](double l) { return l == 0.0 ? 0.0 : eval(l); });
    double dt = elapsed_s(t0);
    bool ok = std::fabs(integral - 1.0) <= 1e-6 && dt < 10.0;
    pass = pass && ok;
    detail << f.name << " |err|=" << fmt("%.2e", std::fabs(integral - 1.0)) << " ("
           << fmt("%.2f", dt) << "s) ";
  }
  report(1, "normalization", pass, detail.str() + "tol 1e-6, budget 10s");
}

// 2. Mean identity within relative 1e-6.
void criterion_mean() {
  bool pass = true;
  std::ostringstream detail;
  for (const Fixture& f : fixtures()) {
    double sum_b = 0.0;
    for (double s : f.params.sigma_b) sum_b += s;
    double expected =
        (f.params.n_a * f.params.n * f.params.sigma_a + f.params.n_b * sum_b) / f.params.n;
    double got = an::mean_eigenvalue(f.params);
    double rel = std::fabs(got / expected - 1.0);
    pass = pass && rel <= 1e-6;
    detail << f.name << " rel=" << fmt("%.2e", rel) << " ";
  }
  report(2, "mean identity", pass, detail.str() + "tol 1e-6 (fig1 expects 23)");
}

// 3. Monte Carlo agreement: 1e5 samples, residual < 4 on bins with
//    expected count >= 50, under 60 s per fixture.
void criterion_monte_carlo() {
  bool pass = true;
  std::ostringstream detail;
  for (const Fixture& f : fixtures()) {
    auto t0 = std::chrono::steady_clock::now();
    SampleConfig config{100000, 20260810, 2, {}, 0};
    SpectrumHistogram hist = smp::run(f.params, config);

    double upper = an::lambda_max(f.params);
    int points = std::max<int>(2001, 4 * int(hist.counts.size()) + 1);
    std::vector<double> grid(points);
    for (int i = 0; i < points; ++i) grid[i] = upper * double(i) / (points - 1);
    DensityCurve curve = an::marginal_curve(f.params, grid);
    ComparisonReport rep = smp::compare(hist, curve);

    double worst = 0.0;
    int gated = 0;
    const double total = double(hist.total_eigenvalues);
    for (const auto& b : rep.bins) {
      double expected_count = b.expected_density * (b.right - b.left) * total;
      if (expected_count >= 50.0) {
        worst = std::max(worst, std::fabs(b.residual));
        ++gated;
      }
    }
    double dt = elapsed_s(t0);
    bool ok = worst < 4.0 && gated > 0 && dt < 60.0;
    pass = pass && ok;
    detail << f.name << " max|z|=" << fmt("%.2f", worst) << " over " << gated << " bins ("
           << fmt("%.1f", dt) << "s) ";
  }
  report(3, "Monte Carlo agreement", pass, detail.str() + "limit 4, budget 60s");
}

// 4. Closed-form anchor: n=1 unit ensemble has p(l) = l e^{-l} to 1e-12.
void criterion_anchor() {
  EnsembleParams p{1, 1, 1, 1.0, {1.0}};
  bool pass = true;
  double worst = 0.0;
  for (double l : {0.1, 1.0, 5.0}) {
    double err = std::fabs(an::marginal_pdf(p, l) - l * std::exp(-l));
    worst = std::max(worst, err);
    pass = pass && err <= 1e-12 * (l * std::exp(-l));
  }
  report(4, "closed-form anchor", pass, fmt("worst |err| %.2e, tol 1e-12 relative", worst));
}

// 5. Equal-covariance reduction vs the Laguerre reference, (3,4,5).
void criterion_equal_covariance() {
  const int n = 3, n_a = 4, n_b = 5;
  const double sigma = 1.0;
  EnsembleParams p{n, n_a, n_b, sigma, {sigma, sigma, sigma}};
  DegeneracyProfile profile;
  profile.clusters.push_back({sigma, n});
  bool pass = true;
  double worst = 0.0;
  for (double l : {0.5, 1.0, 2.0, 4.0, 7.0, 11.0, 16.0}) {
    double got = an::marginal_pdf_degenerate(p, profile, l);
    double want = an::lue_marginal_reference(n, n_a + n_b, sigma, l);
    double err = std::fabs(got - want);
    worst = std::max(worst, err);
    pass = pass && err <= 1e-8;
  }
  report(5, "equal-covariance reduction", pass, fmt("worst |err| %.2e, tol 1e-8", worst));
}

// 6. Degenerate limit: Fig. 3 vs the eps-perturbed non-degenerate marginal,
//    Richardson-extrapolated over eps in {1e-4, 1e-5, 1e-6}.
void criterion_degenerate_limit() {
  EnsembleParams p =
      ens::params_from_json_file(std::string(WISHARTSUM_FIXTURE_DIR) + "/fig3.json");
  DegeneracyProfile profile = ens::detect_clusters(p);
  an::MarginalEvaluator exact(p, profile);

  auto perturbed = [&](double eps) {
    EnsembleParams q = p;
    for (int k = 0; k < p.n; ++k) q.sigma_b[k] = (5.0 / 7.0) * (1.0 + eps * k);
    return q;
  };

  double upper = an::lambda_max(p);
  bool pass = true;
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double l = 0.8 * upper * i / 20.0;
    double v1 = oracle::marginal_nondegenerate(perturbed(1e-4), l);
    double v2 = oracle::marginal_nondegenerate(perturbed(1e-5), l);
    double v3 = oracle::marginal_nondegenerate(perturbed(1e-6), l);
    double limit = oracle::richardson2(v1, v2, v3, 10.0);
    double err = std::fabs(limit - exact(l));
    worst = std::max(worst, err);
    pass = pass && err <= 1e-6;
  }
  report(6, "degenerate limit", pass, fmt("worst |err| %.2e on 20 points, tol 1e-6", worst));
}

// 7. Joint/marginal consistency at n=2 on a 20-point grid.
void criterion_joint_marginal() {
  EnsembleParams p =
      ens::params_from_json_file(std::string(WISHARTSUM_FIXTURE_DIR) + "/fig1.json");
  an::JointEvaluator joint(p, ens::detect_clusters(p));
  an::MarginalEvaluator marginal(p, ens::detect_clusters(p));
  double upper = an::lambda_max(p);
  bool pass = true;
  double worst = 0.0;
  for (int i = 1; i <= 20; ++i) {
    double l1 = 60.0 * i / 20.0;
    double integral = quadrature::panel_gauss_legendre(
        [&](double l2) { return l2 <= 0.0 ? 0.0 : joint({l1, l2}); }, 0.0, upper, 24);
    double err = std::fabs(integral - marginal(l1));
    worst = std::max(worst, err);
    pass = pass && err <= 1e-6;
  }
  report(7, "joint/marginal consistency", pass, fmt("worst |err| %.2e, tol 1e-6", worst));
}

// 8. Special-function identities: Kummer 1e-10, Laplace 1e-8, derivative
//    relations vs finite differences 1e-6.
void criterion_identities() {
  double kummer_worst = 0.0;
  for (double a : {1.0, 2.0, 5.0}) {
    for (int db = 1; db <= 8; ++db) {
      double b = a + db;
      for (int iz = 0; iz <= 25; ++iz) {
        double z = -50.0 + 4.0 * iz;
        double lhs = specfun::hyp1f1(a, b, z);
        double rhs = std::exp(z) * specfun::hyp1f1(b - a, b, -z);
        kummer_worst = std::max(kummer_worst, std::fabs(lhs - rhs) / std::fabs(lhs));
      }
    }
  }

  std::srand(27);
  double laplace_worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    auto unif = [] { return double(std::rand()) / RAND_MAX; };
    double mu = 5.0 * unif();
    double a = 0.5 + 4.0 * unif();
    double b = a + 0.5 + 4.0 * unif();
    double c = -2.0 + 3.0 * unif();
    double s = std::max(0.0, c) + 0.5 + 2.0 * unif();
    double upper = 1.0;
    while (specfun::gamma_q(mu + 1.0, (s - std::max(0.0, c)) * upper) > 1e-13) upper *= 1.5;
    double integral = quadrature::integrate_to_tolerance(
        [&](double t) {
          return t == 0.0 ? 0.0
                          : std::exp(mu * std::log(t) - s * t) * specfun::hyp1f1(a, b, c * t);
        },
        0.0, upper, 1e-10);
    double closed = std::exp(std::lgamma(mu + 1.0) - (mu + 1.0) * std::log(s)) *
                    specfun::hyp2f1(a, mu + 1.0, b, c / s);
    laplace_worst = std::max(laplace_worst, std::fabs(integral - closed) / std::fabs(closed));
  }

  double deriv_worst = 0.0;
  for (int k = 1; k <= 3; ++k) {
    for (double z : {-6.0, -1.2, 0.7, 4.0}) {
      double fd = oracle::fd_derivative([&](double t) { return specfun::hyp1f1(5.0, 15.0, t); },
                                        z, k, 1e-2);
      deriv_worst = std::max(deriv_worst, std::fabs(specfun::hyp1f1_deriv(k, 5.0, 15.0, z) - fd));
    }
    for (double z : {-3.0, -0.8, 0.35}) {
      double fd = oracle::fd_derivative(
          [&](double t) { return specfun::hyp2f1(3.0, 16.0, 15.0, t); }, z, k, 5e-3);
      deriv_worst =
          std::max(deriv_worst, std::fabs(specfun::hyp2f1_deriv(k, 3.0, 16.0, 15.0, z) - fd));
    }
  }

  bool pass = kummer_worst < 1e-10 && laplace_worst < 1e-8 && deriv_worst < 1e-6;
  report(8, "special-function identities", pass,
         fmt("kummer %.2e (1e-10), laplace %.2e (1e-8), derivs %.2e (1e-6)", kummer_worst,
             laplace_worst, deriv_worst));
}

// 9. Determinism: identical seeds give byte-identical CSVs; worker counts
//    1 and 4 give identical histograms.
void criterion_determinism() {
  auto read = [](const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
  };
  std::string base = std::string(WISHARTSUM_CLI_PATH) + " sample --params " +
                     WISHARTSUM_FIXTURE_DIR + "/fig1.json --samples 20000 --seed 3 --bins 150";
  std::string o1 = "/tmp/wishartsum_acc_1.csv";
  std::string o2 = "/tmp/wishartsum_acc_2.csv";
  std::string o3 = "/tmp/wishartsum_acc_3.csv";
  int rc = 0;
  rc |= std::system((base + " --workers 1 -o " + o1).c_str());
  rc |= std::system((base + " --workers 1 -o " + o2).c_str());
  rc |= std::system((base + " --workers 4 -o " + o3).c_str());
  std::string h1 = read(o1);
  bool pass = rc == 0 && !h1.empty() && h1 == read(o2) && h1 == read(o3);
  std::remove(o1.c_str());
  std::remove(o2.c_str());
  std::remove(o3.c_str());
  report(9, "determinism", pass,
         pass ? "reruns and workers {1,4} byte-identical" : "outputs differ");
}

}  // namespace

int main() {
  criterion_normalization();
  criterion_mean();
  criterion_monte_carlo();
  criterion_anchor();
  criterion_equal_covariance();
  criterion_degenerate_limit();
  criterion_joint_marginal();
  criterion_identities();
  criterion_determinism();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
