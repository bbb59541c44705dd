#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "wishartsum/eigen_hermitian.hpp"
#include "wishartsum/errors.hpp"
#include "wishartsum/rng.hpp"

using namespace wishartsum;
using cplx = std::complex<double>;

TEST_CASE("philox4x64-10 known-answer vectors") {
  // Reference outputs generated with numpy.random.Philox (which increments
  // the counter before producing a block, hence the +1 on word 0).
  auto r1 = rng::philox4x64({1, 0, 0, 0}, {0, 0});
  CHECK(r1[0] == 0x02f4ba6408e4d89bULL);
  CHECK(r1[1] == 0x3dd62b0b9ca8c5b2ULL);
  CHECK(r1[2] == 0x1c8667a55d902e79ULL);
  CHECK(r1[3] == 0x907d7a052fd5b4dcULL);

  auto r2 = rng::philox4x64({2, 0, 0, 0}, {0, 0});
  CHECK(r2[0] == 0x809bf322883987c3ULL);

  auto r3 = rng::philox4x64({2, 2, 3, 4}, {0xdeadbeefcafebabeULL, 0x0123456789abcdefULL});
  CHECK(r3[0] == 0xe150824107f9e5bfULL);
  CHECK(r3[1] == 0x25383f57b5f82d82ULL);
  CHECK(r3[2] == 0x0f91184e7b15d03cULL);
  CHECK(r3[3] == 0xebc4a0888afafa38ULL);
}

TEST_CASE("gaussian streams are deterministic and independent") {
  rng::GaussianStream a(42, 7);
  rng::GaussianStream b(42, 7);
  rng::GaussianStream c(42, 8);
  bool any_differ = false;
  for (int i = 0; i < 64; ++i) {
    double va = a.next();
    CHECK(va == b.next());
    if (va != c.next()) any_differ = true;
  }
  CHECK(any_differ);
}

TEST_CASE("gaussian moments") {
  rng::GaussianStream s(1234, 0);
  const int n = 1000000;
  double sum = 0.0, sum2 = 0.0, sum3 = 0.0;
  for (int i = 0; i < n; ++i) {
    double x = s.next();
    sum += x;
    sum2 += x * x;
    sum3 += x * x * x;
  }
  double mean = sum / n;
  double var = sum2 / n - mean * mean;
  CHECK(std::fabs(mean) < 5.0 / std::sqrt(double(n)));
  CHECK(std::fabs(var - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::fabs(sum3 / n) < 5.0 * std::sqrt(15.0 / n));
}

TEST_CASE("hermitian eigenvalues: fixed matrices") {
  SUBCASE("2x2 identity") {
    auto ev = hermitian_eigenvalues({1.0, 0.0, 0.0, 1.0}, 2);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(1.0));
  }
  SUBCASE("diagonal") {
    auto ev = hermitian_eigenvalues({3.0, 0.0, 0.0, 1.0}, 2);
    CHECK(ev[0] == doctest::Approx(1.0));
    CHECK(ev[1] == doctest::Approx(3.0));
  }
  SUBCASE("[[2, i], [-i, 2]] has spectrum {1, 3}") {
    std::vector<cplx> h = {cplx(2, 0), cplx(0, 1), cplx(0, -1), cplx(2, 0)};
    auto ev = hermitian_eigenvalues(h, 2);
    CHECK(ev[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ev[1] == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("tridiagonal 3x3 with known spectrum") {
    std::vector<cplx> h = {0, 1, 0, 1, 0, 1, 0, 1, 0};
    auto ev = hermitian_eigenvalues(h, 3);
    CHECK(ev[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-14));
    CHECK(std::fabs(ev[1]) < 1e-14);
    CHECK(ev[2] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  }
  SUBCASE("5x5 identity (fully degenerate)") {
    std::vector<cplx> h(25, 0.0);
    for (int i = 0; i < 5; ++i) h[i * 5 + i] = 2.5;
    for (double ev : hermitian_eigenvalues(h, 5)) CHECK(ev == doctest::Approx(2.5));
  }
}

TEST_CASE("hermitian eigenvalues: trace identities on random matrices") {
  std::mt19937 gen(17);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int n : {2, 3, 5, 9, 16}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<cplx> h(size_t(n) * n);
      for (int i = 0; i < n; ++i) {
        h[size_t(i) * n + i] = normal(gen);
        for (int j = 0; j < i; ++j) {
          cplx v(normal(gen), normal(gen));
          h[size_t(i) * n + j] = v;
          h[size_t(j) * n + i] = std::conj(v);
        }
      }
      double tr = 0.0, tr2 = 0.0;
      for (int i = 0; i < n; ++i) {
        tr += std::real(h[size_t(i) * n + i]);
        for (int j = 0; j < n; ++j) tr2 += std::norm(h[size_t(i) * n + j]);
      }
      auto ev = hermitian_eigenvalues(h, n);
      REQUIRE(int(ev.size()) == n);
      double s1 = 0.0, s2 = 0.0;
      for (size_t i = 0; i < ev.size(); ++i) {
        s1 += ev[i];
        s2 += ev[i] * ev[i];
        if (i > 0) CHECK(ev[i] >= ev[i - 1]);
      }
      double scale = std::max(1.0, std::fabs(tr2));
      CHECK(std::fabs(s1 - tr) <= 1e-12 * scale);
      CHECK(std::fabs(s2 - tr2) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("hermitian eigenvalues: input validation") {
  std::vector<cplx> not_hermitian = {cplx(1, 0), cplx(1, 0), cplx(2, 0), cplx(1, 0)};
  CHECK_THROWS_AS(hermitian_eigenvalues(not_hermitian, 2), std::domain_error);

  std::vector<cplx> imag_diag = {cplx(1, 0.5), cplx(0, 0), cplx(0, 0), cplx(1, 0)};
  CHECK_THROWS_AS(hermitian_eigenvalues(imag_diag, 2), std::domain_error);

  CHECK_THROWS_AS(hermitian_eigenvalues(std::vector<cplx>(4), 3), std::invalid_argument);
  CHECK_THROWS_AS(hermitian_eigenvalues(std::vector<cplx>(65 * 65), 65), std::invalid_argument);
}
