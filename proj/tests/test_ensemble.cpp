#include <doctest.h>

#include <algorithm>
#include <random>
#include <stdexcept>

#include "wishartsum/ensemble.hpp"

using namespace wishartsum;
namespace ens = wishartsum::ensemble;

namespace {

EnsembleParams fig1() { return {2, 3, 4, 1.0, {4.0, 6.0}}; }

EnsembleParams fig2() {
  return {9, 10, 13, 2.0,
          {4.0 / 17, 1.0 / 2, 5.0 / 3, 2.0 / 7, 6.0 / 5, 10.0 / 29, 5.0 / 16, 9.0 / 11, 4.0}};
}

}  // namespace

TEST_CASE("validate accepts the paper parameter sets") {
  EnsembleParams p1 = ens::validate(fig1());
  CHECK(p1.m() == 5);
  CHECK(p1.alpha() == 3);
  CHECK(p1.gamma() == 6);

  EnsembleParams p2 = ens::validate(fig2());
  CHECK(p2.m() == 14);
  CHECK(p2.alpha() == 5);
  CHECK(p2.gamma() == 15);

  // integer identities
  CHECK(p2.gamma() == p2.alpha() + p2.n_a);
  CHECK(p2.m() + 1 == p2.gamma());
}

TEST_CASE("validate rejections") {
  CHECK_THROWS_AS(ens::validate({3, 2, 5, 1.0, {1.0, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ens::validate({3, 5, 2, 1.0, {1.0, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ens::validate({2, 3, 4, 0.0, {1.0, 1.0}}), std::domain_error);
  CHECK_THROWS_AS(ens::validate({2, 3, 4, -1.0, {1.0, 1.0}}), std::domain_error);
  CHECK_THROWS_AS(ens::validate({2, 3, 4, 1.0, {1.0, -2.0}}), std::domain_error);
  CHECK_THROWS_AS(ens::validate({2, 3, 4, 1.0, {1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ens::validate({2, 3, 4, 1.0, {1.0, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ens::validate({0, 0, 0, 1.0, {}}), std::invalid_argument);
}

TEST_CASE("detect_clusters") {
  SUBCASE("distinct values stay singletons") {
    DegeneracyProfile p = ens::detect_clusters(fig1(), 1e-9);
    REQUIRE(p.clusters.size() == 2);
    CHECK(p.clusters[0].value == doctest::Approx(4.0));
    CHECK(p.clusters[0].multiplicity == 1);
    CHECK(p.clusters[1].value == doctest::Approx(6.0));
    CHECK_FALSE(p.is_degenerate());
  }

  SUBCASE("identical values form one cluster") {
    EnsembleParams p{4, 6, 5, 1.25, {5.0 / 7, 5.0 / 7, 5.0 / 7, 5.0 / 7}};
    DegeneracyProfile prof = ens::detect_clusters(p, 1e-9);
    REQUIRE(prof.clusters.size() == 1);
    CHECK(prof.clusters[0].multiplicity == 4);
    CHECK(prof.clusters[0].value == doctest::Approx(5.0 / 7));
    CHECK(prof.is_degenerate());
  }

  SUBCASE("values within tolerance merge") {
    EnsembleParams p{3, 4, 5, 1.0, {1.0, 1.0 + 1e-12, 2.0}};
    DegeneracyProfile prof = ens::detect_clusters(p, 1e-9);
    REQUIRE(prof.clusters.size() == 2);
    CHECK(prof.clusters[0].multiplicity == 2);
    CHECK(prof.clusters[1].multiplicity == 1);
    CHECK(prof.clusters[1].value == doctest::Approx(2.0));
  }

  SUBCASE("order-independent and idempotent") {
    std::mt19937 gen(5);
    std::vector<double> values = {0.5, 0.5, 1.25, 2.0, 2.0, 2.0, 7.5};
    EnsembleParams base{7, 8, 9, 1.0, values};
    DegeneracyProfile ref = ens::detect_clusters(base, 1e-9);
    for (int trial = 0; trial < 20; ++trial) {
      std::shuffle(values.begin(), values.end(), gen);
      EnsembleParams p{7, 8, 9, 1.0, values};
      DegeneracyProfile got = ens::detect_clusters(p, 1e-9);
      REQUIRE(got.clusters.size() == ref.clusters.size());
      for (size_t i = 0; i < got.clusters.size(); ++i) {
        CHECK(got.clusters[i].value == ref.clusters[i].value);
        CHECK(got.clusters[i].multiplicity == ref.clusters[i].multiplicity);
      }
    }
    // multiplicities always cover n
    CHECK(ref.total_multiplicity() == 7);
  }
}

TEST_CASE("JSON ingestion") {
  SUBCASE("plain numbers") {
    EnsembleParams p = ens::params_from_json(
        R"({"n": 2, "n_A": 3, "n_B": 4, "sigma_A": 1, "sigma_B": [4, 6]})");
    CHECK(p.n == 2);
    CHECK(p.sigma_b == std::vector<double>{4.0, 6.0});
  }

  SUBCASE("rational strings parse exactly") {
    EnsembleParams p = ens::params_from_json(
        R"({"n": 2, "n_A": 3, "n_B": 4, "sigma_A": "5/4", "sigma_B": ["5/7", "10/29"]})");
    CHECK(p.sigma_a == 5.0 / 4.0);
    CHECK(p.sigma_b[0] == 5.0 / 7.0);
    CHECK(p.sigma_b[1] == 10.0 / 29.0);
  }

  SUBCASE("decimal strings accepted") {
    EnsembleParams p = ens::params_from_json(
        R"({"n": 1, "n_A": 1, "n_B": 1, "sigma_A": "0.5", "sigma_B": [2]})");
    CHECK(p.sigma_a == 0.5);
  }

  SUBCASE("rejections") {
    CHECK_THROWS_AS(ens::params_from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(ens::params_from_json(R"({"n": 2})"), std::invalid_argument);
    CHECK_THROWS_AS(
        ens::params_from_json(
            R"({"n": 2, "n_A": 3, "n_B": 4, "sigma_A": "5//4", "sigma_B": [4, 6]})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ens::params_from_json(
            R"({"n": 2, "n_A": 3, "n_B": 4, "sigma_A": 1, "sigma_B": "4,6"})"),
        std::invalid_argument);
    CHECK_THROWS_AS(
        ens::params_from_json(
            R"({"n": 2.5, "n_A": 3, "n_B": 4, "sigma_A": 1, "sigma_B": [4, 6]})"),
        std::invalid_argument);
    // validation runs on ingestion
    CHECK_THROWS_AS(
        ens::params_from_json(
            R"({"n": 3, "n_A": 2, "n_B": 5, "sigma_A": 1, "sigma_B": [1, 1, 1]})"),
        std::invalid_argument);
  }
}
