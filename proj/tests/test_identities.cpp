#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "jres/error.hpp"
#include "jres/gc_engine.hpp"
#include "jres/identities.hpp"

using namespace jres;

namespace {

JacobiCoefficients random_coeffs(RandomStream& s, int n) {
  JacobiCoefficients c;
  for (int j = 0; j < n; ++j) {
    c.a.push_back(0.5 + 1.5 * s.uniform());
    c.b.push_back(3.0 * s.uniform() - 1.5);
  }
  return c;
}

}  // namespace

TEST_CASE("identities on the worked example a = 3, b = 2") {
  const IdentityReport r = check_lemma_identities({{3.0}, {2.0}}, 2, LemmaVConvention::ordered_pairs);
  for (const char* name : {"lemma_i", "lemma_ii", "lemma_iii", "lemma_iv", "lemma_v"}) {
    INFO(name);
    REQUIRE(r.entries.count(name) == 1);
    CHECK(r.entries.at(name).pass);
    CHECK(r.entries.at(name).residual < 1e-12);
  }
  CHECK(r.all_pass());
  CHECK(r.lemma_v_convention == "ordered_pairs");
}

TEST_CASE("identities at odd degree with a free tail") {
  const IdentityReport r = check_lemma_identities({{1.0}, {0.5}}, 1, LemmaVConvention::ordered_pairs);
  CHECK(r.all_pass());
  CHECK(r.entries.at("lemma_i").residual < 1e-14);
  CHECK_THROWS_AS(check_lemma_identities({{1.0}, {0.5}}, 3, LemmaVConvention::ordered_pairs), ParameterError);
  CHECK_THROWS_AS(check_lemma_identities({{1.0}, {0.5}}, 0, LemmaVConvention::ordered_pairs), ParameterError);
}

TEST_CASE("fifth identity on the fixture a = 2, b = 0") {
  const auto roots = polynomial_roots(gc_forward(lemma_v_fixture()).final_lstar());
  CHECK(lemma_v_log_rhs(lemma_v_fixture(), 2) == doctest::Approx(std::log(16.0)));
  // (1 + 3) / ((1 - 3)(1 - 3)) = 1 over unordered pairs
  CHECK(std::abs(std::exp(lemma_v_log_lhs(roots, LemmaVConvention::unordered_pairs)) - 1.0) < 1e-12);
  CHECK(std::abs(std::exp(lemma_v_log_lhs(roots, LemmaVConvention::unordered_pairs_modulus)) - 1.0) < 1e-12);
  // (1 - 3)^2 (1 + 3)^2 / 4 = 16 over ordered pairs
  CHECK(std::abs(std::exp(lemma_v_log_lhs(roots, LemmaVConvention::ordered_pairs)) - 16.0) < 1e-10);
}

TEST_CASE("convention resolution picks exactly one reading") {
  const ConventionResolution res = resolve_lemma_v_convention(RandomStream(301, 1), 100);
  CHECK(res.resolved);
  CHECK(res.chosen == LemmaVConvention::ordered_pairs);
  CHECK(res.draws == 100);
  CHECK(res.fixture_residual.at("ordered_pairs") < kLemmaVTolerance);
  CHECK(res.fixture_residual.at("unordered_pairs") > 0.5);
  CHECK(res.random_max_residual.at("ordered_pairs") < kLemmaVTolerance);
}

TEST_CASE("convention names round-trip") {
  for (auto c : kAllLemmaVConventions) CHECK(parse_lemma_v_convention(to_string(c)) == c);
  CHECK_THROWS_AS(parse_lemma_v_convention("sideways"), ParameterError);
}

TEST_CASE("identities hold for random draws at every degree") {
  RandomStream s(303, 1);
  for (int rep = 0; rep < 60; ++rep) {
    const int n = 1 + rep % 6;
    const JacobiCoefficients c = random_coeffs(s, n);
    for (int m = 1; m <= 2 * n; ++m) {
      const IdentityReport r = check_lemma_identities(c, m, LemmaVConvention::ordered_pairs);
      for (const char* name : {"lemma_i", "lemma_ii", "lemma_iii", "lemma_iv"}) CHECK(r.entries.at(name).residual < 1e-9);
    }
  }
}

TEST_CASE("step Jacobians") {
  SUBCASE("first step: determinant -1 and -2 a_1") {
    const StepwiseJacobian j = stepwise_jacobian_fd({{3.0}, {2.0}}, 0);
    CHECK(j.sbs1.expected == -1.0);
    CHECK(j.sbs1.fd_determinant == doctest::Approx(-1.0).epsilon(1e-8));
    CHECK(j.sbs2.expected == -6.0);
    CHECK(j.sbs2.fd_determinant == doctest::Approx(-6.0).epsilon(1e-8));
    CHECK(j.sbs1.pass);
    CHECK(j.sbs2.pass);
  }
  SUBCASE("random n = 4, every step") {
    RandomStream s(305, 1);
    for (int rep = 0; rep < 10; ++rep) {
      const JacobiCoefficients c = random_coeffs(s, 4);
      for (int k = 0; k < 4; ++k) {
        const StepwiseJacobian j = stepwise_jacobian_fd(c, k);
        CHECK(j.sbs1.pass);
        CHECK(j.sbs2.pass);
        CHECK(j.sbs2.expected == doctest::Approx(-2.0 * std::pow(c.a[static_cast<std::size_t>(k)], 2 * k + 1)));
      }
    }
  }
  SUBCASE("preconditions") {
    CHECK_THROWS_AS(stepwise_jacobian_fd({{3.0}, {2.0}}, 1), ParameterError);
    CHECK_THROWS_AS(stepwise_jacobian_fd({{3.0}, {2.0}}, 0, 1e-3), ParameterError);
    CHECK_THROWS_AS(stepwise_jacobian_fd({{3.0}, {2.0}}, 0, 1e-8), ParameterError);
  }
}

TEST_CASE("total Jacobian") {
  CHECK(total_jacobian_fd({{3.0}, {2.0}}).fd_determinant == doctest::Approx(6.0).epsilon(1e-8));
  CHECK(total_jacobian_fd({{0.5}, {0.0}}).fd_determinant == doctest::Approx(1.0).epsilon(1e-8));
  RandomStream s(307, 1);
  for (int rep = 0; rep < 10; ++rep) {
    const JacobiCoefficients c = random_coeffs(s, 3);
    const JacobianCheck j = total_jacobian_fd(c);
    const double expected = 8.0 * c.a[0] * std::pow(c.a[1], 3) * std::pow(c.a[2], 5);
    CHECK(j.expected == doctest::Approx(expected));
    CHECK(j.pass);
  }
  CHECK_THROWS_AS(total_jacobian_fd(random_coeffs(s, 7)), ParameterError);
}

TEST_CASE("determinant agrees with a dense LU") {
  RandomStream s(309, 1);
  for (std::size_t n = 1; n <= 12; ++n) {
    std::vector<double> m(n * n);
    Eigen::MatrixXd e(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) e(i, j) = m[i * n + j] = 2.0 * s.uniform() - 1.0;
    CHECK(determinant(m, n) == doctest::Approx(e.determinant()).epsilon(1e-10));
  }
  CHECK(determinant({1.0, 2.0, 2.0, 4.0}, 2) == 0.0);
}
