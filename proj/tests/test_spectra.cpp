#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "jres/error.hpp"
#include "jres/gc_engine.hpp"
#include "jres/operator_model.hpp"
#include "jres/spectra.hpp"

using namespace jres;

namespace {

const double kHalfSqrt3 = std::sqrt(3.0) / 2.0;

SpectrumConfiguration config_of(std::vector<Complex> pts) { return make_configuration(pts); }

SpectrumConfiguration raw_config(std::vector<Complex> pts) {
  SpectrumConfiguration c;
  c.points = std::move(pts);
  return classify(std::move(c));
}

bool contains(const std::vector<Complex>& roots, Complex z, double tol) {
  return std::any_of(roots.begin(), roots.end(), [&](Complex r) { return std::abs(r - z) < tol; });
}

}  // namespace

TEST_CASE("polynomial roots") {
  const auto a = polynomial_roots({-8.0, -2.0, 1.0});
  REQUIRE(a.size() == 2);
  CHECK(contains(a, 4.0, 1e-12));
  CHECK(contains(a, -2.0, 1e-12));

  const auto b = polynomial_roots({0.75, 0.0, 1.0});
  REQUIRE(b.size() == 2);
  CHECK(contains(b, Complex(0.0, kHalfSqrt3), 1e-12));
  CHECK(contains(b, Complex(0.0, -kHalfSqrt3), 1e-12));

  const auto c = polynomial_roots({0.0, 0.0, 0.0, 1.0});
  CHECK(c == std::vector<Complex>(3, Complex{}));

  CHECK_THROWS_AS(polynomial_roots(RealPolynomial{2.0}), ParameterError);
}

TEST_CASE("roots reproduce the coefficients") {
  RandomStream s(201, 1);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 8;
    JacobiCoefficients co;
    for (int j = 0; j < n; ++j) {
      co.a.push_back(0.3 + 2.0 * s.uniform());
      co.b.push_back(3.0 * s.uniform() - 1.5);
    }
    const RealPolynomial p = gc_forward(co).final_lstar();
    const auto roots = polynomial_roots(p);
    REQUIRE(static_cast<int>(roots.size()) == p.degree());
    // Expand prod (z - r_j) and compare.
    std::vector<Complex> e{1.0};
    for (const Complex& r : roots) {
      std::vector<Complex> next(e.size() + 1, 0.0);
      for (std::size_t i = 0; i < e.size(); ++i) {
        next[i + 1] += e[i];
        next[i] -= r * e[i];
      }
      e = next;
    }
    const double scale = p.max_abs_coeff();
    for (int i = 0; i <= p.degree(); ++i) {
      CHECK(std::abs(e[static_cast<std::size_t>(i)].real() - p[i]) < 1e-8 * scale);
      CHECK(std::abs(e[static_cast<std::size_t>(i)].imag()) < 1e-8 * scale);
    }
  }
}

TEST_CASE("canonical configurations") {
  const auto a = make_configuration({-2.0, 4.0});
  CHECK(a.real_count() == 2);
  CHECK(a.pair_count() == 0);
  CHECK(a.points == std::vector<Complex>{-2.0, 4.0});

  const auto b = canonicalize_conjugates({Complex(0.1, -0.9), Complex(0.1 + 1e-12, 0.9)});
  CHECK(b.pair_count() == 1);
  CHECK(b.points[0] == std::conj(b.points[1]));
  CHECK(b.points[0].imag() > 0.0);

  const auto c = canonicalize_conjugates({0.0, 0.0, 0.5});
  CHECK(c.points == std::vector<Complex>{0.5});
  CHECK(c.origin_drops == 2);

  const auto d = canonicalize_conjugates({Complex(2.0, 1e-12), Complex(0.3, 0.2), Complex(0.3, -0.2), -1.0});
  CHECK(d.points == std::vector<Complex>{-1.0, 2.0, Complex(0.3, 0.2), Complex(0.3, -0.2)});

  CHECK_THROWS_AS(canonicalize_conjugates({Complex(0.1, 0.9)}), AsymmetryError);
  CHECK_THROWS_AS(canonicalize_conjugates({Complex(0.1, 0.9), Complex(0.5, -0.9)}), AsymmetryError);
}

TEST_CASE("labels") {
  const auto a = config_of({4.0, -2.0});
  CHECK(a.labels == std::vector<PointLabel>(2, PointLabel::eigenvalue));
  const auto b = config_of({Complex(0.0, kHalfSqrt3), Complex(0.0, -kHalfSqrt3)});
  CHECK(b.labels == std::vector<PointLabel>(2, PointLabel::resonance));
  const auto c = config_of({2.0, 0.5});
  CHECK(c.labels == std::vector<PointLabel>{PointLabel::resonance, PointLabel::eigenvalue});
  CHECK(config_of({-1.0}).labels[0] == PointLabel::resonance);
}

TEST_CASE("Joukowsky map") {
  CHECK(joukowsky(4.0) == Complex(4.25));
  CHECK(joukowsky(-2.0) == Complex(-2.5));
  CHECK_THROWS_AS(joukowsky(0.0), DomainError);
  CHECK(std::abs(inverse_joukowsky(2.9, JoukowskyBranch::outside) - 2.5) < 1e-14);
  CHECK(std::abs(inverse_joukowsky(2.9, JoukowskyBranch::inside) - 0.4) < 1e-14);
  for (Complex e : {Complex(-3.0), Complex(0.5, 0.7), Complex(1.0, -2.0)}) {
    const Complex out = inverse_joukowsky(e, JoukowskyBranch::outside);
    const Complex in = inverse_joukowsky(e, JoukowskyBranch::inside);
    CHECK(std::abs(out) >= 1.0);
    CHECK(std::abs(in) <= 1.0);
    CHECK(std::abs(joukowsky(out) - e) < 1e-12);
    CHECK(std::abs(out * in - 1.0) < 1e-12);
  }
}

TEST_CASE("membership in S(k)") {
  SUBCASE("members") {
    CHECK(is_in_S(2, config_of({4.0, -2.0})).member);
    CHECK(is_in_S(2, config_of({Complex(0.0, kHalfSqrt3), Complex(0.0, -kHalfSqrt3)})).member);
    CHECK(is_in_S(3, config_of({2.0, 3.0, 0.4})).member);
    CHECK(is_in_S(3, config_of({-2.0, -3.0, -0.4})).member);
    CHECK(is_in_S(4, config_of({2.0, 0.2, 0.7, 0.9})).member);
    CHECK(is_in_S(0, SpectrumConfiguration{}).member);
  }
  SUBCASE("violations name the first failing clause") {
    auto clause = [](int k, std::vector<Complex> pts) { return is_in_S(k, raw_config(std::move(pts))).clause; };
    CHECK(clause(2, {2.0, 2.0}) == "ii");
    CHECK(clause(2, {Complex(1.5, 0.2), Complex(1.5, -0.2)}) == "ii");
    CHECK(clause(2, {2.0, 0.75}) == "iii.a");
    CHECK(clause(2, {2.0, 0.5}) == "iii.c");
    CHECK(clause(2, {2.0, 3.0}) == "iii.b");
    CHECK(clause(2, {-2.0, -0.75}) == "iv.a");
    CHECK(clause(2, {-2.0, -0.5}) == "iv.c");
    CHECK(clause(2, {-2.0, -3.0}) == "iv.b");
    CHECK(clause(2, {Complex(0.1, 0.5), 0.3}) == "i");
    CHECK(clause(3, {4.0, -2.0}) == "count");
  }
  SUBCASE("a resonance on the unit circle counts toward (1/x_1, 1]") {
    CHECK(is_in_S(2, config_of({2.0, 1.0})).clause == "iii.a");
    CHECK(is_in_S(3, config_of({2.0, 1.0, 0.8})).member);
  }
}

TEST_CASE("eigenvalue labels agree with the truncated operator") {
  RandomStream s(203, 1);
  int checked = 0;
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + rep % 4;
    JacobiCoefficients co;
    for (int j = 0; j < n; ++j) {
      co.a.push_back(0.3 + 2.0 * s.uniform());
      co.b.push_back(4.0 * s.uniform() - 2.0);
    }
    const auto cfg = canonicalize_conjugates(polynomial_roots(gc_forward(co).final_lstar()));
    const auto eig = eigenvalues_outside_band(co, 2000, 0.0);
    for (std::size_t i = 0; i < cfg.size(); ++i) {
      if (cfg.labels[i] != PointLabel::eigenvalue || std::abs(cfg.points[i]) < 1.05) continue;
      const double e = joukowsky(cfg.points[i]).real();
      CHECK(std::any_of(eig.begin(), eig.end(), [&](double x) { return std::abs(x - e) < 1e-6; }));
      ++checked;
    }
  }
  CHECK(checked > 10);
}
