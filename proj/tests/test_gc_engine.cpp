#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jres/error.hpp"
#include "jres/gc_engine.hpp"
#include "jres/random_stream.hpp"

using namespace jres;

namespace {

JacobiCoefficients random_coeffs(RandomStream& s, int n) {
  JacobiCoefficients c;
  for (int j = 0; j < n; ++j) {
    c.a.push_back(0.2 + 2.5 * s.uniform());
    c.b.push_back(4.0 * s.uniform() - 2.0);
  }
  return c;
}

using V = std::vector<double>;

}  // namespace

TEST_CASE("forward recursion examples") {
  SUBCASE("free entries") {
    const GCSequence g = gc_forward({{1.0}, {0.0}});
    CHECK(g.steps() == 1);
    CHECK(g.lstar[2].coeffs() == V{0.0, 0.0, 1.0});
    // z P_1(z + 1/z) with P_1(x) = x
    CHECK(g.k[2].coeffs() == V{1.0, 0.0, 1.0});
  }
  SUBCASE("a = 3, b = 2") {
    const GCSequence g = gc_forward({{3.0}, {2.0}});
    CHECK(g.lstar[0].coeffs() == V{1.0});
    CHECK(g.k[0].coeffs() == V{1.0});
    CHECK(g.lstar[1].coeffs() == V{-2.0, 1.0});
    CHECK(g.lstar[2].coeffs() == V{-8.0, -2.0, 1.0});
    CHECK(g.k[2].coeffs() == V{1.0, -2.0, 1.0});
  }
  SUBCASE("single diagonal entry") {
    for (double b : {-1.5, 0.25, 3.0}) CHECK(gc_forward({{1.0}, {b}}).lstar[1].coeffs() == V{-b, 1.0});
  }
}

TEST_CASE("forward recursion invariants") {
  RandomStream s(101, 1);
  for (int rep = 0; rep < 200; ++rep) {
    const int n = 1 + rep % 8;
    const JacobiCoefficients c = random_coeffs(s, n);
    const GCSequence g = gc_forward(c);
    REQUIRE(g.lstar.size() == static_cast<std::size_t>(2 * n + 1));
    double sum_b = 0.0;
    for (int j = 0; j <= 2 * n; ++j) {
      const RealPolynomial& l = g.lstar[static_cast<std::size_t>(j)];
      const RealPolynomial& k = g.k[static_cast<std::size_t>(j)];
      CHECK(l.degree() == j);
      CHECK(l.is_monic());
      CHECK(k[0] == doctest::Approx(1.0).epsilon(1e-12));
      if (j > 0) {
        if (j % 2 == 1) sum_b += c.b[static_cast<std::size_t>(j / 2)];
        // second-highest coefficient is minus the sum of the diagonal entries so far
        CHECK(std::abs(l[j - 1] + sum_b) < 1e-10 * (1.0 + std::abs(sum_b)));
      }
      // K is recovered from L* alone.
      if (j > 0) CHECK(coeff_distance(k_from_lstar(l), k) < 1e-9 * (1.0 + k.max_abs_coeff()));
    }
    // K of even index is self-reciprocal: z^j K(1/z) = K(z).
    for (int j = 0; j <= 2 * n; j += 2) {
      const RealPolynomial& k = g.k[static_cast<std::size_t>(j)];
      CHECK(coeff_distance(reversal(k, j), k) < 1e-9 * (1.0 + k.max_abs_coeff()));
    }
  }
}

TEST_CASE("recovering K from L*") {
  CHECK(k_from_lstar(RealPolynomial::one()).coeffs() == V{1.0});
  CHECK(k_from_lstar({-8.0, -2.0, 1.0}).coeffs() == V{1.0, -2.0, 1.0});
  const RealPolynomial k = k_from_lstar({0.75, 0.0, 1.0});
  CHECK(k[0] == 1.0);
  CHECK(coeff_distance(k, gc_forward({{0.5}, {0.0}}).k[2]) < 1e-14);
  CHECK_THROWS_AS(k_from_lstar({1.0, 2.0}), InvalidConfiguration);
  // The numerator vanishes at z = 1 and z = -1 for every monic input, so the
  // division by 1 - z^2 is always exact.
  RandomStream s(105, 1);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<double> c;
    for (int i = 0; i < 1 + rep % 9; ++i) c.push_back(4.0 * s.uniform() - 2.0);
    c.push_back(1.0);
    CHECK_NOTHROW(k_from_lstar(RealPolynomial(c)));
  }
}

TEST_CASE("inverse recursion examples") {
  const JacobiCoefficients x = gc_inverse({-8.0, -2.0, 1.0});
  REQUIRE(x.size() == 1);
  CHECK(x.a[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(x.b[0] == doctest::Approx(2.0).epsilon(1e-14));

  const JacobiCoefficients y = gc_inverse({0.75, 0.0, 1.0});
  CHECK(y.a[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(y.b[0]) < 1e-14);

  const JacobiCoefficients z = gc_inverse({-2.0, 0.0, 1.0});
  CHECK(z.a[0] == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
  CHECK(std::abs(z.b[0]) < 1e-14);
}

TEST_CASE("inverse recursion rejects data outside the image") {
  // constant term 1 gives a_1^2 = 0
  CHECK_THROWS_AS(gc_inverse({1.0, 0.0, 1.0}), InvalidConfiguration);
  // constant term 2 gives a_1^2 < 0
  CHECK_THROWS_AS(gc_inverse({2.0, 0.0, 1.0}), InvalidConfiguration);
  CHECK_THROWS_AS(gc_inverse({1.0, 1.0}), InvalidConfiguration);
  CHECK_THROWS_AS(gc_inverse({-8.0, -2.0, 2.0}), InvalidConfiguration);
}

TEST_CASE("round trip through the recursion") {
  RandomStream s(103, 1);
  double worst = 0.0;
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + rep % 8;
    JacobiCoefficients c = random_coeffs(s, n);
    const JacobiCoefficients back = gc_inverse(gc_forward(c).final_lstar());
    REQUIRE(back.size() == c.size());
    for (std::size_t j = 0; j < c.size(); ++j) {
      worst = std::max(worst, std::abs(back.a[j] - c.a[j]) / c.a[j]);
      worst = std::max(worst, std::abs(back.b[j] - c.b[j]) / std::max(1.0, std::abs(c.b[j])));
    }
  }
  CHECK(worst < 1e-8);
}
