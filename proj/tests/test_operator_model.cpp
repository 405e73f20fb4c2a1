#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "jres/error.hpp"
#include "jres/gc_engine.hpp"
#include "jres/operator_model.hpp"
#include "jres/spectra.hpp"
#include "support.hpp"

using namespace jres;

namespace {

std::vector<double> eigen_oracle(const TruncatedOperator& op) {
  const auto n = static_cast<Eigen::Index>(op.dimension());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = op.diag[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = op.offdiag[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  return {es.eigenvalues().data(), es.eigenvalues().data() + n};
}

}  // namespace

TEST_CASE("assembling the coupled operator") {
  SUBCASE("n = 1") {
    const auto c = assemble_coupled({{3.0}, {}}, 2.0, 0.5);
    CHECK(c.a == std::vector<double>{0.5});
    CHECK(c.b == std::vector<double>{6.0});
  }
  SUBCASE("n = 3 reverses the order and puts kappa last") {
    const auto c = assemble_coupled({{1.1, 2.2, 3.3}, {0.4, 0.7}}, 1.0, 1.0);
    CHECK(c.a == std::vector<double>{0.7, 0.4, 1.0});
    CHECK(c.b == std::vector<double>{3.3, 2.2, 1.1});
  }
  SUBCASE("negative gamma: |gamma| on the off-diagonal, gamma on the diagonal") {
    const auto c = assemble_coupled({{1.0, -2.0}, {0.5}}, -1.0, 0.8);
    CHECK(c.a == std::vector<double>{0.5, 0.8});
    CHECK(c.b == std::vector<double>{2.0, -1.0});
    // Same truncated spectrum as the operator with the literal signs.
    TruncatedOperator literal = truncate(c, 40);
    literal.offdiag[0] = -0.5;
    const auto x = tridiag_eigenvalues(truncate(c, 40));
    const auto y = tridiag_eigenvalues(literal);
    for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) < 1e-12);
  }
}

TEST_CASE("coefficient validation names the offending index") {
  CHECK(testing::throws_with([] { JacobiCoefficients{{1.0, -0.5}, {0.0, 0.0}}.validate(); }, "a[1]"));
  CHECK(testing::throws_with([] { JacobiCoefficients{{1.0, 2.0}, {0.0, NAN}}.validate(); }, "b[1]"));
  CHECK_THROWS_AS((JacobiCoefficients{{1.0, 2.0}, {0.0}}.validate()), ValidationError);
}

TEST_CASE("perturbation order") {
  CHECK(JacobiCoefficients{{1.0}, {0.0}}.perturbation_order() == 0);
  CHECK(JacobiCoefficients{{1.0}, {0.5}}.perturbation_order() == 1);
  CHECK(JacobiCoefficients{{3.0}, {2.0}}.perturbation_order() == 2);
  CHECK(JacobiCoefficients{{2.0, 1.0}, {0.0, 0.0}}.perturbation_order() == 2);
  CHECK(JacobiCoefficients{{2.0, 1.0}, {0.0, 0.3}}.perturbation_order() == 3);
  CHECK(JacobiCoefficients{{2.0, 0.7}, {0.0, 0.0}}.perturbation_order() == 4);
}

TEST_CASE("perturbation order equals the number of nonzero zeros of L*") {
  RandomStream s(3, 3);
  for (int rep = 0; rep < 300; ++rep) {
    const int n = 1 + rep % 5;
    JacobiCoefficients c;
    for (int j = 0; j < n; ++j) {
      // Mix free entries in so every class occurs.
      c.a.push_back(s.uniform() < 0.4 ? 1.0 : 0.3 + 2.0 * s.uniform());
      c.b.push_back(s.uniform() < 0.4 ? 0.0 : 2.0 * s.uniform() - 1.0);
    }
    const auto roots = polynomial_roots(gc_forward(c).final_lstar());
    const auto cfg = canonicalize_conjugates(roots);
    CHECK(static_cast<int>(cfg.size()) == c.perturbation_order());
  }
}

TEST_CASE("truncation") {
  SUBCASE("free operator") {
    const auto op = truncate(JacobiCoefficients{{1.0}, {0.0}}, 5);
    CHECK(op.diag == std::vector<double>(5, 0.0));
    CHECK(op.offdiag == std::vector<double>(4, 1.0));
  }
  SUBCASE("direct placement") {
    const auto op = truncate(JacobiCoefficients{{1.0}, {2.0}}, 3);
    CHECK(op.diag == std::vector<double>{2.0, 0.0, 0.0});
    CHECK(op.offdiag == std::vector<double>{1.0, 1.0});
  }
  SUBCASE("prefix property") {
    const JacobiCoefficients c{{0.3, 1.7, 2.2}, {0.1, -0.4, 0.9}};
    for (std::size_t N = 4; N < 12; ++N) {
      const auto p = truncate(c, N);
      const auto q = truncate(c, N + 1);
      for (std::size_t i = 0; i < N; ++i) CHECK(p.diag[i] == q.diag[i]);
      for (std::size_t i = 0; i + 1 < N; ++i) CHECK(p.offdiag[i] == q.offdiag[i]);
    }
  }
  SUBCASE("too small") {
    CHECK_THROWS_AS(truncate(JacobiCoefficients{{2.0, 2.0}, {0.0, 0.0}}, 2), ShapeError);
  }
}

TEST_CASE("tridiagonal eigenvalues") {
  CHECK(tridiag_eigenvalues({{2.0}, {}}) == std::vector<double>{2.0});
  const auto two = tridiag_eigenvalues({{0.0, 0.0}, {1.0}});
  REQUIRE(two.size() == 2);
  CHECK(two[0] == doctest::Approx(-1.0));
  CHECK(two[1] == doctest::Approx(1.0));

  SUBCASE("free section has the Chebyshev spectrum") {
    const std::size_t N = 50;
    const auto e = tridiag_eigenvalues(truncate(JacobiCoefficients{{1.0}, {0.0}}, N));
    for (std::size_t k = 1; k <= N; ++k)
      CHECK(std::abs(e[N - k] - 2.0 * std::cos(std::numbers::pi * k / (N + 1.0))) < 1e-12);
  }
  SUBCASE("random sections agree with a dense solver") {
    RandomStream s(7, 1);
    for (int rep = 0; rep < 40; ++rep) {
      TruncatedOperator op;
      const int n = 1 + rep;
      for (int i = 0; i < n; ++i) op.diag.push_back(4.0 * s.uniform() - 2.0);
      for (int i = 0; i + 1 < n; ++i) op.offdiag.push_back(3.0 * s.uniform() - 1.0);
      const auto x = tridiag_eigenvalues(op);
      const auto y = eigen_oracle(op);
      for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - y[i]) < 1e-11);
      // Sturm counts agree with the spectrum.
      for (double probe : {-3.0, -0.5, 0.0, 0.7, 2.5})
        CHECK(sturm_count(op, probe) ==
              static_cast<std::size_t>(std::count_if(y.begin(), y.end(), [&](double v) { return v < probe; })));
    }
  }
  SUBCASE("flipping the sign of one off-diagonal entry keeps the spectrum") {
    RandomStream s(7, 2);
    TruncatedOperator op;
    for (int i = 0; i < 30; ++i) op.diag.push_back(s.uniform() - 0.5);
    for (int i = 0; i < 29; ++i) op.offdiag.push_back(0.5 + s.uniform());
    for (std::size_t j = 0; j < op.offdiag.size(); j += 7) {
      TruncatedOperator flipped = op;
      flipped.offdiag[j] = -flipped.offdiag[j];
      const auto x = tridiag_eigenvalues(op);
      const auto y = tridiag_eigenvalues(flipped);
      for (std::size_t i = 0; i < x.size(); ++i) CHECK(std::abs(x[i] - y[i]) < 1e-12);
    }
  }
}

TEST_CASE("eigenvalues outside the band") {
  CHECK(eigenvalues_outside_band(JacobiCoefficients{{1.0}, {0.0}}, 2000, 1e-6).empty());
  const auto e = eigenvalues_outside_band(JacobiCoefficients{{1.0}, {2.5}}, 2000, kDefaultBandMargin);
  REQUIRE(e.size() == 1);
  CHECK(std::abs(e[0] - (2.5 + 1.0 / 2.5)) < 1e-6);
  CHECK(eigenvalues_outside_band(JacobiCoefficients{{1.0}, {0.5}}, 2000, kDefaultBandMargin).empty());

  // zeros 4 and -2 of z^2 - 2z - 8
  const auto f = eigenvalues_outside_band(JacobiCoefficients{{3.0}, {2.0}}, 2000, kDefaultBandMargin);
  REQUIRE(f.size() == 2);
  CHECK(std::abs(f[0] + 2.5) < 1e-9);
  CHECK(std::abs(f[1] - 4.25) < 1e-9);
  CHECK_THROWS_AS(eigenvalues_outside_band(JacobiCoefficients{{1.0}, {0.0}}, 10, -0.1), ParameterError);
}
