#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>

#include "jres/ensembles.hpp"
#include "jres/error.hpp"
#include "support.hpp"

using namespace jres;

namespace {

std::vector<double> dense_eigenvalues(const HermitianMatrix& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXcd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = m(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<double> tridiagonal_eigenvalues(const TridiagonalSample& t) {
  const auto n = static_cast<Eigen::Index>(t.s.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) a(i, i) = t.s[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i) a(i, i + 1) = a(i + 1, i) = t.t[static_cast<std::size_t>(i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("kappa spec strings parse and round-trip") {
  for (const std::string s : {"point:1", "uniform:0.5:1.5", "chi:3:0.5", "chi:2.5:1.25"}) {
    const KappaDistribution k = KappaDistribution::parse(s);
    CHECK(KappaDistribution::parse(k.to_string()).to_string() == k.to_string());
  }
  const auto k = KappaDistribution::parse("chi:3:0.5");
  CHECK(k.family() == KappaDistribution::Family::chi);
  CHECK(k.param1() == 3.0);
  CHECK(k.param2() == 0.5);
}

TEST_CASE("malformed kappa specs are rejected") {
  for (const std::string s : {"chi:-1:2", "chi:3", "chi:3:0", "uniform:2:1", "uniform:-1:1", "point:0", "point:abc",
                              "gauss:1:1", "", "chi:3:0.5:1", "point:1x"})
    CHECK_THROWS_AS(KappaDistribution::parse(s), ParameterError);
}

TEST_CASE("kappa law densities and distribution functions") {
  const auto chi = KappaDistribution::chi(3.0, 0.5);
  for (double x : {0.1, 0.4, 0.9, 1.7}) CHECK(chi.cdf(x) == doctest::Approx(testing::chi3_cdf(x, 0.5)).epsilon(1e-12));
  // d/dx of the closed-form cdf
  for (double x : {0.2, 0.5, 1.3}) {
    const double h = 1e-6;
    const double fd = (testing::chi3_cdf(x + h, 0.5) - testing::chi3_cdf(x - h, 0.5)) / (2 * h);
    CHECK(chi.density_at(x) == doctest::Approx(fd).epsilon(1e-6));
  }
  CHECK(chi.density_at(-1.0) == 0.0);
  const auto uni = KappaDistribution::uniform(0.5, 5.0);
  CHECK(uni.density_at(3.0) == doctest::Approx(1.0 / 4.5));
  CHECK(uni.density_at(6.0) == 0.0);
  CHECK(uni.mean() == doctest::Approx(2.75));
  CHECK_THROWS_AS(KappaDistribution::point(1.0).density_at(1.0), ParameterError);
  CHECK_FALSE(KappaDistribution::point(1.0).has_density());
}

TEST_CASE("ensemble parameters are validated") {
  CHECK_NOTHROW(EnsembleParams{2.0, 3, 1.0, KappaDistribution::point(1.0)}.validate());
  CHECK_THROWS_AS((EnsembleParams{0.0, 3, 1.0, KappaDistribution::point(1.0)}.validate()), ParameterError);
  CHECK_THROWS_AS((EnsembleParams{2.0, 0, 1.0, KappaDistribution::point(1.0)}.validate()), ParameterError);
  CHECK_THROWS_AS((EnsembleParams{2.0, 3, 0.0, KappaDistribution::point(1.0)}.validate()), ParameterError);
}

TEST_CASE("normal sampler moments and determinism") {
  RandomStream s(11, 1);
  const int n = 1000000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += normal_sample(s, 5.0, 1.0);
  CHECK(std::abs(sum / n - 5.0) < 0.01);

  RandomStream v(11, 2);
  double m = 0.0;
  double m2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = normal_sample(v, 0.0, 2.0);
    m += x;
    m2 += x * x;
  }
  m /= n;
  CHECK(std::abs(m2 / n - m * m - 2.0) < 0.02);

  RandomStream a(5, 5);
  RandomStream b(5, 5);
  for (int i = 0; i < 10; ++i) CHECK(normal_sample(a, 0.0, 1.0) == normal_sample(b, 0.0, 1.0));
}

TEST_CASE("normal sampler matches the standard normal law") {
  CHECK(testing::ks_passes_with_retry(
      [](RandomStream& s) {
        std::vector<double> x(100000);
        for (auto& v : x) v = normal_sample(s, 0.0, 1.0);
        return x;
      },
      testing::std_normal_cdf, 21));
}

TEST_CASE("gamma sampler mean and variance") {
  for (double shape : {0.5, 1.0, 3.7}) {
    RandomStream s(13, static_cast<std::uint64_t>(shape * 10));
    const int n = 400000;
    double m = 0.0;
    double m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = gamma_sample(s, shape);
      REQUIRE(x > 0.0);
      m += x;
      m2 += x * x;
    }
    m /= n;
    m2 /= n;
    CHECK(m == doctest::Approx(shape).epsilon(0.01));
    CHECK(m2 - m * m == doctest::Approx(shape).epsilon(0.03));
  }
}

TEST_CASE("chi sampler") {
  SUBCASE("two degrees of freedom: mean sqrt(pi/2)") {
    RandomStream s(17, 1);
    const int n = 1000000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = chi_sample(s, 2.0, 1.0);
      REQUIRE(x > 0.0);
      sum += x;
    }
    CHECK(std::abs(sum / n - std::sqrt(std::numbers::pi / 2.0)) < 0.01);
  }
  SUBCASE("one degree of freedom is the half-normal law") {
    CHECK(testing::ks_passes_with_retry(
        [](RandomStream& s) {
          std::vector<double> x(100000);
          for (auto& v : x) v = chi_sample(s, 1.0, 1.0);
          return x;
        },
        testing::half_normal_cdf, 23));
  }
}

TEST_CASE("kappa sampler") {
  RandomStream s(19, 1);
  for (int i = 0; i < 100; ++i) CHECK(sample_kappa(KappaDistribution::point(1.0), s) == 1.0);

  const int n = 1000000;
  double sum = 0.0;
  const auto uni = KappaDistribution::uniform(0.5, 1.5);
  for (int i = 0; i < n; ++i) sum += sample_kappa(uni, s);
  CHECK(std::abs(sum / n - 1.0) < 0.01);

  const auto chi = KappaDistribution::chi(3.0, 0.5);
  CHECK(testing::ks_passes_with_retry(
      [&](RandomStream& st) {
        std::vector<double> x(100000);
        for (auto& v : x) v = sample_kappa(chi, st);
        return x;
      },
      [](double x) { return testing::chi3_cdf(x, 0.5); }, 29));
}

TEST_CASE("tridiagonal model") {
  SUBCASE("n = 1: a single diagonal entry with variance 2/beta") {
    for (double beta : {1.0, 2.0, 4.0}) {
      RandomStream s(31, static_cast<std::uint64_t>(beta));
      const EnsembleParams p{beta, 1, 1.0, KappaDistribution::point(1.0)};
      const int n = 1000000;
      double m2 = 0.0;
      for (int i = 0; i < n; ++i) {
        const auto t = sample_de_tridiagonal(p, s);
        REQUIRE(t.s.size() == 1);
        REQUIRE(t.t.empty());
        m2 += t.s[0] * t.s[0];
      }
      CHECK(m2 / n == doctest::Approx(2.0 / beta).epsilon(0.01));
    }
  }
  SUBCASE("beta = 2, n = 4: t_1 is chi_6 / sqrt(8)") {
    const EnsembleParams p{2.0, 4, 1.0, KappaDistribution::point(1.0)};
    CHECK(testing::ks_passes_with_retry(
        [&](RandomStream& s) {
          std::vector<double> x(100000);
          for (auto& v : x) v = sample_de_tridiagonal(p, s).t[0];
          return x;
        },
        [](double x) { return testing::chi6_cdf(x, 1.0 / std::sqrt(8.0)); }, 37));
  }
  SUBCASE("off-diagonal entries are positive") {
    RandomStream s(41, 1);
    for (double beta : {0.5, 1.0, 2.0, 4.0}) {
      const EnsembleParams p{beta, 7, 1.0, KappaDistribution::point(1.0)};
      for (int i = 0; i < 20000; ++i)
        for (double t : sample_de_tridiagonal(p, s).t) REQUIRE(t > 0.0);
    }
  }
}

TEST_CASE("dense Gaussian matrices") {
  RandomStream s(43, 1);
  SUBCASE("exactly Hermitian with a real diagonal") {
    for (int beta : {1, 2}) {
      const HermitianMatrix m = sample_dense_gaussian(beta, 6, s);
      CHECK(m.hermitian_defect() == 0.0);
      for (std::size_t i = 0; i < 6; ++i) CHECK(m(i, i).imag() == 0.0);
    }
  }
  SUBCASE("n = 200, beta = 1: mean normalized trace of X^2 near 1") {
    double sum = 0.0;
    for (int d = 0; d < 100; ++d) {
      const HermitianMatrix m = sample_dense_gaussian(1, 200, s);
      double tr = 0.0;
      for (std::size_t i = 0; i < 200; ++i)
        for (std::size_t j = 0; j < 200; ++j) tr += std::norm(m(i, j));
      sum += tr / 200.0;
    }
    CHECK(std::abs(sum / 100.0 - 1.0) < 0.05);
  }
  SUBCASE("unsupported Dyson indices") {
    CHECK_THROWS_AS(sample_dense_gaussian(4, 3, s), UnsupportedVariant);
    CHECK_THROWS_AS(sample_dense_gaussian(3, 3, s), ParameterError);
  }
}

TEST_CASE("Householder tridiagonalization") {
  SUBCASE("tridiagonal input with positive off-diagonals is a fixed point") {
    HermitianMatrix m(4);
    const double d[] = {0.3, -1.2, 2.0, 0.7};
    const double o[] = {0.9, 1.4, 0.2};
    for (std::size_t i = 0; i < 4; ++i) m(i, i) = d[i];
    for (std::size_t i = 0; i < 3; ++i) m(i, i + 1) = m(i + 1, i) = o[i];
    const TridiagonalSample t = householder_tridiagonalize(m);
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(t.s[i] - d[i]) < 1e-12);
    for (std::size_t i = 0; i < 3; ++i) CHECK(std::abs(t.t[i] - o[i]) < 1e-12);
  }
  SUBCASE("diagonal input") {
    HermitianMatrix m(3);
    m(0, 0) = 1.0;
    m(1, 1) = 2.0;
    m(2, 2) = 3.0;
    const TridiagonalSample t = householder_tridiagonalize(m);
    CHECK(t.s == std::vector<double>{1.0, 2.0, 3.0});
    CHECK(t.t == std::vector<double>{0.0, 0.0});
  }
  SUBCASE("random GOE and GUE draws keep their spectrum, fix e_1 and give t >= 0") {
    RandomStream s(47, 1);
    for (int beta : {1, 2}) {
      for (int rep = 0; rep < 50; ++rep) {
        const int n = 2 + rep % 5;
        const HermitianMatrix m = sample_dense_gaussian(beta, n, s);
        const TridiagonalSample t = householder_tridiagonalize(m);
        CHECK(t.s[0] == doctest::Approx(m(0, 0).real()).epsilon(1e-12));
        for (double x : t.t) CHECK(x >= 0.0);
        const auto a = dense_eigenvalues(m);
        const auto b = tridiagonal_eigenvalues(t);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
      }
    }
  }
  SUBCASE("non-Hermitian input is rejected") {
    HermitianMatrix m(2);
    m(0, 1) = 1.0;
    m(1, 0) = 2.0;
    CHECK_THROWS_AS(householder_tridiagonalize(m), ValidationError);
  }
}
