#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "jres/random_stream.hpp"

namespace jres {

/// Law of the coupling constant kappa: chi(k, scale), uniform(lo, hi) or point(value).
class KappaDistribution {
 public:
  enum class Family { chi, uniform, point };

  static KappaDistribution chi(double dof, double scale);
  static KappaDistribution uniform(double lo, double hi);
  static KappaDistribution point(double value);

  /// Parses `point:v`, `uniform:lo:hi` or `chi:k:scale`. Throws ParameterError.
  static KappaDistribution parse(const std::string& spec);
  /// Inverse of parse(); round-trips exactly.
  std::string to_string() const;

  Family family() const noexcept { return family_; }
  double param1() const noexcept { return p1_; }
  double param2() const noexcept { return p2_; }
  bool has_density() const noexcept { return family_ != Family::point; }

  /// Density F(kappa); zero off the support. Throws ParameterError for point().
  double density_at(double kappa) const;
  /// Distribution function; step function for point().
  double cdf(double kappa) const;
  double mean() const;

 private:
  KappaDistribution(Family f, double p1, double p2) : family_(f), p1_(p1), p2_(p2) {}
  Family family_;
  double p1_;
  double p2_;
};

struct EnsembleParams {
  double beta = 2.0;
  int n = 1;
  double gamma = 1.0;
  KappaDistribution kappa_dist = KappaDistribution::point(1.0);

  /// Throws ParameterError unless beta > 0, n >= 1 and gamma != 0.
  void validate() const;
};

/// Symmetric tridiagonal matrix: diagonal s (length n) and off-diagonal t (length n-1).
struct TridiagonalSample {
  std::vector<double> s;
  std::vector<double> t;
};

/// Dense n x n Hermitian matrix, row-major.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(std::size_t n = 0) : n_(n), data_(n * n) {}

  std::size_t size() const noexcept { return n_; }
  std::complex<double>& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  const std::complex<double>& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Largest |A_ij - conj(A_ji)|.
  double hermitian_defect() const;

 private:
  std::size_t n_;
  std::vector<std::complex<double>> data_;
};

double normal_sample(RandomStream& stream, double mean, double variance);
/// Gamma(shape, 1) variate, Marsaglia-Tsang; shape < 1 by the U^{1/a} boost.
double gamma_sample(RandomStream& stream, double shape);
/// scale * chi_dof, with real dof > 0, via sqrt(2 Gamma(dof/2)).
double chi_sample(RandomStream& stream, double dof, double scale);
double sample_kappa(const KappaDistribution& dist, RandomStream& stream);

/// Dumitriu-Edelman tridiagonal model at the semicircle scaling:
/// s_j ~ N(0, 2/(beta n)), t_j ~ chi_{beta(n-j)} / sqrt(beta n).
TridiagonalSample sample_de_tridiagonal(const EnsembleParams& params, RandomStream& stream);

/// X = (Y + Y^*)/2 * sqrt(2/(beta n)) with real (beta=1) or complex (beta=2) Gaussian Y.
HermitianMatrix sample_dense_gaussian(int beta, int n, RandomStream& stream);

/// Householder reduction to real symmetric tridiagonal form with t_j >= 0.
/// The similarity fixes e_1. Throws ValidationError if the input is not
/// Hermitian to 1e-12 (relative to its largest entry).
TridiagonalSample householder_tridiagonalize(const HermitianMatrix& matrix);

}  // namespace jres
