#pragma once

#include <cstddef>
#include <vector>

#include "jres/ensembles.hpp"

namespace jres {

/// First n Jacobi parameters; beyond n the operator is free (a_j = 1, b_j = 0).
struct JacobiCoefficients {
  std::vector<double> a;  // off-diagonal, a_j > 0
  std::vector<double> b;  // diagonal

  std::size_t size() const noexcept { return a.size(); }

  /// Throws ValidationError naming the first offending index.
  void validate() const;

  /// Index k of the class T^[k]: 2s when a_s != 1 is the last nontrivial
  /// entry, 2s-1 when the last nontrivial entry is b_s with a_s = 1.
  /// Equals the number of nonzero zeros of L*.
  int perturbation_order() const;
};

/// Finite N x N section of a Jacobi operator.
struct TruncatedOperator {
  std::vector<double> diag;
  std::vector<double> offdiag;

  std::size_t dimension() const noexcept { return diag.size(); }
};

/// Coupled operator in Jacobi form: the tridiagonal coefficients in reversed
/// order, scaled by gamma, with kappa as the last off-diagonal.
/// a = (|g| t_{n-1}, ..., |g| t_1, kappa), b = (g s_n, ..., g s_1).
JacobiCoefficients assemble_coupled(const TridiagonalSample& tridiag, double gamma, double kappa);

/// Throws ShapeError unless N >= n + 1.
TruncatedOperator truncate(const JacobiCoefficients& coeffs, std::size_t N);

/// All eigenvalues in ascending order (implicit-shift QL).
std::vector<double> tridiag_eigenvalues(const TruncatedOperator& op);

/// Number of eigenvalues strictly below x (Sturm sequence count).
std::size_t sturm_count(const TruncatedOperator& op, double x);

/// Eigenvalues of the N-truncation outside [-2 - margin, 2 + margin], ascending,
/// isolated by Sturm bisection.
std::vector<double> eigenvalues_outside_band(const JacobiCoefficients& coeffs, std::size_t N, double margin);

inline constexpr std::size_t kDefaultTruncation = 2000;
inline constexpr double kDefaultBandMargin = 0.01;

}  // namespace jres
