#pragma once

#include <vector>

#include "jres/operator_model.hpp"
#include "jres/polynomial.hpp"

namespace jres {

/// L*_j and K_j for j = 0..2n produced by the Geronimo-Case recursion.
struct GCSequence {
  std::vector<RealPolynomial> lstar;
  std::vector<RealPolynomial> k;

  /// Number of Jacobi steps n (lstar has 2n + 1 entries).
  std::size_t steps() const noexcept { return lstar.empty() ? 0 : (lstar.size() - 1) / 2; }
  const RealPolynomial& final_lstar() const { return lstar.back(); }
};

/// One odd step: (L*_{2k}, K_{2k}) -> (L*_{2k+1}, K_{2k+1}) with diagonal entry b.
RealPolynomial gc_step_b(const RealPolynomial& lstar_even, const RealPolynomial& k_even, double b);
/// One even step: (L*_{2k+1}, K_{2k+1}) -> L*_{2k+2} with off-diagonal entry a.
RealPolynomial gc_step_a_lstar(const RealPolynomial& lstar_odd, const RealPolynomial& k_odd, double a);
/// K_{2k+2} = z L*_{2k+1} + K_{2k+1}.
RealPolynomial gc_step_a_k(const RealPolynomial& lstar_odd, const RealPolynomial& k_odd);

/// Runs the recursion from L*_0 = K_0 = 1 over all coefficients.
GCSequence gc_forward(const JacobiCoefficients& coeffs);

/// Recovers K_j from a monic L*_j alone:
///   even j: K = (L - z^2 L*) / (1 - z^2),  odd j: K = (L - z L*) / (1 - z^2),
/// where L = reversal(L*, j). Throws InvalidConfiguration if L* is not monic
/// or the division leaves a remainder above 1e-9 * max(1, max|coeff|).
RealPolynomial k_from_lstar(const RealPolynomial& lstar);

/// Inverts the recursion: monic L*_{2n} of even degree -> (a, b) of length n.
/// Throws InvalidConfiguration when a_k^2 <= 1e-12, a division leaves a
/// remainder, or the final L*_0 differs from 1.
JacobiCoefficients gc_inverse(const RealPolynomial& lstar_2n);

}  // namespace jres
