#include "jres/gc_engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "jres/error.hpp"

namespace jres {

namespace {

constexpr double kRemainderTolerance = 1e-9;
constexpr double kMinASquared = 1e-12;

// Dense ascending coefficient vectors in Wide precision; the inverse
// recursion divides by a^2 at every step and amplifies rounding.
using Ext = Wide;
using ExtPoly = std::vector<Ext>;

Ext coeff(const ExtPoly& p, long i) {
  return (i < 0 || i >= static_cast<long>(p.size())) ? Ext{0} : p[static_cast<std::size_t>(i)];
}

Ext max_abs(const ExtPoly& p) {
  Ext m = 0;
  for (Ext c : p) m = std::max(m, wide_abs(c));
  return m;
}

void check_small(Ext value, Ext scale, const char* what) {
  if (wide_abs(value) > kRemainderTolerance * std::max<Ext>(1, scale))
    throw InvalidConfiguration(std::string(what) + ": nonzero remainder " + std::to_string(static_cast<double>(value)));
}

// K_m from monic L*_m of degree m (coefficient vector of length m + 1).
ExtPoly k_from_lstar_ext(const ExtPoly& lstar) {
  const long m = static_cast<long>(lstar.size()) - 1;
  const long shift = (m % 2 == 0) ? 2 : 1;
  // numerator N = reversal(L*) - z^shift L*, degree m + shift
  ExtPoly num(static_cast<std::size_t>(m + shift) + 1, 0);
  for (long i = 0; i <= m; ++i) num[static_cast<std::size_t>(m - i)] += lstar[static_cast<std::size_t>(i)];
  for (long i = 0; i <= m; ++i) num[static_cast<std::size_t>(i + shift)] -= lstar[static_cast<std::size_t>(i)];
  // N = (1 - z^2) Q: Q_i = N_i + Q_{i-2}.
  const long qdeg = m + shift - 2;
  ExtPoly q(static_cast<std::size_t>(qdeg) + 1, 0);
  for (long i = 0; i <= qdeg; ++i) q[static_cast<std::size_t>(i)] = num[static_cast<std::size_t>(i)] + coeff(q, i - 2);
  const Ext scale = max_abs(lstar);
  check_small(num[static_cast<std::size_t>(qdeg + 1)] + coeff(q, qdeg - 1), scale, "k_from_lstar");
  check_small(num[static_cast<std::size_t>(qdeg + 2)] + coeff(q, qdeg), scale, "k_from_lstar");
  return q;
}

ExtPoly to_ext(const RealPolynomial& p) {
  return p.wide_coeffs();
}

RealPolynomial from_ext(const ExtPoly& p) {
  return RealPolynomial::from_wide(p);
}

}  // namespace

RealPolynomial gc_step_b(const RealPolynomial& lstar_even, const RealPolynomial& k_even, double b) {
  return lstar_even.shifted(1) - b * k_even;
}

RealPolynomial gc_step_a_lstar(const RealPolynomial& lstar_odd, const RealPolynomial& k_odd, double a) {
  return lstar_odd.shifted(1) - (a * a - 1.0) * k_odd;
}

RealPolynomial gc_step_a_k(const RealPolynomial& lstar_odd, const RealPolynomial& k_odd) {
  return lstar_odd.shifted(1) + k_odd;
}

GCSequence gc_forward(const JacobiCoefficients& coeffs) {
  coeffs.validate();
  const std::size_t n = coeffs.size();
  GCSequence seq;
  seq.lstar.reserve(2 * n + 1);
  seq.k.reserve(2 * n + 1);
  seq.lstar.push_back(RealPolynomial::one());
  seq.k.push_back(RealPolynomial::one());
  for (std::size_t j = 0; j < n; ++j) {
    const RealPolynomial l_odd = gc_step_b(seq.lstar.back(), seq.k.back(), coeffs.b[j]);
    const RealPolynomial k_odd = seq.k.back();
    seq.lstar.push_back(l_odd);
    seq.k.push_back(k_odd);
    seq.lstar.push_back(gc_step_a_lstar(l_odd, k_odd, coeffs.a[j]));
    seq.k.push_back(gc_step_a_k(l_odd, k_odd));
  }
  return seq;
}

RealPolynomial k_from_lstar(const RealPolynomial& lstar) {
  if (!lstar.is_monic()) throw InvalidConfiguration("k_from_lstar: input must be monic");
  return from_ext(k_from_lstar_ext(to_ext(lstar)));
}

JacobiCoefficients gc_inverse(const RealPolynomial& lstar_2n) {
  if (!lstar_2n.is_monic() || lstar_2n.degree() % 2 != 0 || lstar_2n.degree() < 2)
    throw InvalidConfiguration("gc_inverse: input must be monic of positive even degree");
  const std::size_t n = static_cast<std::size_t>(lstar_2n.degree()) / 2;
  std::vector<double> a(n), b(n);
  ExtPoly l = to_ext(lstar_2n);
  for (std::size_t step = n; step-- > 0;) {
    const long m = static_cast<long>(l.size()) - 1;  // 2k + 2
    const Ext scale = max_abs(l);
    const ExtPoly k_even = k_from_lstar_ext(l);
    const Ext a2 = Ext{1} - l[0];
    if (!(a2 >= kMinASquared))
      throw InvalidConfiguration("gc_inverse: a_" + std::to_string(step + 1) + "^2 = " +
                                 std::to_string(static_cast<double>(a2)) + " is not positive");
    // a^2 K_{2k+1} = K_{2k+2} - L*_{2k+2}; the z^{2k+1} and z^{2k+2} terms cancel.
    check_small(coeff(k_even, m - 1) - l[static_cast<std::size_t>(m - 1)], scale, "gc_inverse");
    ExtPoly k_odd(static_cast<std::size_t>(m - 1), 0);
    for (long i = 0; i <= m - 2; ++i)
      k_odd[static_cast<std::size_t>(i)] = (coeff(k_even, i) - l[static_cast<std::size_t>(i)]) / a2;
    // L*_{2k+1} = (L*_{2k+2} + (a^2 - 1) K_{2k+1}) / z
    ExtPoly l_odd(static_cast<std::size_t>(m), 0);
    check_small(l[0] + (a2 - 1) * k_odd[0], scale, "gc_inverse");
    for (long i = 1; i <= m; ++i)
      l_odd[static_cast<std::size_t>(i - 1)] = l[static_cast<std::size_t>(i)] + (a2 - 1) * coeff(k_odd, i);
    const Ext bk = -l_odd[0];
    // L*_{2k} = (L*_{2k+1} + b K_{2k+1}) / z
    ExtPoly l_even(static_cast<std::size_t>(m - 1), 0);
    check_small(l_odd[0] + bk * k_odd[0], scale, "gc_inverse");
    for (long i = 1; i <= m - 1; ++i)
      l_even[static_cast<std::size_t>(i - 1)] = l_odd[static_cast<std::size_t>(i)] + bk * coeff(k_odd, i);
    a[step] = std::sqrt(static_cast<double>(a2));
    b[step] = static_cast<double>(bk);
    l = std::move(l_even);
  }
  if (l.size() != 1 || wide_abs(l[0] - Ext{1}) > kRemainderTolerance)
    throw InvalidConfiguration("gc_inverse: recursion did not terminate at L*_0 = 1");
  return JacobiCoefficients{std::move(a), std::move(b)};
}

}  // namespace jres
