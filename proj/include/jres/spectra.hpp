#pragma once

#include <complex>
#include <string>
#include <vector>

#include "jres/polynomial.hpp"

namespace jres {

using Complex = std::complex<double>;

enum class PointLabel { eigenvalue, resonance };

const char* to_string(PointLabel label) noexcept;

/// Zeros of L* away from the origin, stored conjugation-closed.
///
/// Canonical order: real points ascending, then conjugate pairs ordered by
/// (re, |im|) with the upper member first. `origin_drops` counts zeros at the
/// origin that were removed.
struct SpectrumConfiguration {
  std::vector<Complex> points;
  std::vector<PointLabel> labels;
  int origin_drops = 0;

  std::size_t size() const noexcept { return points.size(); }
  /// Number of conjugate pairs M.
  int pair_count() const noexcept;
  /// Number of real points L.
  int real_count() const noexcept;
};

/// All complex roots with multiplicity (Aberth-Ehrlich with Newton polish).
/// Exact zero roots are split off before iterating. Throws ParameterError for
/// degree < 1 and NumericalError if a root misses the residual bound
/// |p(r)| < 1e-9 * max|coeff| * max(1, |r|)^deg.
std::vector<Complex> polynomial_roots(const RealPolynomial& p);

inline constexpr double kRealSnapTolerance = 1e-8;
inline constexpr double kOriginTolerance = 1e-10;
inline constexpr double kMultiplicityRadius = 1e-7;

/// Snaps near-real roots, pairs the rest into exact conjugates and drops
/// origin roots. Throws AsymmetryError for an unpairable non-real root.
/// Points come back labelled by classify().
SpectrumConfiguration canonicalize_conjugates(const std::vector<Complex>& roots, double tol = kRealSnapTolerance);

/// eigenvalue iff |z| > 1; the unit circle counts as resonance.
SpectrumConfiguration classify(SpectrumConfiguration config);

/// Builds a canonical, labelled configuration from explicit points.
SpectrumConfiguration make_configuration(const std::vector<Complex>& points, double tol = kRealSnapTolerance);

Complex joukowsky(Complex z);

enum class JoukowskyBranch { outside, inside };
/// Root of z^2 - E z + 1 = 0 on the requested side of the unit circle.
Complex inverse_joukowsky(Complex energy, JoukowskyBranch branch);

struct MembershipResult {
  bool member = true;
  std::string clause;  // first violated clause ("i", "ii", "iii.a", ...), empty on success
  std::string detail;

  explicit operator bool() const noexcept { return member; }
};

/// Tests membership of a configuration in S(k).
MembershipResult is_in_S(int k, const SpectrumConfiguration& config, double tol = kRealSnapTolerance);

}  // namespace jres
