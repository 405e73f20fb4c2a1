#pragma once

#include <map>
#include <string>
#include <vector>

#include "jres/operator_model.hpp"
#include "jres/random_stream.hpp"
#include "jres/spectra.hpp"

namespace jres {

/// Readings of the pair product in the fifth identity,
///   prod_{pairs} (1 - z_j conj(z_k)) * prod_j 1/(1 - z_j^2) = prod_j a_j^{4j}.
enum class LemmaVConvention {
  unordered_pairs,          // product over j < k in canonical root order, as printed
  unordered_pairs_modulus,  // |1 - z_j conj(z_k)| over j < k, |1 - z_j^2| below
  ordered_pairs,            // product over all ordered (j, k), diagonal included
};

const char* to_string(LemmaVConvention c) noexcept;
LemmaVConvention parse_lemma_v_convention(const std::string& name);
inline constexpr LemmaVConvention kAllLemmaVConventions[] = {
    LemmaVConvention::unordered_pairs, LemmaVConvention::unordered_pairs_modulus, LemmaVConvention::ordered_pairs};

struct IdentityEntry {
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;
  bool skipped = false;
  std::string note;
};

/// Residuals keyed by identity name (lemma_i .. lemma_v, sbs1, sbs2, jacobian_total).
struct IdentityReport {
  std::map<std::string, IdentityEntry> entries;
  std::string lemma_v_convention;

  void add(const std::string& name, double residual, double tolerance);
  bool all_pass() const;
};

inline constexpr double kLemmaTolerance = 1e-9;
inline constexpr double kLemmaVTolerance = 1e-7;
inline constexpr double kJacobianTolerance = 1e-4;

/// Complex log of the left-hand side of the fifth identity under a convention.
/// Roots must be conjugation-closed for the ordered-pair reading to be real.
Complex lemma_v_log_lhs(const std::vector<Complex>& roots, LemmaVConvention convention);
/// log prod_{j <= floor(m/2)} a_j^{4j}.
double lemma_v_log_rhs(const JacobiCoefficients& coeffs, int m);

/// Evaluates identities (i)-(v) on L*_m of the given coefficients (1 <= m <= 2n).
/// (v) is skipped, with a note, when some |1 - z_j^2| < 1e-12.
IdentityReport check_lemma_identities(const JacobiCoefficients& coeffs, int m, LemmaVConvention convention);

/// Outcome of testing each reading of the fifth identity on a fixture and on random draws.
struct ConventionResolution {
  LemmaVConvention chosen = LemmaVConvention::ordered_pairs;
  bool resolved = false;
  std::map<std::string, double> fixture_residual;  // by convention name
  std::map<std::string, double> random_max_residual;
  int draws = 0;
};

/// Fixture a = (2), b = (0): zeros +-sqrt(3), right-hand side 16.
JacobiCoefficients lemma_v_fixture();

/// Picks the unique reading whose residual is below kLemmaVTolerance on the
/// fixture and on `draws` random coefficient sets (n <= 6, generic stratum).
ConventionResolution resolve_lemma_v_convention(RandomStream stream, int draws);

struct JacobianCheck {
  double fd_determinant = 0.0;
  double expected = 0.0;
  double relative_error = 0.0;
  bool pass = false;
};

struct StepwiseJacobian {
  JacobianCheck sbs1;  // (u^(2k), b_{k+1}) -> u^(2k+1), expected -1
  JacobianCheck sbs2;  // (u^(2k+1), a_{k+1}) -> u^(2k+2), expected -2 a_{k+1}^{2k+1}
};

inline constexpr double kDefaultFdStep = 1e-5;

/// Central-difference determinants of the two step maps at step k (0 <= k < n).
/// h must lie in [1e-7, 1e-4]; each coordinate is perturbed by h * max(1, |x|).
StepwiseJacobian stepwise_jacobian_fd(const JacobiCoefficients& coeffs, int k, double h = kDefaultFdStep);

/// |det d(u_{2n-1}, ..., u_0) / d(b_1, a_1, ..., b_n, a_n)| against 2^n prod a_j^{2j-1}; n <= 6.
JacobianCheck total_jacobian_fd(const JacobiCoefficients& coeffs, double h = kDefaultFdStep);

/// Determinant by Gaussian elimination with partial pivoting (row-major square matrix).
double determinant(std::vector<double> matrix, std::size_t n);

}  // namespace jres
