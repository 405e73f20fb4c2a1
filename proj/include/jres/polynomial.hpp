#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace jres {

/// Coefficient storage type: binary128 where the compiler provides it.
#if defined(__SIZEOF_FLOAT128__)
__extension__ typedef __float128 Wide;
#else
typedef long double Wide;
#endif

inline Wide wide_abs(Wide x) noexcept { return x < 0 ? -x : x; }

/// Real polynomial with coefficients in ascending degree order.
///
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients and
/// degree() == -1. Coefficients are held in Wide precision; the recursion
/// maps built from them are too ill-conditioned for double storage.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(std::vector<double> coeffs);
  RealPolynomial(std::initializer_list<double> coeffs) : RealPolynomial(std::vector<double>(coeffs)) {}
  static RealPolynomial from_wide(std::vector<Wide> coeffs);

  static RealPolynomial one() { return RealPolynomial({1.0}); }
  static RealPolynomial monomial(int degree, double coeff = 1.0);

  int degree() const noexcept { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_monic() const noexcept { return !coeffs_.empty() && coeffs_.back() == 1.0; }

  /// Coefficient of z^i; zero outside [0, degree].
  double operator[](int i) const noexcept { return static_cast<double>(wide(i)); }
  Wide wide(int i) const noexcept { return (i < 0 || i > degree()) ? Wide(0) : coeffs_[static_cast<std::size_t>(i)]; }
  /// Coefficients rounded to double.
  std::vector<double> coeffs() const;
  const std::vector<Wide>& wide_coeffs() const noexcept { return coeffs_; }

  /// Largest absolute coefficient (0 for the zero polynomial).
  double max_abs_coeff() const noexcept;

  double operator()(double z) const noexcept;
  std::complex<double> operator()(std::complex<double> z) const noexcept;

  RealPolynomial derivative() const;

  /// z^shift * p.
  RealPolynomial shifted(int shift) const;

  friend RealPolynomial operator+(const RealPolynomial& p, const RealPolynomial& q);
  friend RealPolynomial operator-(const RealPolynomial& p, const RealPolynomial& q);
  friend RealPolynomial operator*(double c, const RealPolynomial& p);
  friend RealPolynomial operator*(const RealPolynomial& p, const RealPolynomial& q);
  friend bool operator==(const RealPolynomial&, const RealPolynomial&) = default;

 private:
  void trim();
  std::vector<Wide> coeffs_;
};

/// Quotient and remainder of exact-division style operations.
struct DivisionResult {
  RealPolynomial quotient;
  RealPolynomial remainder;
};

/// Long division p = q * d + r with deg r < deg d. Throws ParameterError for d = 0.
DivisionResult divide(const RealPolynomial& p, const RealPolynomial& d);

/// z^m p(1/z): coefficient vector reversed within length m + 1.
/// Throws ParameterError if m < degree(p).
RealPolynomial reversal(const RealPolynomial& p, int m);

/// Max absolute deviation between coefficients.
double coeff_distance(const RealPolynomial& p, const RealPolynomial& q);

}  // namespace jres
