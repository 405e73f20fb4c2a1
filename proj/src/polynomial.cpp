#include "jres/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "jres/error.hpp"

namespace jres {

RealPolynomial::RealPolynomial(std::vector<double> coeffs) : coeffs_(coeffs.begin(), coeffs.end()) { trim(); }

RealPolynomial RealPolynomial::from_wide(std::vector<Wide> coeffs) {
  RealPolynomial p;
  p.coeffs_ = std::move(coeffs);
  p.trim();
  return p;
}

std::vector<double> RealPolynomial::coeffs() const {
  return std::vector<double>(coeffs_.begin(), coeffs_.end());
}

RealPolynomial RealPolynomial::monomial(int degree, double coeff) {
  if (degree < 0) throw ParameterError("monomial degree must be nonnegative");
  std::vector<Wide> c(static_cast<std::size_t>(degree) + 1, 0);
  c.back() = coeff;
  return from_wide(std::move(c));
}

void RealPolynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

double RealPolynomial::max_abs_coeff() const noexcept {
  Wide m = 0;
  for (Wide c : coeffs_) m = std::max(m, wide_abs(c));
  return static_cast<double>(m);
}

double RealPolynomial::operator()(double z) const noexcept {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + static_cast<double>(*it);
  return acc;
}

std::complex<double> RealPolynomial::operator()(std::complex<double> z) const noexcept {
  std::complex<double> acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + static_cast<double>(*it);
  return acc;
}

RealPolynomial RealPolynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<Wide> d(coeffs_.size() - 1);
  for (std::size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = static_cast<Wide>(i) * coeffs_[i];
  return from_wide(std::move(d));
}

RealPolynomial RealPolynomial::shifted(int shift) const {
  if (is_zero()) return {};
  if (shift >= 0) {
    std::vector<Wide> c(static_cast<std::size_t>(shift), 0);
    c.insert(c.end(), coeffs_.begin(), coeffs_.end());
    return from_wide(std::move(c));
  }
  const auto drop = static_cast<std::size_t>(-shift);
  if (drop >= coeffs_.size()) return {};
  return from_wide(std::vector<Wide>(coeffs_.begin() + static_cast<std::ptrdiff_t>(drop), coeffs_.end()));
}

RealPolynomial operator+(const RealPolynomial& p, const RealPolynomial& q) {
  std::vector<Wide> c(std::max(p.coeffs_.size(), q.coeffs_.size()), 0);
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) c[i] += p.coeffs_[i];
  for (std::size_t i = 0; i < q.coeffs_.size(); ++i) c[i] += q.coeffs_[i];
  return RealPolynomial::from_wide(std::move(c));
}

RealPolynomial operator-(const RealPolynomial& p, const RealPolynomial& q) {
  std::vector<Wide> c(std::max(p.coeffs_.size(), q.coeffs_.size()), 0);
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i) c[i] += p.coeffs_[i];
  for (std::size_t i = 0; i < q.coeffs_.size(); ++i) c[i] -= q.coeffs_[i];
  return RealPolynomial::from_wide(std::move(c));
}

RealPolynomial operator*(double s, const RealPolynomial& p) {
  std::vector<Wide> c = p.coeffs_;
  for (Wide& x : c) x *= s;
  return RealPolynomial::from_wide(std::move(c));
}

RealPolynomial operator*(const RealPolynomial& p, const RealPolynomial& q) {
  if (p.is_zero() || q.is_zero()) return {};
  std::vector<Wide> c(p.coeffs_.size() + q.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < p.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < q.coeffs_.size(); ++j) c[i + j] += p.coeffs_[i] * q.coeffs_[j];
  return RealPolynomial::from_wide(std::move(c));
}

DivisionResult divide(const RealPolynomial& p, const RealPolynomial& d) {
  if (d.is_zero()) throw ParameterError("division by the zero polynomial");
  if (p.degree() < d.degree()) return {RealPolynomial{}, p};
  std::vector<Wide> rem = p.wide_coeffs();
  const int dd = d.degree();
  const Wide lead = d.wide(dd);
  std::vector<Wide> quot(static_cast<std::size_t>(p.degree() - dd) + 1, 0);
  for (int k = p.degree() - dd; k >= 0; --k) {
    const Wide qk = rem[static_cast<std::size_t>(k + dd)] / lead;
    quot[static_cast<std::size_t>(k)] = qk;
    for (int i = 0; i <= dd; ++i) rem[static_cast<std::size_t>(k + i)] -= qk * d.wide(i);
    rem[static_cast<std::size_t>(k + dd)] = 0;
  }
  rem.resize(static_cast<std::size_t>(dd));
  return {RealPolynomial::from_wide(std::move(quot)), RealPolynomial::from_wide(std::move(rem))};
}

RealPolynomial reversal(const RealPolynomial& p, int m) {
  if (m < 0 || m < p.degree()) throw ParameterError("reversal length must be at least the degree");
  std::vector<Wide> c(static_cast<std::size_t>(m) + 1, 0);
  for (int i = 0; i <= p.degree(); ++i) c[static_cast<std::size_t>(m - i)] = p.wide(i);
  return RealPolynomial::from_wide(std::move(c));
}

double coeff_distance(const RealPolynomial& p, const RealPolynomial& q) {
  double d = 0.0;
  const int deg = std::max(p.degree(), q.degree());
  for (int i = 0; i <= deg; ++i) d = std::max(d, static_cast<double>(wide_abs(p.wide(i) - q.wide(i))));
  return d;
}

}  // namespace jres
