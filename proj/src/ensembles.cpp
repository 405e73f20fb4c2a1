#include "jres/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/special_functions/gamma.hpp>

#include "jres/error.hpp"

namespace jres {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else {
      current.push_back(c);
    }
  }
  parts.push_back(current);
  return parts;
}

double parse_number(const std::string& token, const std::string& spec) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParameterError("malformed kappa spec '" + spec + "': '" + token + "' is not a number");
  }
  if (used != token.size() || !std::isfinite(value)) {
    throw ParameterError("malformed kappa spec '" + spec + "': '" + token + "' is not a number");
  }
  return value;
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

KappaDistribution KappaDistribution::chi(double dof, double scale) {
  if (!(dof > 0.0) || !(scale > 0.0)) throw ParameterError("chi kappa law needs dof > 0 and scale > 0");
  return {Family::chi, dof, scale};
}

KappaDistribution KappaDistribution::uniform(double lo, double hi) {
  if (!(lo > 0.0) || !(hi > lo)) throw ParameterError("uniform kappa law needs 0 < lo < hi");
  return {Family::uniform, lo, hi};
}

KappaDistribution KappaDistribution::point(double value) {
  if (!(value > 0.0)) throw ParameterError("point kappa law needs value > 0");
  return {Family::point, value, 0.0};
}

KappaDistribution KappaDistribution::parse(const std::string& spec) {
  const auto parts = split(spec, ':');
  const std::string& family = parts.front();
  if (family == "point" && parts.size() == 2) return point(parse_number(parts[1], spec));
  if (family == "uniform" && parts.size() == 3)
    return uniform(parse_number(parts[1], spec), parse_number(parts[2], spec));
  if (family == "chi" && parts.size() == 3) return chi(parse_number(parts[1], spec), parse_number(parts[2], spec));
  throw ParameterError("malformed kappa spec '" + spec + "' (expected point:v, uniform:lo:hi or chi:k:scale)");
}

std::string KappaDistribution::to_string() const {
  switch (family_) {
    case Family::chi:
      return "chi:" + format_number(p1_) + ":" + format_number(p2_);
    case Family::uniform:
      return "uniform:" + format_number(p1_) + ":" + format_number(p2_);
    case Family::point:
      return "point:" + format_number(p1_);
  }
  return {};
}

double KappaDistribution::density_at(double kappa) const {
  switch (family_) {
    case Family::chi: {
      if (!(kappa > 0.0)) return 0.0;
      const double dof = p1_;
      const double x = kappa / p2_;
      const double log_f = (dof - 1.0) * std::log(x) - 0.5 * x * x - (0.5 * dof - 1.0) * std::numbers::ln2 -
                           boost::math::lgamma(0.5 * dof) - std::log(p2_);
      return std::exp(log_f);
    }
    case Family::uniform:
      return (kappa >= p1_ && kappa <= p2_) ? 1.0 / (p2_ - p1_) : 0.0;
    case Family::point:
      throw ParameterError("point kappa law has no density");
  }
  return 0.0;
}

double KappaDistribution::cdf(double kappa) const {
  switch (family_) {
    case Family::chi: {
      if (!(kappa > 0.0)) return 0.0;
      const double x = kappa / p2_;
      return boost::math::gamma_p(0.5 * p1_, 0.5 * x * x);
    }
    case Family::uniform:
      return std::clamp((kappa - p1_) / (p2_ - p1_), 0.0, 1.0);
    case Family::point:
      return kappa >= p1_ ? 1.0 : 0.0;
  }
  return 0.0;
}

double KappaDistribution::mean() const {
  switch (family_) {
    case Family::chi:
      return p2_ * std::numbers::sqrt2 *
             std::exp(boost::math::lgamma(0.5 * (p1_ + 1.0)) - boost::math::lgamma(0.5 * p1_));
    case Family::uniform:
      return 0.5 * (p1_ + p2_);
    case Family::point:
      return p1_;
  }
  return 0.0;
}

void EnsembleParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive and finite");
  if (n < 1) throw ParameterError("n must be at least 1");
  if (gamma == 0.0 || !std::isfinite(gamma)) throw ParameterError("gamma must be nonzero and finite");
}

double HermitianMatrix::hermitian_defect() const {
  double defect = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i; j < n_; ++j)
      defect = std::max(defect, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return defect;
}

double normal_sample(RandomStream& stream, double mean, double variance) {
  if (!(variance > 0.0)) throw ParameterError("normal variance must be positive");
  // Box-Muller, cosine branch only: one draw consumes exactly two uniforms.
  const double u1 = stream.uniform();
  const double u2 = stream.uniform();
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return mean + std::sqrt(variance) * z;
}

double gamma_sample(RandomStream& stream, double shape) {
  if (!(shape > 0.0)) throw ParameterError("gamma shape must be positive");
  if (shape < 1.0) {
    const double g = gamma_sample(stream, shape + 1.0);
    return g * std::pow(stream.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal_sample(stream, 0.0, 1.0);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = stream.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double chi_sample(RandomStream& stream, double dof, double scale) {
  if (!(dof > 0.0)) throw ParameterError("chi degrees of freedom must be positive");
  if (!(scale > 0.0)) throw ParameterError("chi scale must be positive");
  double g = gamma_sample(stream, 0.5 * dof);
  // Gamma variates with tiny shape can underflow to zero; the chi law has no atom there.
  while (!(g > 0.0)) g = gamma_sample(stream, 0.5 * dof);
  return scale * std::sqrt(2.0 * g);
}

double sample_kappa(const KappaDistribution& dist, RandomStream& stream) {
  switch (dist.family()) {
    case KappaDistribution::Family::chi:
      return chi_sample(stream, dist.param1(), dist.param2());
    case KappaDistribution::Family::uniform:
      return dist.param1() + (dist.param2() - dist.param1()) * stream.uniform();
    case KappaDistribution::Family::point:
      return dist.param1();
  }
  return 0.0;
}

TridiagonalSample sample_de_tridiagonal(const EnsembleParams& params, RandomStream& stream) {
  params.validate();
  const int n = params.n;
  const double bn = params.beta * n;
  TridiagonalSample out;
  out.s.reserve(n);
  out.t.reserve(n - 1);
  for (int j = 0; j < n; ++j) out.s.push_back(normal_sample(stream, 0.0, 2.0 / bn));
  const double scale = 1.0 / std::sqrt(bn);
  for (int j = 1; j < n; ++j) out.t.push_back(chi_sample(stream, params.beta * (n - j), scale));
  return out;
}

HermitianMatrix sample_dense_gaussian(int beta, int n, RandomStream& stream) {
  if (beta == 4) throw UnsupportedVariant("dense quaternionic (beta=4) sampling is not supported; use the tridiagonal model");
  if (beta != 1 && beta != 2) throw ParameterError("dense Gaussian ensembles need beta in {1, 2}");
  if (n < 1) throw ParameterError("n must be at least 1");
  const auto size = static_cast<std::size_t>(n);
  HermitianMatrix y(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = 0; j < size; ++j) {
      const double re = normal_sample(stream, 0.0, 1.0);
      const double im = beta == 2 ? normal_sample(stream, 0.0, 1.0) : 0.0;
      y(i, j) = {re, im};
    }
  const double scale = std::sqrt(2.0 / (beta * n));
  HermitianMatrix x(size);
  for (std::size_t i = 0; i < size; ++i)
    for (std::size_t j = i; j < size; ++j) {
      const auto v = 0.5 * (y(i, j) + std::conj(y(j, i))) * scale;
      if (i == j) {
        x(i, i) = {v.real(), 0.0};
      } else {
        x(i, j) = v;
        x(j, i) = std::conj(v);
      }
    }
  return x;
}

TridiagonalSample householder_tridiagonalize(const HermitianMatrix& matrix) {
  using cplx = std::complex<double>;
  const std::size_t n = matrix.size();
  double max_entry = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) max_entry = std::max(max_entry, std::abs(matrix(i, j)));
  if (matrix.hermitian_defect() > 1e-12 * std::max(1.0, max_entry))
    throw ValidationError("householder_tridiagonalize: input is not Hermitian");

  HermitianMatrix a = matrix;
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    // Reflect x = a[k+1:, k] onto a multiple of e_{k+1}; rows/columns 0..k untouched.
    double tail_norm2 = 0.0;
    for (std::size_t i = k + 2; i < n; ++i) tail_norm2 += std::norm(a(i, k));
    if (tail_norm2 == 0.0) continue;
    const cplx x0 = a(k + 1, k);
    const double xnorm = std::sqrt(std::norm(x0) + tail_norm2);
    const cplx phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cplx(1.0, 0.0);
    std::fill(v.begin(), v.end(), cplx{});
    v[k + 1] = x0 + phase * xnorm;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
    const double tau = 2.0 / vnorm2;

    // a <- H a with H = I - tau v v^*.
    for (std::size_t j = 0; j < n; ++j) {
      cplx w{};
      for (std::size_t i = k + 1; i < n; ++i) w += std::conj(v[i]) * a(i, j);
      w *= tau;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= v[i] * w;
    }
    // a <- a H.
    for (std::size_t i = 0; i < n; ++i) {
      cplx w{};
      for (std::size_t j = k + 1; j < n; ++j) w += a(i, j) * v[j];
      w *= tau;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= w * std::conj(v[j]);
    }
    for (std::size_t i = k + 2; i < n; ++i) {
      a(i, k) = {};
      a(k, i) = {};
    }
  }

  // The remaining off-diagonal phases are removed by a diagonal unitary with D_11 = 1.
  TridiagonalSample out;
  out.s.resize(n);
  out.t.resize(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) out.s[i] = a(i, i).real();
  for (std::size_t i = 0; i + 1 < n; ++i) out.t[i] = std::abs(a(i + 1, i));
  return out;
}

}  // namespace jres
