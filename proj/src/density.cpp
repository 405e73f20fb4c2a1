#include "jres/density.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/special_functions/gamma.hpp>

#include "jres/error.hpp"

namespace jres {

namespace {

struct CommonTerms {
  double log_value = 0.0;
  bool boundary = false;
};

// log of  prod_{j<k} |z_j - z_k| prod_{j<k} |1 - z_j conj z_k|^{(beta-2)/2}
//         prod_j exp(-beta n z_j^2 / (4 gamma^2)) |(1 - |z_j|^2)/(1 - z_j^2)|^{(beta-2)/4}
CommonTerms common_terms(const SpectrumConfiguration& config, double beta, int n, double gamma) {
  const auto& z = config.points;
  CommonTerms out;
  double vandermonde = 0.0;
  double pair_term = 0.0;
  for (std::size_t j = 0; j < z.size(); ++j)
    for (std::size_t k = j + 1; k < z.size(); ++k) {
      vandermonde += std::log(std::abs(z[j] - z[k]));
      pair_term += std::log(std::abs(1.0 - z[j] * std::conj(z[k])));
    }

  // Over a conjugate pair z^2 + conj(z)^2 = 2 Re z^2: keep the real parts and
  // require the imaginary parts to cancel.
  double sum_sq = 0.0;
  double imag_sq = 0.0;
  double scale = 0.0;
  for (const auto& x : z) {
    const Complex sq = x * x;
    scale += std::norm(x);
    sum_sq += sq.real();
    imag_sq += sq.imag();
  }
  if (std::abs(imag_sq) > 1e-9 * std::max(1.0, scale))
    throw ValidationError("configuration is not conjugation-closed: sum of z_j^2 is not real");

  double modulus_term = 0.0;
  for (const auto& x : z) {
    const double denom = std::abs(1.0 - x * x);
    if (denom < 1e-14) throw NumericalError("singular configuration: |1 - z_j^2| < 1e-14");
    const double num = std::abs(1.0 - std::norm(x));
    if (num == 0.0) out.boundary = true;
    modulus_term += std::log(num) - std::log(denom);
  }

  out.log_value = vandermonde - beta * n / (4.0 * gamma * gamma) * sum_sq;
  if (beta != 2.0) {
    // A point on the unit circle gives log 0 here; the product is then 0 or
    // infinite depending on the sign of beta - 2, and is reported as such.
    out.log_value += 0.5 * (beta - 2.0) * pair_term + 0.25 * (beta - 2.0) * modulus_term;
  }
  return out;
}

double real_product(const SpectrumConfiguration& config) {
  double prod = 1.0;
  for (const auto& x : config.points) {
    if (x.imag() == 0.0) prod *= x.real();
    else prod *= std::abs(x);  // a conjugate pair contributes |z|^2 = |z| * |z|
  }
  return prod;
}

LogDensityValue out_of_support(std::string reason, std::optional<double> kappa = std::nullopt) {
  LogDensityValue v;
  v.reason = std::move(reason);
  v.kappa_implied = kappa;
  return v;
}

}  // namespace

void DensityParams::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("beta must be positive and finite");
  if (n < 1) throw ParameterError("n must be at least 1");
  if (gamma == 0.0 || !std::isfinite(gamma)) throw ParameterError("gamma must be nonzero and finite");
}

NormalizationConstants normalization_constants(const DensityParams& params) {
  params.validate();
  const double beta = params.beta;
  const double n = params.n;
  const double g2 = params.gamma * params.gamma;
  const double power = n / 2.0 + beta * n * (n - 1.0) / 4.0;
  double log_gammas = 0.0;
  for (int j = 1; j < params.n; ++j) log_gammas += boost::math::lgamma(beta * j / 2.0);
  const double log_pi = std::log(std::numbers::pi);
  const double ln2 = std::numbers::ln2;

  NormalizationConstants out{};
  out.log_d_even = n / 2.0 * log_pi + (n / 2.0 + 1.0) * ln2 + beta * n * n / (2.0 * g2) +
                   power * std::log(2.0 * g2 / (beta * n)) + log_gammas;
  out.log_d_odd = n / 2.0 * log_pi + n / 2.0 * ln2 + beta * n * (n - 1.0) / (2.0 * g2) +
                  power * std::log(2.0 * g2 / (beta * n)) + log_gammas;
  out.log_c = n / 2.0 * log_pi - (n / 2.0 - 1.0) * ln2 + power * std::log(2.0 / (beta * n)) + log_gammas;
  return out;
}

LogDensityValue log_density_random_kappa(const SpectrumConfiguration& config, const DensityParams& params) {
  params.validate();
  if (!params.kappa_dist.has_density())
    throw ParameterError("the random-kappa density needs a kappa law with a density (chi or uniform)");
  const int count = 2 * params.n;
  if (static_cast<int>(config.size()) != count)
    throw ShapeError("random-kappa density needs " + std::to_string(count) + " points, got " +
                     std::to_string(config.size()));

  const double prod = real_product(config);
  if (!(prod < 1.0)) return out_of_support("product of points is not below 1; no real kappa");
  const double kappa = std::sqrt(1.0 - prod);

  const CommonTerms common = common_terms(config, params.beta, params.n, params.gamma);
  const MembershipResult member = is_in_S(count, config);
  if (!member) return out_of_support("not in S(" + std::to_string(count) + "): clause " + member.clause, kappa);
  const double f = params.kappa_dist.density_at(kappa);
  if (!(f > 0.0)) return out_of_support("kappa density vanishes at the implied kappa", kappa);

  const double beta_n = params.beta * params.n;
  const double g2 = params.gamma * params.gamma;
  LogDensityValue v;
  v.kappa_implied = kappa;
  v.in_support = true;
  v.boundary_flag = common.boundary;
  v.log_value = common.log_value + beta_n * kappa * kappa / (2.0 * g2) + std::log(f) - (beta_n - 1.0) * std::log(kappa) -
                normalization_constants(params).log_d_even;
  return v;
}

LogDensityValue log_density_kappa1(const SpectrumConfiguration& config, const DensityParams& params) {
  params.validate();
  const int count = 2 * params.n - 1;
  if (static_cast<int>(config.size()) != count)
    throw ShapeError("kappa = 1 density needs " + std::to_string(count) + " points, got " +
                     std::to_string(config.size()));
  const CommonTerms common = common_terms(config, params.beta, params.n, params.gamma);
  const MembershipResult member = is_in_S(count, config);
  if (!member) return out_of_support("not in S(" + std::to_string(count) + "): clause " + member.clause, 1.0);
  LogDensityValue v;
  v.kappa_implied = 1.0;
  v.in_support = true;
  v.boundary_flag = common.boundary;
  v.log_value = common.log_value - normalization_constants(params).log_d_odd;
  return v;
}

double wedge_factor(int pairs, int reals, int point_count) {
  if (pairs < 0 || reals < 0 || reals + 2 * pairs != point_count)
    throw ShapeError("wedge_factor: L + 2M must equal the point count");
  return std::exp(-boost::math::lgamma(pairs + 1.0) - boost::math::lgamma(reals + 1.0));
}

double canonical_chart_factor(int pairs) { return std::ldexp(1.0, pairs); }

}  // namespace jres
