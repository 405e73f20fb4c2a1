#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <doctest.h>

#include "jres/experiments.hpp"

namespace testing {

// Closed-form distribution functions used as oracles.
inline double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double half_normal_cdf(double x) { return x <= 0.0 ? 0.0 : std::erf(x / std::numbers::sqrt2); }

// chi with 3 degrees of freedom, scaled.
inline double chi3_cdf(double x, double scale) {
  if (x <= 0.0) return 0.0;
  const double u = x / scale;
  return std::erf(u / std::numbers::sqrt2) - std::sqrt(2.0 / std::numbers::pi) * u * std::exp(-u * u / 2.0);
}

// chi with 6 degrees of freedom: 1 - exp(-u^2/2)(1 + u^2/2 + u^4/8).
inline double chi6_cdf(double x, double scale) {
  if (x <= 0.0) return 0.0;
  const double h = (x / scale) * (x / scale) / 2.0;
  return 1.0 - std::exp(-h) * (1.0 + h + h * h / 2.0);
}

// KS test at alpha 0.01 with one retry on a fresh substream; the outcome of
// each attempt is logged.
inline bool ks_passes_with_retry(const std::function<std::vector<double>(jres::RandomStream&)>& draw,
                                 const std::function<double(double)>& cdf, std::uint64_t seed) {
  for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
    jres::RandomStream stream(seed, 0xABC0 + attempt);
    const auto r = jres::ks_test(draw(stream), cdf);
    MESSAGE("KS attempt " << attempt << ": D = " << r.statistic << ", p = " << r.p_value);
    if (r.p_value > jres::kKsAlpha) return true;
  }
  return false;
}

inline bool throws_with(const std::function<void()>& fn, const std::string& needle) {
  try {
    fn();
  } catch (const std::exception& e) {
    return std::string(e.what()).find(needle) != std::string::npos;
  }
  return false;
}

}  // namespace testing
