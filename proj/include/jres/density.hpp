#pragma once

#include <limits>
#include <optional>
#include <string>

#include "jres/ensembles.hpp"
#include "jres/spectra.hpp"

namespace jres {

struct DensityParams {
  double beta = 2.0;
  int n = 1;
  double gamma = 1.0;
  KappaDistribution kappa_dist = KappaDistribution::chi(3.0, 0.5);

  void validate() const;
};

struct LogDensityValue {
  double log_value = -std::numeric_limits<double>::infinity();
  std::optional<double> kappa_implied;
  bool in_support = false;
  /// Set when a point sits on the unit circle and a modulus factor is 0 or infinite.
  bool boundary_flag = false;
  std::string reason;  // why the configuration is outside the support, if it is
};

struct NormalizationConstants {
  double log_d_even;  // log d_{2n,beta}
  double log_d_odd;   // log d_{2n-1,beta}
  double log_c;       // log c_{n,beta} of the tridiagonal coefficient law
};

/// log d_{2n,beta}, log d_{2n-1,beta} and log c_{n,beta}, via log-gamma.
NormalizationConstants normalization_constants(const DensityParams& params);

/// Joint density of the 2n eigenvalues/resonances for random kappa with density F,
/// with kappa = sqrt(1 - prod z_j). Throws ShapeError if the configuration does not
/// have 2n points and NumericalError (singular configuration) if |1 - z_j^2| < 1e-14.
LogDensityValue log_density_random_kappa(const SpectrumConfiguration& config, const DensityParams& params);

/// Joint density of the 2n - 1 points when kappa = 1 (no kappa block).
LogDensityValue log_density_kappa1(const SpectrumConfiguration& config, const DensityParams& params);

/// 1 / (M! L!): the wedge-measure weight when integrating over unrestricted
/// (x_1, y_1, ..., x_M, y_M, r_1, ..., r_L) coordinates. Throws ShapeError if
/// L + 2M != point_count.
double wedge_factor(int pairs, int reals, int point_count);

/// Weight of a single canonical chart (r_1 < ... < r_L, y_j > 0, pairs ordered):
/// wedge_factor * M! L! 2^M = 2^M.
double canonical_chart_factor(int pairs);

}  // namespace jres
