#include "jres/experiments.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>

#include "jres/error.hpp"
#include "jres/gc_engine.hpp"

namespace jres {

namespace {

std::uint32_t purpose_for(std::uint32_t base, int attempt) {
  return base | (static_cast<std::uint32_t>(attempt) * kPurposeRetry);
}

RandomStream trial_stream(std::uint64_t seed, std::uint32_t purpose, std::size_t trial, int attempt) {
  return RandomStream(seed, stream_id_for(purpose_for(purpose, attempt), trial));
}

double normal_cdf(double x, double variance) {
  return 0.5 * boost::math::erfc(-x / std::sqrt(2.0 * variance));
}

nlohmann::json kappa_json(const KappaDistribution& k) { return k.to_string(); }

ExperimentReport make_report(std::string name, std::size_t trials, const RunOptions& options) {
  ExperimentReport r;
  r.name = std::move(name);
  r.trials = static_cast<std::int64_t>(trials);
  r.seed = options.seed;
  return r;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

}  // namespace

void ExperimentReport::verdict(std::string vname, bool vpass, double value, double tolerance, std::string detail) {
  verdicts.push_back(Verdict{std::move(vname), vpass, value, tolerance, std::move(detail)});
}

bool ExperimentReport::pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

nlohmann::json ExperimentReport::to_json() const {
  nlohmann::json j;
  j["name"] = name;
  j["trials"] = trials;
  j["seed"] = seed;
  j["parameters"] = parameters;
  j["statistics"] = nlohmann::json::object();
  for (const auto& [k, v] : statistics) j["statistics"][k] = v;
  j["verdicts"] = nlohmann::json::array();
  for (const auto& v : verdicts)
    j["verdicts"].push_back({{"name", v.name}, {"pass", v.pass}, {"value", v.value}, {"tolerance", v.tolerance},
                             {"detail", v.detail}});
  j["pass"] = pass();
  j["log"] = log;
  return j;
}

TrialRecord sample_trial(const EnsembleParams& params, std::uint64_t seed, std::size_t trial, int attempt) {
  TrialRecord r;
  r.trial = trial;
  RandomStream stream = trial_stream(seed, kPurposeSampling, trial, attempt);
  r.tridiag = sample_de_tridiagonal(params, stream);
  r.kappa = sample_kappa(params.kappa_dist, stream);
  try {
    r.coeffs = assemble_coupled(r.tridiag, params.gamma, r.kappa);
    r.expected_count = r.coeffs.perturbation_order();
    const GCSequence seq = gc_forward(r.coeffs);
    const std::vector<Complex> roots = polynomial_roots(seq.final_lstar());
    Complex prod = 1.0;
    Complex sum = 0.0;
    for (const auto& z : roots) {
      prod *= z;
      sum += z;
    }
    r.sum_zeros = sum.real();
    r.sum_zeros_imag = sum.imag();
    r.kappa_check_residual = std::abs(r.kappa - std::sqrt(std::max(0.0, 1.0 - prod.real())));
    r.config = canonicalize_conjugates(roots);
    const MembershipResult m = is_in_S(r.expected_count, r.config);
    r.in_S = m.member;
    r.membership_clause = m.clause;
  } catch (const Error& e) {
    r.failure = e.what();
  }
  return r;
}

ResonanceDataset run_resonance_sampling(const EnsembleParams& params, std::size_t trials, const RunOptions& options) {
  params.validate();
  ResonanceDataset out;
  out.records = parallel_map<TrialRecord>(trials, options.workers, [&](std::size_t i) {
    return sample_trial(params, options.seed, i, options.attempt);
  });
  for (const auto& r : out.records)
    if (!r.failure.empty()) ++out.failures;
  out.failure_rate_ok = static_cast<double>(out.failures) <= 1e-3 * static_cast<double>(trials);
  return out;
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 0.2) return 1.0;  // the series is 1 to double precision here
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.size() < 20) throw ParameterError("ks_test needs at least 20 samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  const double sn = std::sqrt(n);
  return KsResult{d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

KsResult ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.size() < 20 || y.size() < 20) throw ParameterError("ks_two_sample needs at least 20 samples per side");
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(i / nx - j / ny));
  }
  const double ne = std::sqrt(nx * ny / (nx + ny));
  return KsResult{d, kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

ExperimentReport sum_zeros_test(const EnsembleParams& params, std::size_t trials, const RunOptions& options) {
  if (trials < 1000) throw ParameterError("sum_zeros_test needs at least 1000 trials");
  ExperimentReport report = make_report("sum_zeros", trials, options);
  report.parameters = {{"beta", params.beta}, {"n", params.n}, {"gamma", params.gamma},
                       {"kappa", kappa_json(params.kappa_dist)}, {"alpha", kKsAlpha}};
  const double variance = 2.0 * params.gamma * params.gamma / params.beta;

  KsResult ks;
  double max_imag = 0.0;
  std::size_t failures = 0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    RunOptions opt = options;
    opt.attempt = attempt;
    const ResonanceDataset data = run_resonance_sampling(params, trials, opt);
    std::vector<double> sums;
    sums.reserve(trials);
    max_imag = 0.0;
    failures = data.failures;
    for (const auto& r : data.records) {
      if (!r.failure.empty()) continue;
      sums.push_back(r.sum_zeros);
      max_imag = std::max(max_imag, std::abs(r.sum_zeros_imag));
    }
    double m = 0.0;
    double m2 = 0.0;
    for (double s : sums) {
      m += s;
      m2 += s * s;
    }
    m /= static_cast<double>(sums.size());
    m2 /= static_cast<double>(sums.size());
    report.statistics["mean"] = m;
    report.statistics["variance"] = m2 - m * m;
    ks = ks_test(sums, [variance](double x) { return normal_cdf(x, variance); });
    report.log.push_back("attempt " + std::to_string(attempt) + ": KS statistic " + fmt(ks.statistic) + ", p " +
                         fmt(ks.p_value));
    if (ks.p_value > kKsAlpha) break;
  }
  report.statistics["expected_variance"] = variance;
  report.statistics["ks_statistic"] = ks.statistic;
  report.statistics["ks_p_value"] = ks.p_value;
  report.statistics["max_imag_sum"] = max_imag;
  report.statistics["failures"] = static_cast<double>(failures);
  report.verdict("ks_normal", ks.p_value > kKsAlpha, ks.p_value, kKsAlpha, "p-value must exceed alpha");
  report.verdict("sum_real", max_imag < 1e-9, max_imag, 1e-9);
  report.verdict("failure_rate", failures <= trials / 1000, static_cast<double>(failures),
                 static_cast<double>(trials / 1000));
  return report;
}

ExperimentReport semicircle_moment_test(double beta, int n, std::size_t trials, const RunOptions& options) {
  if (n < 50) throw ParameterError("semicircle_moment_test needs n >= 50");
  if (trials < 1) throw ParameterError("trials must be at least 1");
  EnsembleParams params{beta, n, 1.0, KappaDistribution::point(1.0)};
  params.validate();
  ExperimentReport report = make_report("semicircle_moments", trials, options);
  report.parameters = {{"beta", beta}, {"n", n}};

  struct Moments {
    double m2 = 0.0;
    double m4 = 0.0;
  };
  const auto moments = parallel_map<Moments>(trials, options.workers, [&](std::size_t i) {
    RandomStream stream = trial_stream(options.seed, kPurposeSemicircle, i, options.attempt);
    const TridiagonalSample sample = sample_de_tridiagonal(params, stream);
    const std::vector<double> eig = tridiag_eigenvalues(TruncatedOperator{sample.s, sample.t});
    Moments m;
    for (double x : eig) {
      m.m2 += x * x;
      m.m4 += x * x * x * x;
    }
    m.m2 /= n;
    m.m4 /= n;
    return m;
  });
  double m2 = 0.0;
  double m4 = 0.0;
  for (const auto& m : moments) {
    m2 += m.m2;
    m4 += m.m4;
  }
  m2 /= static_cast<double>(trials);
  m4 /= static_cast<double>(trials);
  report.statistics["second_moment"] = m2;
  report.statistics["fourth_moment"] = m4;
  report.verdict("second_moment", std::abs(m2 - 1.0) <= 0.02, m2, 0.02, "|m2 - 1| <= 0.02");
  report.verdict("fourth_moment", std::abs(m4 - 2.0) <= 0.05, m4, 0.05, "|m4 - 2| <= 0.05");
  return report;
}

ExperimentReport dense_vs_tridiagonal_test(int beta, int n, std::size_t trials, const RunOptions& options) {
  if (beta != 1 && beta != 2) throw ParameterError("dense cross-check supports beta 1 and 2");
  if (n < 1 || n > 4) throw ParameterError("dense cross-check supports 1 <= n <= 4");
  EnsembleParams params{static_cast<double>(beta), n, 1.0, KappaDistribution::point(1.0)};
  ExperimentReport report = make_report("dense_vs_tridiagonal", trials, options);
  report.parameters = {{"beta", beta}, {"n", n}, {"alpha", kKsAlpha}};

  double min_p = 1.0;
  for (int attempt = 0; attempt < 2; ++attempt) {
    const int stage = options.attempt + attempt;
    const auto dense = parallel_map<TridiagonalSample>(trials, options.workers, [&](std::size_t i) {
      RandomStream stream = trial_stream(options.seed, kPurposeDense, i, stage);
      return householder_tridiagonalize(sample_dense_gaussian(beta, n, stream));
    });
    const auto tri = parallel_map<TridiagonalSample>(trials, options.workers, [&](std::size_t i) {
      RandomStream stream = trial_stream(options.seed, kPurposeTridiagonal, i, stage);
      return sample_de_tridiagonal(params, stream);
    });
    min_p = 1.0;
    std::ostringstream line;
    line << "attempt " << attempt << ":";
    auto compare = [&](const std::string& label, auto getter) {
      std::vector<double> x;
      std::vector<double> y;
      for (std::size_t i = 0; i < trials; ++i) {
        x.push_back(getter(dense[i]));
        y.push_back(getter(tri[i]));
      }
      const KsResult ks = ks_two_sample(x, y);
      report.statistics["ks_p_" + label] = ks.p_value;
      report.statistics["ks_statistic_" + label] = ks.statistic;
      min_p = std::min(min_p, ks.p_value);
      line << ' ' << label << " p " << fmt(ks.p_value);
    };
    for (int j = 0; j < n; ++j)
      compare("s" + std::to_string(j + 1), [j](const TridiagonalSample& s) { return s.s[j]; });
    for (int j = 0; j + 1 < n; ++j)
      compare("t" + std::to_string(j + 1), [j](const TridiagonalSample& s) { return s.t[j]; });
    report.log.push_back(line.str());
    if ((2.0 * n - 1.0) * min_p > kKsAlpha) break;
  }
  // Bonferroni over the 2n - 1 coordinates keeps the joint test at level alpha.
  const double coordinates = 2.0 * n - 1.0;
  const double joint_p = std::min(1.0, coordinates * min_p);
  report.statistics["min_p_value"] = min_p;
  report.statistics["joint_p_value"] = joint_p;
  report.verdict("ks_joint", joint_p > kKsAlpha, joint_p, kKsAlpha, "Bonferroni over per-coordinate p-values");
  return report;
}

// ---- n = 1 density ---------------------------------------------------------

namespace {

constexpr double kBoxRadius = 6.0;

struct N1Density {
  DensityParams params;

  double eval(const std::vector<Complex>& pts) const {
    try {
      SpectrumConfiguration c;
      c.points = pts;
      c.labels.resize(pts.size());
      c = classify(std::move(c));
      const LogDensityValue v = log_density_random_kappa(c, params);
      return v.in_support ? std::exp(v.log_value) : 0.0;
    } catch (const NumericalError&) {
      return 0.0;  // measure-zero set |z| = 1 on the real axis
    }
  }
  // Canonical chart weights: real pair with r1 < r2 has weight 1, conjugate
  // pair in (x, y > 0) has weight 2.
  double real_pair(double r1, double r2) const {
    if (r1 > r2) std::swap(r1, r2);
    return eval({Complex(r1, 0.0), Complex(r2, 0.0)});
  }
  double conjugate_pair(double x, double y) const {
    if (!(y > 0.0)) return 0.0;
    return canonical_chart_factor(1) * eval({Complex(x, y), Complex(x, -y)});
  }
};

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr unsigned kGkDepth = 12;
constexpr double kGkTol = 1e-9;

// Integral of the real-pair density over r1 < r2 with both in [-w, w].
// Support is r1 r2 < 1; the inner limits follow that curve.
double real_pair_mass(const N1Density& d, double w, double* err_out) {
  double err_total = 0.0;
  auto inner = [&](double r1) {
    double lo;
    double hi;
    if (r1 >= 1.0) return 0.0;
    if (r1 > 0.0) {
      lo = r1;
      hi = std::min(1.0 / r1, w);
    } else if (r1 >= -1.0) {
      lo = r1;
      hi = w;
    } else {
      lo = std::max(1.0 / r1, r1);
      hi = w;
    }
    if (!(hi > lo)) return 0.0;
    double err = 0.0;
    const double v = GK::integrate([&](double r2) { return d.real_pair(r1, r2); }, lo, hi, kGkDepth, kGkTol, &err);
    return v;
  };
  double total = 0.0;
  const std::array<double, 5> breaks{-w, -1.0, 0.0, 1.0, 1.0};
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    if (!(breaks[i + 1] > breaks[i])) continue;
    double err = 0.0;
    total += GK::integrate(inner, breaks[i], breaks[i + 1], kGkDepth, kGkTol, &err);
    err_total += err;
  }
  if (err_out) *err_out += err_total;
  return total;
}

// Conjugate pairs lie inside the unit disk; integrate in polar coordinates.
double conjugate_pair_mass(const N1Density& d, double* err_out) {
  double err_total = 0.0;
  auto inner = [&](double rho) {
    double err = 0.0;
    return rho * GK::integrate([&](double th) { return d.conjugate_pair(rho * std::cos(th), rho * std::sin(th)); },
                               0.0, std::numbers::pi, kGkDepth, kGkTol, &err);
  };
  double err = 0.0;
  const double v = GK::integrate(inner, 0.0, 1.0, kGkDepth, kGkTol, &err);
  err_total += err;
  if (err_out) *err_out += err_total;
  return v;
}

// Real-pair mass over r1 < r2 inside [lo, hi]^2 tabulated on a G x G grid
// (4 x 4 Gauss-Legendre per cell). Entry (i, j) is the cell with r1 in column
// i and r2 in row j; cells below the diagonal are zero, diagonal cells carry
// half the full-cell integral of the symmetric extension.
struct Grid {
  double x_lo = 0.0;
  double x_hi = 0.0;
  double y_lo = 0.0;
  double y_hi = 0.0;
  int size = 0;
  std::vector<double> mass;  // size * size, index i * size + j
  double at(int i, int j) const { return mass[static_cast<std::size_t>(i) * size + j]; }
  int column(double x) const { return std::clamp(static_cast<int>((x - x_lo) / (x_hi - x_lo) * size), 0, size - 1); }
  int row(double y) const { return std::clamp(static_cast<int>((y - y_lo) / (y_hi - y_lo) * size), 0, size - 1); }
  bool contains(double x, double y) const { return x >= x_lo && x <= x_hi && y >= y_lo && y <= y_hi; }
};

constexpr std::array<double, 4> kGlNodes{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                         0.8611363115940526};
constexpr std::array<double, 4> kGlWeights{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                           0.3478548451374538};

template <typename F>
double cell_integral(const F& f, double x0, double x1, double y0, double y1) {
  const double hx = 0.5 * (x1 - x0);
  const double hy = 0.5 * (y1 - y0);
  const double cx = 0.5 * (x0 + x1);
  const double cy = 0.5 * (y0 + y1);
  double s = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) s += kGlWeights[a] * kGlWeights[b] * f(cx + hx * kGlNodes[a], cy + hy * kGlNodes[b]);
  return s * hx * hy;
}

Grid tabulate_real(const N1Density& d, int size, unsigned workers) {
  Grid g{-kBoxRadius, kBoxRadius, -kBoxRadius, kBoxRadius, size, {}};
  const double h = (g.x_hi - g.x_lo) / size;
  const auto columns = parallel_map<std::vector<double>>(size, workers, [&](std::size_t i) {
    std::vector<double> col(size, 0.0);
    const double x0 = g.x_lo + h * static_cast<double>(i);
    for (int j = static_cast<int>(i); j < size; ++j) {
      const double y0 = g.y_lo + h * j;
      const double v = cell_integral([&](double r1, double r2) { return d.real_pair(r1, r2); }, x0, x0 + h, y0, y0 + h);
      col[j] = (j == static_cast<int>(i)) ? 0.5 * v : v;
    }
    return col;
  });
  g.mass.reserve(static_cast<std::size_t>(size) * size);
  for (const auto& col : columns) g.mass.insert(g.mass.end(), col.begin(), col.end());
  return g;
}

Grid tabulate_conjugate(const N1Density& d, int size, unsigned workers) {
  Grid g{-1.0, 1.0, 0.0, 1.0, size, {}};
  const double hx = (g.x_hi - g.x_lo) / size;
  const double hy = (g.y_hi - g.y_lo) / size;
  const auto columns = parallel_map<std::vector<double>>(size, workers, [&](std::size_t i) {
    std::vector<double> col(size, 0.0);
    const double x0 = g.x_lo + hx * static_cast<double>(i);
    for (int j = 0; j < size; ++j) {
      const double y0 = g.y_lo + hy * j;
      col[j] = cell_integral([&](double x, double y) { return d.conjugate_pair(x, y); }, x0, x0 + hx, y0, y0 + hy);
    }
    return col;
  });
  g.mass.reserve(static_cast<std::size_t>(size) * size);
  for (const auto& col : columns) g.mass.insert(g.mass.end(), col.begin(), col.end());
  return g;
}

// Splits cumulative masses into `parts` runs of roughly equal mass; returns
// run start indices followed by the end index.
std::vector<int> equal_mass_cuts(const std::vector<double>& masses, int parts) {
  const double total = std::accumulate(masses.begin(), masses.end(), 0.0);
  std::vector<int> cuts{0};
  double cum = 0.0;
  int next = 1;
  for (std::size_t i = 0; i < masses.size() && next < parts; ++i) {
    cum += masses[i];
    if (cum >= total * next / parts) {
      if (static_cast<int>(i) + 1 > cuts.back()) cuts.push_back(static_cast<int>(i) + 1);
      while (next < parts && cum >= total * next / parts) ++next;
    }
  }
  if (cuts.back() != static_cast<int>(masses.size())) cuts.push_back(static_cast<int>(masses.size()));
  return cuts;
}

// Equal-mass binning of a grid: strips in the first coordinate, then cuts in
// the second coordinate within each strip.
struct Binning {
  std::vector<int> strips;
  std::vector<std::vector<int>> cuts;
  std::vector<std::size_t> offset;  // first bin index of each strip
  std::vector<double> expected_mass;

  Binning(const Grid& g, int bins) {
    std::vector<double> colmass(g.size, 0.0);
    for (int i = 0; i < g.size; ++i)
      for (int j = 0; j < g.size; ++j) colmass[i] += g.at(i, j);
    strips = equal_mass_cuts(colmass, bins);
    for (std::size_t p = 0; p + 1 < strips.size(); ++p) {
      std::vector<double> rowmass(g.size, 0.0);
      for (int i = strips[p]; i < strips[p + 1]; ++i)
        for (int j = 0; j < g.size; ++j) rowmass[j] += g.at(i, j);
      cuts.push_back(equal_mass_cuts(rowmass, bins));
      offset.push_back(expected_mass.size());
      const auto& c = cuts.back();
      for (std::size_t q = 0; q + 1 < c.size(); ++q) {
        double m = 0.0;
        for (int j = c[q]; j < c[q + 1]; ++j) m += rowmass[j];
        expected_mass.push_back(m);
      }
    }
  }

  std::size_t bin_of(int column, int row) const {
    const std::size_t p = static_cast<std::size_t>(std::upper_bound(strips.begin(), strips.end(), column) - strips.begin()) - 1;
    const auto& c = cuts[p];
    const std::size_t q = static_cast<std::size_t>(std::upper_bound(c.begin(), c.end(), row) - c.begin()) - 1;
    return offset[p] + q;
  }
};

constexpr int kGridSize = 240;

}  // namespace

NormalizationResult density_normalization_n1(double beta, double gamma, const KappaDistribution& kappa_dist) {
  N1Density d{DensityParams{beta, 1, gamma, kappa_dist}};
  d.params.validate();
  NormalizationResult r;
  r.real_pair_mass = real_pair_mass(d, kBoxRadius, &r.quadrature_error);
  r.conjugate_pair_mass = conjugate_pair_mass(d, &r.quadrature_error);
  r.total = r.real_pair_mass + r.conjugate_pair_mass;
  double ignored = 0.0;
  r.tail_mass = std::max(0.0, real_pair_mass(d, 2.0 * kBoxRadius, &ignored) - r.real_pair_mass);
  return r;
}

ExperimentReport density_normalize_report(double beta, double gamma, const KappaDistribution& kappa_dist) {
  const NormalizationResult r = density_normalization_n1(beta, gamma, kappa_dist);
  ExperimentReport report;
  report.name = "density_normalize";
  report.parameters = {{"beta", beta}, {"n", 1}, {"gamma", gamma}, {"kappa", kappa_json(kappa_dist)},
                       {"box_radius", kBoxRadius}};
  report.statistics["total"] = r.total;
  report.statistics["real_pair_mass"] = r.real_pair_mass;
  report.statistics["conjugate_pair_mass"] = r.conjugate_pair_mass;
  report.statistics["tail_mass"] = r.tail_mass;
  report.statistics["quadrature_error"] = r.quadrature_error;
  report.verdict("total", std::abs(r.total - 1.0) <= 0.01, r.total, 0.01, "|total - 1| <= 0.01");
  report.verdict("tail_mass", r.tail_mass < 1e-4, r.tail_mass, 1e-4);
  return report;
}

ExperimentReport density_mc_compare_n1(double beta, double gamma, const KappaDistribution& kappa_dist,
                                       std::size_t trials, int bins, const RunOptions& options) {
  if (trials < 100000) throw ParameterError("mc-compare needs at least 1e5 trials");
  if (bins < 1) throw ParameterError("bins must be positive");
  if (!kappa_dist.has_density()) throw ParameterError("mc-compare needs a kappa law with a density");
  const auto start = std::chrono::steady_clock::now();
  N1Density d{DensityParams{beta, 1, gamma, kappa_dist}};
  d.params.validate();
  EnsembleParams ens{beta, 1, gamma, kappa_dist};

  ExperimentReport report = make_report("density_mc_compare", trials, options);
  report.parameters = {{"beta", beta}, {"n", 1}, {"gamma", gamma}, {"kappa", kappa_json(kappa_dist)},
                       {"bins", bins}, {"grid", kGridSize}, {"box_radius", kBoxRadius}, {"min_expected", 100}};

  const Grid real_grid = tabulate_real(d, kGridSize, options.workers);
  const Grid conj_grid = tabulate_conjugate(d, kGridSize, options.workers);
  const Binning real_bins(real_grid, bins);
  const Binning conj_bins(conj_grid, bins);

  struct Point {
    Complex z0;
    Complex z1;
    bool ok = false;
  };
  const auto points = parallel_map<Point>(trials, options.workers, [&](std::size_t i) {
    const TrialRecord r = sample_trial(ens, options.seed, i, options.attempt);
    Point p;
    if (r.failure.empty() && r.config.size() == 2) {
      p.z0 = r.config.points[0];
      p.z1 = r.config.points[1];
      p.ok = true;
    }
    return p;
  });

  std::vector<double> real_counts(real_bins.expected_mass.size(), 0.0);
  std::vector<double> conj_counts(conj_bins.expected_mass.size(), 0.0);
  std::size_t n_real = 0;
  std::size_t n_conj = 0;
  std::size_t overflow = 0;
  std::size_t failures = 0;
  for (const auto& p : points) {
    if (!p.ok) {
      ++failures;
      continue;
    }
    if (p.z0.imag() == 0.0) {
      ++n_real;
      const double r1 = std::min(p.z0.real(), p.z1.real());
      const double r2 = std::max(p.z0.real(), p.z1.real());
      if (!real_grid.contains(r1, r2)) {
        ++overflow;
        continue;
      }
      real_counts[real_bins.bin_of(real_grid.column(r1), real_grid.row(r2))] += 1.0;
    } else {
      ++n_conj;
      const double x = p.z0.real();
      const double y = std::abs(p.z0.imag());
      if (!conj_grid.contains(x, y)) {
        ++overflow;
        continue;
      }
      conj_counts[conj_bins.bin_of(conj_grid.column(x), conj_grid.row(y))] += 1.0;
    }
  }

  const double total_n = static_cast<double>(trials);
  double max_dev = 0.0;
  double max_z = 0.0;
  double chi_square = 0.0;
  std::size_t compared = 0;
  auto compare = [&](const std::vector<double>& counts, const Binning& b) {
    for (std::size_t k = 0; k < counts.size(); ++k) {
      const double expected = total_n * b.expected_mass[k];
      if (expected < 100.0) continue;
      ++compared;
      const double diff = counts[k] - expected;
      max_dev = std::max(max_dev, std::abs(diff) / expected);
      max_z = std::max(max_z, std::abs(diff) / std::sqrt(expected));
      chi_square += diff * diff / expected;
    }
  };
  compare(real_counts, real_bins);
  compare(conj_counts, conj_bins);

  const double p_real = std::accumulate(real_grid.mass.begin(), real_grid.mass.end(), 0.0);
  const double p_conj = std::accumulate(conj_grid.mass.begin(), conj_grid.mass.end(), 0.0);
  const double p_real_model = p_real / (p_real + p_conj);
  const double frac_real = static_cast<double>(n_real) / total_n;
  const double sigma = std::sqrt(p_real_model * (1.0 - p_real_model) / total_n);
  const double counted = static_cast<double>(n_real + n_conj + failures);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report.statistics["max_relative_deviation"] = max_dev;
  report.statistics["bins_compared"] = static_cast<double>(compared);
  report.statistics["max_abs_z"] = max_z;
  report.statistics["chi_square"] = chi_square;
  report.statistics["real_pair_fraction"] = frac_real;
  report.statistics["real_pair_probability"] = p_real_model;
  report.statistics["binomial_sigma"] = sigma;
  report.statistics["grid_mass_real"] = p_real;
  report.statistics["grid_mass_conjugate"] = p_conj;
  report.statistics["overflow"] = static_cast<double>(overflow);
  report.statistics["failures"] = static_cast<double>(failures);
  report.statistics["empirical_mass"] = counted / total_n;
  report.elapsed_seconds = seconds;
  report.verdict("max_relative_deviation", compared > 0 && max_dev < 0.10, max_dev, 0.10,
                 "over bins with expected count >= 100");
  report.verdict("region_split", std::abs(frac_real - p_real_model) <= 3.0 * sigma, std::abs(frac_real - p_real_model),
                 3.0 * sigma, "3 sigma binomial");
  report.verdict("empirical_mass", counted == total_n, counted / total_n, 0.0);
  report.verdict("failure_rate", failures <= trials / 1000, static_cast<double>(failures),
                 static_cast<double>(trials / 1000));
  return report;
}

// ---- verification suites ---------------------------------------------------

JacobiCoefficients random_coefficients(RandomStream& stream, int n, double a_lo, double a_hi, double b_max) {
  JacobiCoefficients c;
  for (int j = 0; j < n; ++j) {
    c.a.push_back(a_lo + (a_hi - a_lo) * stream.uniform());
    c.b.push_back(b_max * (2.0 * stream.uniform() - 1.0));
  }
  return c;
}

namespace {

int draw_size(RandomStream& stream, int max_n) {
  return 1 + static_cast<int>(stream.next_u32() % static_cast<std::uint32_t>(max_n));
}

}  // namespace

ExperimentReport roundtrip_suite(std::size_t trials, int max_n, const RunOptions& options) {
  if (max_n < 1) throw ParameterError("max_n must be at least 1");
  ExperimentReport report = make_report("roundtrip", trials, options);
  report.parameters = {{"max_n", max_n}, {"a_range", {0.1, 3.0}}, {"b_range", {-3.0, 3.0}}};
  const auto start = std::chrono::steady_clock::now();
  const auto errors = parallel_map<double>(trials, options.workers, [&](std::size_t i) {
    RandomStream stream = trial_stream(options.seed, kPurposeCoefficients, i, options.attempt);
    const int n = draw_size(stream, max_n);
    JacobiCoefficients c = random_coefficients(stream, n, 0.1, 3.0, 3.0);
    while (std::abs(c.a.back() - 1.0) < 1e-3) c.a.back() = 0.1 + 2.9 * stream.uniform();
    try {
      const JacobiCoefficients back = gc_inverse(gc_forward(c).final_lstar());
      double err = 0.0;
      for (int j = 0; j < n; ++j) {
        err = std::max(err, std::abs(back.a[j] - c.a[j]) / c.a[j]);
        err = std::max(err, std::abs(back.b[j] - c.b[j]) / std::max(1.0, std::abs(c.b[j])));
      }
      return err;
    } catch (const Error&) {
      return std::numeric_limits<double>::infinity();
    }
  });
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const double max_err = errors.empty() ? 0.0 : *std::max_element(errors.begin(), errors.end());
  report.statistics["max_relative_error"] = max_err;
  report.verdict("max_relative_error", max_err < 1e-8, max_err, 1e-8,
                 "a relative to |a|, b relative to max(1, |b|)");
  report.elapsed_seconds = seconds;
  return report;
}

ExperimentReport identities_suite(std::size_t trials, int max_n, const RunOptions& options) {
  if (max_n < 1) throw ParameterError("max_n must be at least 1");
  ExperimentReport report = make_report("identities", trials, options);
  const ConventionResolution res =
      resolve_lemma_v_convention(RandomStream(options.seed, stream_id_for(kPurposeConvention, 0)), 200);
  report.parameters = {{"max_n", max_n}, {"a_range", {0.3, 2.5}}, {"b_range", {-2.0, 2.0}},
                       {"lemma_v_convention", to_string(res.chosen)}, {"generic_min_distance", 1e-3}};
  for (const auto& [name, v] : res.fixture_residual) report.statistics["convention_fixture_residual_" + name] = v;
  for (const auto& [name, v] : res.random_max_residual) report.statistics["convention_random_residual_" + name] = v;
  report.verdict("lemma_v_convention_resolved", res.resolved, res.resolved ? 1.0 : 0.0, 1.0, to_string(res.chosen));

  struct Draw {
    std::map<std::string, double> max_residual;
    std::map<std::string, double> tolerance;
    int rejections = 0;
    bool failed = false;
  };
  const auto draws = parallel_map<Draw>(trials, options.workers, [&](std::size_t i) {
    RandomStream stream = trial_stream(options.seed, kPurposeCoefficients, i, options.attempt);
    Draw d;
    for (;;) {
      const int n = draw_size(stream, max_n);
      const JacobiCoefficients c = random_coefficients(stream, n, 0.3, 2.5, 2.0);
      // Generic stratum: every intermediate L*_m keeps its zeros away from +-1.
      bool generic = true;
      try {
        const GCSequence seq = gc_forward(c);
        for (int m = 1; m <= 2 * n && generic; ++m)
          for (const auto& z : polynomial_roots(seq.lstar[m]))
            if (std::abs(1.0 - z * z) <= 1e-3) generic = false;
      } catch (const Error&) {
        generic = false;
      }
      if (!generic) {
        ++d.rejections;
        continue;
      }
      for (int m = 1; m <= 2 * n; ++m) {
        try {
          const IdentityReport r = check_lemma_identities(c, m, res.chosen);
          for (const auto& [name, e] : r.entries) {
            if (e.skipped) continue;
            auto [it, inserted] = d.max_residual.try_emplace(name, e.residual);
            if (!inserted) it->second = std::max(it->second, e.residual);
            d.tolerance[name] = e.tolerance;
            if (!e.pass) d.failed = true;
          }
        } catch (const Error&) {
          d.failed = true;
        }
      }
      return d;
    }
  });
  std::map<std::string, double> max_residual;
  std::map<std::string, double> tolerance;
  int rejections = 0;
  std::size_t failed = 0;
  for (const auto& d : draws) {
    rejections += d.rejections;
    if (d.failed) ++failed;
    for (const auto& [name, v] : d.max_residual) max_residual[name] = std::max(max_residual[name], v);
    for (const auto& [name, v] : d.tolerance) tolerance[name] = v;
  }
  report.statistics["rejected_draws"] = rejections;
  report.statistics["failed_draws"] = static_cast<double>(failed);
  for (const auto& [name, v] : max_residual) {
    report.statistics["max_residual_" + name] = v;
    report.verdict(name, v < tolerance[name], v, tolerance[name]);
  }
  report.verdict("draws_without_failure", failed == 0, static_cast<double>(failed), 0.0);
  return report;
}

ExperimentReport jacobian_suite(std::size_t trials, int max_n, const RunOptions& options) {
  if (max_n < 1 || max_n > 6) throw ParameterError("jacobian suite needs 1 <= max_n <= 6");
  ExperimentReport report = make_report("jacobian", trials, options);
  report.parameters = {{"max_n", max_n}, {"a_range", {0.5, 2.0}}, {"b_range", {-1.5, 1.5}}, {"fd_step", kDefaultFdStep}};
  struct Draw {
    double sbs1 = 0.0;
    double sbs2 = 0.0;
    double total = 0.0;
  };
  const auto draws = parallel_map<Draw>(trials, options.workers, [&](std::size_t i) {
    RandomStream stream = trial_stream(options.seed, kPurposeCoefficients, i, options.attempt);
    const int n = draw_size(stream, max_n);
    const JacobiCoefficients c = random_coefficients(stream, n, 0.5, 2.0, 1.5);
    Draw d;
    for (int k = 0; k < n; ++k) {
      const StepwiseJacobian s = stepwise_jacobian_fd(c, k);
      d.sbs1 = std::max(d.sbs1, s.sbs1.relative_error);
      d.sbs2 = std::max(d.sbs2, s.sbs2.relative_error);
    }
    d.total = total_jacobian_fd(c).relative_error;
    return d;
  });
  Draw worst;
  for (const auto& d : draws) {
    worst.sbs1 = std::max(worst.sbs1, d.sbs1);
    worst.sbs2 = std::max(worst.sbs2, d.sbs2);
    worst.total = std::max(worst.total, d.total);
  }
  report.statistics["max_relative_error_sbs1"] = worst.sbs1;
  report.statistics["max_relative_error_sbs2"] = worst.sbs2;
  report.statistics["max_relative_error_total"] = worst.total;
  report.verdict("sbs1", worst.sbs1 < kJacobianTolerance, worst.sbs1, kJacobianTolerance, "det = -1");
  report.verdict("sbs2", worst.sbs2 < kJacobianTolerance, worst.sbs2, kJacobianTolerance, "det = -2 a^(2k+1)");
  report.verdict("total", worst.total < kJacobianTolerance, worst.total, kJacobianTolerance,
                 "|det| = 2^n prod a_j^(2j-1)");
  return report;
}

ExperimentReport membership_suite(std::size_t trials, int max_n, const KappaDistribution& kappa_dist,
                                  const RunOptions& options) {
  if (max_n < 1) throw ParameterError("max_n must be at least 1");
  constexpr std::array<double, 3> betas{1.0, 2.0, 4.0};
  ExperimentReport report = make_report("membership", trials, options);
  report.parameters = {{"max_n", max_n}, {"betas", betas}, {"gamma", 1.0}, {"kappa", kappa_json(kappa_dist)}};
  const auto records = parallel_map<TrialRecord>(trials, options.workers, [&](std::size_t i) {
    const EnsembleParams params{betas[i % 3], 1 + static_cast<int>((i / 3) % static_cast<std::size_t>(max_n)), 1.0,
                                kappa_dist};
    return sample_trial(params, options.seed, i, options.attempt);
  });
  std::size_t failures = 0;
  std::size_t outside = 0;
  double max_kappa_residual = 0.0;
  std::size_t eigenvalues = 0;
  for (const auto& r : records) {
    if (!r.failure.empty()) {
      ++failures;
      report.log.push_back("trial " + std::to_string(r.trial) + ": " + r.failure);
      continue;
    }
    if (!r.in_S) {
      ++outside;
      if (outside <= 10) report.log.push_back("trial " + std::to_string(r.trial) + ": clause " + r.membership_clause);
    }
    max_kappa_residual = std::max(max_kappa_residual, r.kappa_check_residual);
    for (auto l : r.config.labels)
      if (l == PointLabel::eigenvalue) ++eigenvalues;
  }
  const double members = static_cast<double>(trials - failures - outside);
  report.statistics["membership_fraction"] = trials ? members / static_cast<double>(trials) : 1.0;
  report.statistics["max_kappa_residual"] = max_kappa_residual;
  report.statistics["failures"] = static_cast<double>(failures);
  report.statistics["eigenvalues_seen"] = static_cast<double>(eigenvalues);
  report.verdict("membership", outside == 0 && failures == 0, static_cast<double>(outside + failures), 0.0,
                 "every configuration lies in S(2n)");
  report.verdict("kappa_identity", max_kappa_residual < 1e-9, max_kappa_residual, 1e-9);
  report.verdict("failure_rate", failures <= trials / 1000, static_cast<double>(failures),
                 static_cast<double>(trials / 1000));
  return report;
}

ExperimentReport eigen_oracle_suite(std::size_t trials, int max_n, std::size_t truncation, const RunOptions& options) {
  if (max_n < 1) throw ParameterError("max_n must be at least 1");
  constexpr std::array<double, 3> betas{1.0, 2.0, 4.0};
  constexpr double kGamma = 1.5;
  const KappaDistribution kappa_dist = KappaDistribution::chi(3.0, 0.8);
  constexpr double kOutsideRadius = 1.001;
  constexpr double kMatchTolerance = 1e-6;
  const double band = 2.0 + kDefaultBandMargin;
  ExperimentReport report = make_report("eigen_oracle", trials, options);
  report.parameters = {{"max_n", max_n}, {"N", truncation}, {"betas", betas}, {"gamma", kGamma},
                       {"kappa", kappa_dist.to_string()}, {"outside_radius", kOutsideRadius}, {"band", band}};
  struct Draw {
    double forward = 0.0;
    double converse = 0.0;
    int zeros = 0;
    int eigenvalues = 0;
    std::string failure;
  };
  const auto draws = parallel_map<Draw>(trials, options.workers, [&](std::size_t i) {
    const EnsembleParams params{betas[i % 3], 1 + static_cast<int>((i / 3) % static_cast<std::size_t>(max_n)), kGamma,
                                kappa_dist};
    const TrialRecord r = sample_trial(params, options.seed, i, options.attempt);
    Draw d;
    if (!r.failure.empty()) {
      d.failure = r.failure;
      return d;
    }
    // Every truncation eigenvalue outside [-2, 2]; zeros with |z| > 1.001 map
    // just beyond 2, the converse direction only uses those outside the band.
    const std::vector<double> eig = eigenvalues_outside_band(r.coeffs, truncation, 0.0);
    std::vector<double> images;
    for (const auto& z : r.config.points)
      if (std::abs(z) > 1.0) images.push_back(joukowsky(z).real());
    for (const auto& z : r.config.points) {
      if (std::abs(z) <= kOutsideRadius) continue;
      ++d.zeros;
      const double e = joukowsky(z).real();
      double best = std::numeric_limits<double>::infinity();
      for (double lam : eig) best = std::min(best, std::abs(lam - e));
      d.forward = std::max(d.forward, best);
    }
    for (double lam : eig) {
      if (std::abs(lam) <= band) continue;
      ++d.eigenvalues;
      double best = std::numeric_limits<double>::infinity();
      for (double e : images) best = std::min(best, std::abs(lam - e));
      d.converse = std::max(d.converse, best);
    }
    return d;
  });
  double forward = 0.0;
  double converse = 0.0;
  int zeros = 0;
  int eigenvalues = 0;
  std::size_t failures = 0;
  for (const auto& d : draws) {
    if (!d.failure.empty()) {
      ++failures;
      continue;
    }
    forward = std::max(forward, d.forward);
    converse = std::max(converse, d.converse);
    zeros += d.zeros;
    eigenvalues += d.eigenvalues;
  }
  report.statistics["max_forward_distance"] = forward;
  report.statistics["max_converse_distance"] = converse;
  report.statistics["zeros_outside"] = zeros;
  report.statistics["eigenvalues_outside_band"] = eigenvalues;
  report.statistics["failures"] = static_cast<double>(failures);
  report.verdict("forward", forward < kMatchTolerance, forward, kMatchTolerance,
                 "zeros with |z| > 1.001 matched by truncation eigenvalues");
  report.verdict("converse", converse < kMatchTolerance, converse, kMatchTolerance,
                 "truncation eigenvalues outside the band matched by zeros");
  report.verdict("failures", failures == 0, static_cast<double>(failures), 0.0);
  return report;
}

}  // namespace jres
