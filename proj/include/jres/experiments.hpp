#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "jres/density.hpp"
#include "jres/ensembles.hpp"
#include "jres/identities.hpp"
#include "jres/operator_model.hpp"
#include "jres/spectra.hpp"

namespace jres {

/// Stream purposes; combined with a trial index by stream_id_for().
enum StreamPurpose : std::uint32_t {
  kPurposeSampling = 1,
  kPurposeCoefficients = 2,
  kPurposeDense = 3,
  kPurposeTridiagonal = 4,
  kPurposeConvention = 5,
  kPurposeSemicircle = 6,
  kPurposeRetry = 0x100,  // or-ed into the purpose for a retry attempt
};

struct RunOptions {
  std::uint64_t seed = 1;
  unsigned workers = 1;
  int attempt = 0;  // 0 = first run, 1 = retry on fresh substreams
};

/// Runs fn(0..trials-1) on `workers` threads. Results are stored by trial
/// index, so output does not depend on the worker count.
template <typename T>
std::vector<T> parallel_map(std::size_t trials, unsigned workers, const std::function<T(std::size_t)>& fn) {
  std::vector<T> out(trials);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(trials, 1))));
  if (workers == 1) {
    for (std::size_t i = 0; i < trials; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < trials; i += workers) out[i] = fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

struct Verdict {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

/// Named statistics and pass/fail verdicts of one experiment; reproducible
/// from (seed, parameters).
struct ExperimentReport {
  std::string name;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  std::map<std::string, double> statistics;
  std::vector<Verdict> verdicts;
  std::vector<std::string> log;
  double elapsed_seconds = 0.0;  // wall time; not serialized

  void verdict(std::string name, bool pass, double value, double tolerance, std::string detail = {});
  bool pass() const;
  nlohmann::json to_json() const;
};

/// One pass through the coupled-operator pipeline.
struct TrialRecord {
  std::size_t trial = 0;
  TridiagonalSample tridiag;
  double kappa = 0.0;
  JacobiCoefficients coeffs;
  SpectrumConfiguration config;
  int expected_count = 0;  // perturbation order of coeffs
  bool in_S = false;
  std::string membership_clause;
  double kappa_check_residual = 0.0;
  double sum_zeros = 0.0;
  double sum_zeros_imag = 0.0;
  std::string failure;  // numerical failure message; empty on success
};

/// sample (s, t, kappa) -> assemble -> gc_forward -> roots -> canonicalize -> classify -> S-membership.
TrialRecord sample_trial(const EnsembleParams& params, std::uint64_t seed, std::size_t trial, int attempt = 0);

struct ResonanceDataset {
  std::vector<TrialRecord> records;
  std::size_t failures = 0;
  bool failure_rate_ok = true;  // failures <= 0.1% of trials
};

ResonanceDataset run_resonance_sampling(const EnsembleParams& params, std::size_t trials, const RunOptions& options);

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} exp(-2 k^2 lambda^2).
double kolmogorov_survival(double lambda);
/// One-sample KS test; sorts a copy. Throws ParameterError for fewer than 20 samples.
KsResult ks_test(std::vector<double> samples, const std::function<double(double)>& cdf);
/// Two-sample KS test with effective size n m / (n + m).
KsResult ks_two_sample(std::vector<double> x, std::vector<double> y);

inline constexpr double kKsAlpha = 0.01;

ExperimentReport sum_zeros_test(const EnsembleParams& params, std::size_t trials, const RunOptions& options);
ExperimentReport semicircle_moment_test(double beta, int n, std::size_t trials, const RunOptions& options);
ExperimentReport dense_vs_tridiagonal_test(int beta, int n, std::size_t trials, const RunOptions& options);

/// Normalization of the n = 1 joint density by adaptive quadrature over |z| <= 6,
/// plus the quadrature mass between 6 and 12 as a tail estimate.
struct NormalizationResult {
  double total = 0.0;
  double real_pair_mass = 0.0;
  double conjugate_pair_mass = 0.0;
  double tail_mass = 0.0;
  double quadrature_error = 0.0;
};
NormalizationResult density_normalization_n1(double beta, double gamma, const KappaDistribution& kappa_dist);

ExperimentReport density_normalize_report(double beta, double gamma, const KappaDistribution& kappa_dist);

/// Bins n = 1 samples in the real-pair chart (r1 < r2) and the conjugate-pair
/// chart (x, y > 0) on `bins` x `bins` cells of equal model mass per chart and
/// compares counts with quadrature. Throws ParameterError for trials < 1e5.
ExperimentReport density_mc_compare_n1(double beta, double gamma, const KappaDistribution& kappa_dist,
                                       std::size_t trials, int bins, const RunOptions& options);

/// Verification suites driven by `verify`.
ExperimentReport roundtrip_suite(std::size_t trials, int max_n, const RunOptions& options);
ExperimentReport identities_suite(std::size_t trials, int max_n, const RunOptions& options);
ExperimentReport jacobian_suite(std::size_t trials, int max_n, const RunOptions& options);
ExperimentReport membership_suite(std::size_t trials, int max_n, const KappaDistribution& kappa_dist,
                                  const RunOptions& options);
ExperimentReport eigen_oracle_suite(std::size_t trials, int max_n, std::size_t truncation, const RunOptions& options);

/// Random Jacobi data with a_j uniform on (a_lo, a_hi), b_j on (-b_max, b_max).
JacobiCoefficients random_coefficients(RandomStream& stream, int n, double a_lo, double a_hi, double b_max);

}  // namespace jres
