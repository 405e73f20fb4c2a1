#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "jres/experiments.hpp"
#include "jres/spectra.hpp"

namespace jres {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitUsage = 2,
  kExitIo = 3,
};

/// Parameters shared by all commands. Unset optional fields take the
/// command's default; effective values are echoed into every output.
struct RunConfig {
  std::string command;     // sample | spectrum | verify | density
  std::string subcommand;  // suite name for verify, eval|mc-compare|normalize for density
  double beta = 2.0;
  std::optional<int> n;
  double gamma = 1.0;
  std::string kappa = "chi:3:0.5";
  std::optional<std::int64_t> trials;
  std::uint64_t seed = 1;
  unsigned workers = 1;  // execution detail; not echoed, output does not depend on it
  std::size_t truncation = kDefaultTruncation;
  int bins = 10;
  std::string format = "jsonl";  // jsonl | csv (sample only)
  std::string output = "-";
  std::string input = "-";

  /// Effective configuration as echoed into outputs.
  nlohmann::json to_json() const;
};

/// Seed used when --seed is absent: JRES_SEED if set, else 1.
/// Throws ParameterError for a malformed JRES_SEED.
std::uint64_t default_seed();

/// JSON form of a labelled configuration: [{"re":..,"im":..,"label":..}, ...].
nlohmann::json configuration_json(const SpectrumConfiguration& config);
/// Parses {"points": [[re, im] | re, ...]} or {"zeros": [{"re":..,"im":..}, ...]}.
SpectrumConfiguration parse_configuration(const nlohmann::json& doc);
/// Parses {"a": [...], "b": [...]}; validates lengths and a_j > 0.
JacobiCoefficients parse_coefficients(const nlohmann::json& doc);

/// One line-delimited record per trial.
nlohmann::json trial_record_json(const TrialRecord& record);

int cmd_sample(const RunConfig& config, std::ostream& out);
int cmd_spectrum(const RunConfig& config, std::istream& in, std::ostream& out);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_density(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

/// Parses arguments (args[0] is the program name) and runs the command.
/// `in` backs `--input -`, `out` backs `--output -`.
int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace jres
