#include "jres/cli_io.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "jres/density.hpp"
#include "jres/error.hpp"
#include "jres/gc_engine.hpp"

namespace jres {

namespace {

constexpr std::size_t kSampleChunk = 4096;

struct SuiteDefaults {
  std::int64_t trials;
  int max_n;
};

SuiteDefaults suite_defaults(const std::string& suite) {
  if (suite == "identities") return {1000, 8};
  if (suite == "jacobian") return {100, 5};
  if (suite == "roundtrip") return {1000, 8};
  if (suite == "membership") return {10000, 5};
  if (suite == "eigen-oracle") return {100, 6};
  if (suite == "statistics") return {10000, 4};
  throw ParameterError("unknown suite '" + suite +
                       "' (expected identities, jacobian, roundtrip, membership, eigen-oracle or statistics)");
}

std::int64_t effective_trials(const RunConfig& c) {
  if (c.trials) return *c.trials;
  if (c.command == "sample") return 100;
  if (c.command == "verify") return suite_defaults(c.subcommand).trials;
  if (c.command == "density" && c.subcommand == "mc-compare") return 1000000;
  return 0;
}

int effective_n(const RunConfig& c) {
  if (c.n) return *c.n;
  if (c.command == "verify") return suite_defaults(c.subcommand).max_n;
  return 1;
}

std::size_t checked_trials(const RunConfig& c) {
  const std::int64_t t = effective_trials(c);
  if (t < 0) throw ParameterError("trials must be non-negative");
  return static_cast<std::size_t>(t);
}

RunOptions run_options(const RunConfig& c) { return RunOptions{c.seed, c.workers, 0}; }

nlohmann::json complex_json(const Complex& z) { return {{"re", z.real()}, {"im", z.imag()}}; }

}  // namespace

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  if (!subcommand.empty()) j["subcommand"] = subcommand;
  j["beta"] = beta;
  j["n"] = effective_n(*this);
  j["gamma"] = gamma;
  j["kappa"] = kappa;
  j["trials"] = effective_trials(*this);
  j["seed"] = seed;
  j["N"] = truncation;
  j["bins"] = bins;
  j["format"] = format;
  return j;
}

std::uint64_t default_seed() {
  const char* env = std::getenv("JRES_SEED");
  if (env == nullptr || *env == '\0') return 1;
  const std::string s(env);
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    if (s.front() == '-') throw std::invalid_argument("negative");
    v = std::stoull(s, &used, 10);
  } catch (const std::exception&) {
    throw ParameterError("JRES_SEED must be a non-negative integer, got '" + s + "'");
  }
  if (used != s.size()) throw ParameterError("JRES_SEED must be a non-negative integer, got '" + s + "'");
  return v;
}

nlohmann::json configuration_json(const SpectrumConfiguration& config) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t i = 0; i < config.size(); ++i) {
    nlohmann::json p = complex_json(config.points[i]);
    p["label"] = to_string(config.labels[i]);
    arr.push_back(std::move(p));
  }
  return arr;
}

SpectrumConfiguration parse_configuration(const nlohmann::json& doc) {
  std::vector<Complex> pts;
  try {
    if (doc.contains("points")) {
      for (const auto& p : doc.at("points")) {
        if (p.is_number()) pts.emplace_back(p.get<double>(), 0.0);
        else if (p.is_array() && p.size() == 2) pts.emplace_back(p[0].get<double>(), p[1].get<double>());
        else throw ValidationError("each point must be a number or a [re, im] pair");
      }
    } else if (doc.contains("zeros")) {
      for (const auto& p : doc.at("zeros")) pts.emplace_back(p.at("re").get<double>(), p.value("im", 0.0));
    } else {
      throw ValidationError("configuration document needs a 'points' or 'zeros' array");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed configuration document: ") + e.what());
  }
  try {
    return make_configuration(pts);
  } catch (const AsymmetryError&) {
    throw ValidationError("configuration is not closed under conjugation");
  }
}

JacobiCoefficients parse_coefficients(const nlohmann::json& doc) {
  JacobiCoefficients c;
  try {
    c.a = doc.at("a").get<std::vector<double>>();
    c.b = doc.at("b").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("coefficient document needs numeric arrays 'a' and 'b': ") + e.what());
  }
  if (c.a.size() != c.b.size())
    throw ValidationError("arrays a and b must have equal length (got " + std::to_string(c.a.size()) + " and " +
                          std::to_string(c.b.size()) + ")");
  c.validate();
  return c;
}

nlohmann::json trial_record_json(const TrialRecord& r) {
  nlohmann::json j;
  j["type"] = "trial";
  j["trial"] = r.trial;
  j["s"] = r.tridiag.s;
  j["t"] = r.tridiag.t;
  j["kappa"] = r.kappa;
  j["a"] = r.coeffs.a;
  j["b"] = r.coeffs.b;
  j["zeros"] = configuration_json(r.config);
  j["origin_drops"] = r.config.origin_drops;
  j["in_S"] = r.in_S;
  if (!r.membership_clause.empty()) j["violated_clause"] = r.membership_clause;
  j["kappa_check_residual"] = r.kappa_check_residual;
  if (!r.failure.empty()) j["failure"] = r.failure;
  return j;
}

int cmd_sample(const RunConfig& config, std::ostream& out) {
  const EnsembleParams params{config.beta, effective_n(config), config.gamma, KappaDistribution::parse(config.kappa)};
  params.validate();
  if (config.format != "jsonl" && config.format != "csv") throw ParameterError("format must be jsonl or csv");
  const std::size_t trials = checked_trials(config);
  if (trials == 0) return kExitOk;

  const bool csv = config.format == "csv";
  if (csv) {
    out << "# " << nlohmann::json{{"type", "config"}, {"config", config.to_json()}}.dump() << '\n';
    out << "trial,re,im,label\n";
  } else {
    out << nlohmann::json{{"type", "config"}, {"config", config.to_json()}}.dump() << '\n';
  }
  std::size_t failures = 0;
  for (std::size_t begin = 0; begin < trials; begin += kSampleChunk) {
    const std::size_t count = std::min(kSampleChunk, trials - begin);
    const auto records = parallel_map<TrialRecord>(count, config.workers, [&](std::size_t i) {
      return sample_trial(params, config.seed, begin + i);
    });
    for (const auto& r : records) {
      if (!r.failure.empty()) ++failures;
      if (csv) {
        for (std::size_t k = 0; k < r.config.size(); ++k)
          out << r.trial << ',' << nlohmann::json(r.config.points[k].real()).dump() << ','
              << nlohmann::json(r.config.points[k].imag()).dump() << ',' << to_string(r.config.labels[k]) << '\n';
      } else {
        out << trial_record_json(r).dump() << '\n';
      }
    }
    if (!out) throw std::ios_base::failure("write failed");
  }
  return static_cast<double>(failures) <= 1e-3 * static_cast<double>(trials) ? kExitOk : kExitVerificationFailed;
}

int cmd_spectrum(const RunConfig& config, std::istream& in, std::ostream& out) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("input is not a JSON document: ") + e.what());
  }
  const JacobiCoefficients c = parse_coefficients(doc);
  const GCSequence seq = gc_forward(c);
  const SpectrumConfiguration cfg = canonicalize_conjugates(polynomial_roots(seq.final_lstar()));
  const int k = c.perturbation_order();
  const MembershipResult m = is_in_S(k, cfg);

  nlohmann::json images = nlohmann::json::array();
  for (std::size_t i = 0; i < cfg.size(); ++i)
    if (cfg.labels[i] == PointLabel::eigenvalue) images.push_back(joukowsky(cfg.points[i]).real());

  nlohmann::json j;
  j["config"] = config.to_json();
  j["config"].erase("trials");
  j["a"] = c.a;
  j["b"] = c.b;
  j["lstar"] = seq.final_lstar().coeffs();
  j["zeros"] = configuration_json(cfg);
  j["origin_drops"] = cfg.origin_drops;
  j["perturbation_order"] = k;
  j["in_S"] = {{"k", k}, {"member", m.member}, {"clause", m.clause}, {"detail", m.detail}};
  j["joukowsky_images"] = images;
  out << j.dump(2) << '\n';
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const std::string& suite = config.subcommand;
  suite_defaults(suite);
  const std::size_t trials = checked_trials(config);
  const int n = effective_n(config);
  const RunOptions opt = run_options(config);
  std::vector<ExperimentReport> reports;
  if (suite == "identities") {
    reports.push_back(identities_suite(trials, n, opt));
  } else if (suite == "jacobian") {
    reports.push_back(jacobian_suite(trials, n, opt));
  } else if (suite == "roundtrip") {
    reports.push_back(roundtrip_suite(trials, n, opt));
  } else if (suite == "membership") {
    reports.push_back(membership_suite(trials, n, KappaDistribution::parse(config.kappa), opt));
  } else if (suite == "eigen-oracle") {
    reports.push_back(eigen_oracle_suite(trials, n, config.truncation, opt));
  } else {
    const EnsembleParams params{config.beta, n, config.gamma, KappaDistribution::parse(config.kappa)};
    reports.push_back(sum_zeros_test(params, trials, opt));
    for (int beta : {1, 2}) reports.push_back(semicircle_moment_test(beta, 200, 100, opt));
    for (int beta : {1, 2}) reports.push_back(dense_vs_tridiagonal_test(beta, 4, trials, opt));
  }
  nlohmann::json j;
  j["config"] = config.to_json();
  j["reports"] = nlohmann::json::array();
  bool pass = true;
  for (const auto& r : reports) {
    j["reports"].push_back(r.to_json());
    pass = pass && r.pass();
    if (r.elapsed_seconds > 0.0) err << r.name << ": " << r.elapsed_seconds << " s\n";
  }
  j["pass"] = pass;
  out << j.dump(2) << '\n';
  return pass ? kExitOk : kExitVerificationFailed;
}

int cmd_density(const RunConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
  const std::string& mode = config.subcommand;
  const KappaDistribution kappa = KappaDistribution::parse(config.kappa);
  nlohmann::json j;
  j["config"] = config.to_json();

  if (mode == "eval") {
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError(std::string("input is not a JSON document: ") + e.what());
    }
    const SpectrumConfiguration cfg = parse_configuration(doc);
    const int count = static_cast<int>(cfg.size());
    if (count == 0) throw ShapeError("configuration is empty");
    const int n = (count + 1) / 2;
    if (config.n && *config.n != n)
      throw ShapeError("configuration has " + std::to_string(count) + " points, which does not match n = " +
                       std::to_string(*config.n));
    const DensityParams params{config.beta, n, config.gamma, kappa};
    const LogDensityValue v =
        count % 2 == 0 ? log_density_random_kappa(cfg, params) : log_density_kappa1(cfg, params);
    j["config"]["n"] = n;
    j["config"].erase("trials");
    j["points"] = configuration_json(cfg);
    j["density"] = count % 2 == 0 ? "random_kappa" : "kappa_1";
    j["log_value"] = std::isfinite(v.log_value) ? nlohmann::json(v.log_value) : nlohmann::json(nullptr);
    j["kappa_implied"] = v.kappa_implied ? nlohmann::json(*v.kappa_implied) : nlohmann::json(nullptr);
    j["in_support"] = v.in_support;
    j["boundary_flag"] = v.boundary_flag;
    if (!v.reason.empty()) j["reason"] = v.reason;
    out << j.dump(2) << '\n';
    return kExitOk;
  }
  if (config.n && *config.n != 1) throw ParameterError(mode + " is defined for n = 1 only");
  if (mode == "normalize") {
    const ExperimentReport r = density_normalize_report(config.beta, config.gamma, kappa);
    j["config"].erase("trials");
    j["report"] = r.to_json();
    out << j.dump(2) << '\n';
    return r.pass() ? kExitOk : kExitVerificationFailed;
  }
  if (mode == "mc-compare") {
    const std::size_t trials = checked_trials(config);
    if (trials < 100000)
      throw ParameterError("mc-compare needs --trials >= 100000 for stable bin counts (1000000 recommended)");
    const ExperimentReport r = density_mc_compare_n1(config.beta, config.gamma, kappa, trials, config.bins,
                                                     run_options(config));
    err << r.name << ": " << r.elapsed_seconds << " s\n";
    j["report"] = r.to_json();
    out << j.dump(2) << '\n';
    return r.pass() ? kExitOk : kExitVerificationFailed;
  }
  throw ParameterError("unknown density mode '" + mode + "' (expected eval, mc-compare or normalize)");
}

namespace {

void add_common(CLI::App* cmd, RunConfig& c, bool& seed_set, std::int64_t& trials, int& n) {
  cmd->add_option("--beta", c.beta, "Dyson index beta")->capture_default_str();
  cmd->add_option("--n", n, "matrix size n (max n for verify suites)");
  cmd->add_option("--gamma", c.gamma, "coupling scale gamma")->capture_default_str();
  cmd->add_option("--kappa", c.kappa, "kappa law: point:v | uniform:lo:hi | chi:k:scale")->capture_default_str();
  cmd->add_option("--trials", trials, "number of trials");
  cmd->add_option_function<std::uint64_t>(
      "--seed", [&c, &seed_set](const std::uint64_t& v) { c.seed = v, seed_set = true; },
      "seed (default: $JRES_SEED or 1)");
  cmd->add_option("--workers", c.workers, "worker threads")->capture_default_str()->check(CLI::Range(1u, 1024u));
  cmd->add_option("--N", c.truncation, "truncation size for the eigenvalue oracle")->capture_default_str();
  cmd->add_option("--bins", c.bins, "bins per axis for mc-compare")->capture_default_str();
  cmd->add_option("--format", c.format, "jsonl | csv")->capture_default_str()->check(CLI::IsMember({"jsonl", "csv"}));
  cmd->add_option("--output,-o", c.output, "output path, - for stdout")->capture_default_str();
  cmd->add_option("--input,-i", c.input, "input path, - for stdin")->capture_default_str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Resonance statistics for randomly coupled Jacobi operators", "jres"};
  app.require_subcommand(1);
  RunConfig c;
  bool seed_set = false;
  std::int64_t trials = -1;
  int n = -1;

  CLI::App* sample = app.add_subcommand("sample", "sample the coupled ensemble, one record per trial");
  CLI::App* spectrum = app.add_subcommand("spectrum", "zeros of L* for Jacobi coefficients {a, b}");
  CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
  CLI::App* density = app.add_subcommand("density", "evaluate or check the joint density");
  for (CLI::App* cmd : {sample, spectrum, verify, density}) add_common(cmd, c, seed_set, trials, n);
  verify->add_option("suite", c.subcommand, "identities | jacobian | roundtrip | membership | eigen-oracle | statistics")
      ->required();
  density->add_option("mode", c.subcommand, "eval | mc-compare | normalize")->required();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (CLI::App* cmd : {sample, spectrum, verify, density})
    if (cmd->parsed()) c.command = cmd->get_name();
  if (trials >= 0) c.trials = trials;
  else if (trials != -1) {
    err << "error: --trials must be non-negative\n";
    return kExitUsage;
  }
  if (n != -1) c.n = n;

  std::unique_ptr<std::ofstream> file_out;
  std::unique_ptr<std::ifstream> file_in;
  try {
    if (!seed_set) c.seed = default_seed();
    KappaDistribution::parse(c.kappa);
    if (c.n && *c.n < 1) throw ParameterError("--n must be at least 1");
    if (c.format == "csv" && c.command != "sample") throw ParameterError("--format csv applies to sample only");

    std::ostream* os = &out;
    std::istream* is = &in;
    if (c.output != "-") {
      file_out = std::make_unique<std::ofstream>(c.output);
      if (!*file_out) {
        err << "error: cannot open output '" << c.output << "'\n";
        return kExitIo;
      }
      os = file_out.get();
    }
    if (c.input != "-" && (c.command == "spectrum" || (c.command == "density" && c.subcommand == "eval"))) {
      file_in = std::make_unique<std::ifstream>(c.input);
      if (!*file_in) {
        err << "error: cannot open input '" << c.input << "'\n";
        return kExitIo;
      }
      is = file_in.get();
    }

    int code = kExitOk;
    if (c.command == "sample") code = cmd_sample(c, *os);
    else if (c.command == "spectrum") code = cmd_spectrum(c, *is, *os);
    else if (c.command == "verify") code = cmd_verify(c, *os, err);
    else code = cmd_density(c, *is, *os, err);
    os->flush();
    if (!*os) {
      err << "error: writing output failed\n";
      return kExitIo;
    }
    return code;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const InvalidConfiguration& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedVariant& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerificationFailed;
  }
}

}  // namespace jres
