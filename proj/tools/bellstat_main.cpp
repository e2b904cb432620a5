// bellstat: Bell-test statistics on photon-counting data.
//
// Subcommands:
//   analyze   per-block Eberhard J and CH ratio T with Chebyshev significance
//   simulate  synthetic counts from the two-photon source model
//   optimize  source/analyzer parameters minimizing the expected J
//   noneq     linear-vs-ratio significance divergence demo
//
// Exit codes: 0 success, 2 input error, 3 degenerate statistics.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "bellstat/analysis.hpp"
#include "bellstat/json_writer.hpp"
#include "bellstat/nonequivalence.hpp"
#include "bellstat/simulator.hpp"

namespace {

using namespace bellstat;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitDegenerate = 3;
constexpr double kDeg = std::numbers::pi / 180.0;

constexpr const char* kBackgroundModelNote =
    "background is a per-trial per-channel click probability promoting undetected slots "
    "to o or e with equal odds (stand-in model)";

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BELLSTAT_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw DomainError("BELLSTAT_SEED must be an unsigned integer, got '" + std::string(env) +
                        "'");
    }
  }
  return 1;
}

ExperimentSeries read_series(const std::string& path) {
  std::vector<std::string> warnings;
  ExperimentSeries series;
  if (path == "-") {
    series = parse_series(std::cin, &warnings);
  } else {
    series = parse_series_file(path, &warnings);
  }
  for (const std::string& warning : warnings) {
    std::cerr << "warning: " << warning << '\n';
  }
  return series;
}

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  out << content;
}

// ---- analyze ---------------------------------------------------------------

struct AnalyzeArgs {
  std::string input = "-";
  double level = 0.9995;
  std::string singles_rule = "eq3";
  bool drift = false;
  std::string drift_reference = "a1b1";
  bool json = false;
};

int run_analyze(const AnalyzeArgs& args) {
  AnalysisOptions options;
  options.level = args.level;
  const auto rule = singles_rule_from_string(args.singles_rule);
  if (!rule) throw DomainError("unknown singles rule '" + args.singles_rule + "'");
  options.singles_rule = *rule;
  options.drift = args.drift;
  const auto reference = setting_pair_from_string(args.drift_reference);
  if (!reference) throw DomainError("unknown setting pair '" + args.drift_reference + "'");
  options.drift_reference = *reference;

  const ExperimentSeries series = read_series(args.input);
  const AnalysisReport report = analyze_series(series, options);
  std::cout << (args.json ? render_json(report) + "\n" : render_text(report));
  return kExitOk;
}

// ---- simulate --------------------------------------------------------------

struct SimulateArgs {
  double eta = 1.0;
  std::optional<double> eta_a;
  std::optional<double> eta_b;
  double bg = 0.0;
  double r = 1.0;
  std::vector<double> angles_deg = {0.0, 45.0, 22.5, -22.5};
  std::int64_t pairs = 10000;
  std::int64_t blocks = 30;
  std::optional<std::uint64_t> seed;
  std::string out = "-";
};

int run_simulate(const SimulateArgs& args) {
  SourceModel src;
  src.r = args.r;
  for (std::size_t i = 0; i < 4; ++i) src.angles[i] = args.angles_deg[i] * kDeg;
  src.eta_a = args.eta_a.value_or(args.eta);
  src.eta_b = args.eta_b.value_or(args.eta);
  src.bg = args.bg;

  SimConfig cfg;
  cfg.pairs_per_block = args.pairs;
  cfg.blocks = args.blocks;
  cfg.seed = resolve_seed(args.seed);

  const ExperimentSeries series = simulate(src, cfg);

  std::ostringstream text;
  text << "# bellstat simulate seed=" << cfg.seed << " r=" << format_g17(src.r)
       << " eta_a=" << format_g17(src.eta_a) << " eta_b=" << format_g17(src.eta_b)
       << " bg=" << format_g17(src.bg) << " pairs=" << cfg.pairs_per_block
       << " blocks=" << cfg.blocks << '\n';
  if (src.bg > 0.0) text << "# note: " << kBackgroundModelNote << '\n';
  serialize_series(series, text);
  write_output(args.out, text.str());
  std::cerr << "seed: " << cfg.seed << '\n';
  return kExitOk;
}

// ---- optimize --------------------------------------------------------------

int run_optimize(double eta, double bg) {
  const OptimizeResult result = optimize_eberhard(eta, bg);
  JsonWriter w;
  w.begin_object();
  w.key("eta").value(eta);
  w.key("bg").value(bg);
  w.key("r").value(result.r);
  w.key("angles_deg");
  w.begin_array();
  for (const double angle : result.angles) w.value(angle / kDeg);
  w.end_array();
  w.key("j_min").value(result.j_min);
  w.key("evaluations").value(result.evaluations);
  w.key("background_model").value(kBackgroundModelNote);
  w.end_object();
  std::cout << w.str() << '\n';
  return kExitOk;
}

// ---- noneq -----------------------------------------------------------------

struct NoneqArgs {
  double delta = 0.0;
  double lambda = 0.0;
  double k = 0.0;
  double a2 = 1.0;
  double eps2 = 1.0;
  std::int64_t samples = 0;
  std::optional<std::uint64_t> seed;
  bool json = false;
};

void print_ratio(std::ostream& out, const std::optional<double>& ratio) {
  if (ratio) {
    out << format_g17(*ratio);
  } else {
    out << "degenerate";
  }
}

void write_noneq_report(JsonWriter& w, const NoneqReport& report) {
  w.begin_object();
  w.key("mu_j").value(report.mu_j);
  w.key("sigma_j").value(report.sigma_j);
  w.key("mu_t").value(report.mu_t);
  w.key("sigma_t").value(report.sigma_t);
  if (report.r_j) {
    w.key("r_j").value(*report.r_j);
  } else {
    w.key("r_j").null();
  }
  if (report.r_t) {
    w.key("r_t").value(*report.r_t);
  } else {
    w.key("r_t").null();
  }
  w.end_object();
}

int run_noneq(const NoneqArgs& args) {
  const TwoPointModel model = construct(args.delta, args.lambda, args.k, args.a2, args.eps2);
  const NoneqReport exact = moments(model);
  const double a = model.a1 / model.a2;

  std::optional<NoneqReport> empirical;
  if (args.samples > 0) {
    empirical = empirical_check(model, args.samples, resolve_seed(args.seed));
  }

  if (args.json) {
    JsonWriter w;
    w.begin_object();
    w.key("rows");
    w.begin_array();
    w.begin_object();
    w.key("delta").value(args.delta);
    w.key("lambda").value(args.lambda);
    w.key("k").value(args.k);
    w.key("a").value(a);
    if (exact.r_j) {
      w.key("r_j").value(*exact.r_j);
    } else {
      w.key("r_j").null();
    }
    if (exact.r_t) {
      w.key("r_t").value(*exact.r_t);
    } else {
      w.key("r_t").null();
    }
    w.end_object();
    w.end_array();
    w.key("moments");
    write_noneq_report(w, exact);
    w.key("empirical");
    if (empirical) {
      write_noneq_report(w, *empirical);
    } else {
      w.null();
    }
    w.end_object();
    std::cout << w.str() << '\n';
    return kExitOk;
  }

  std::cout << "delta      lambda     k          a          R_J        R_T\n";
  std::cout << format_g17(args.delta) << "  " << format_g17(args.lambda) << "  "
            << format_g17(args.k) << "  " << format_g17(a) << "  ";
  print_ratio(std::cout, exact.r_j);
  std::cout << "  ";
  print_ratio(std::cout, exact.r_t);
  std::cout << '\n';
  std::cout << "moments: mu_J " << format_g17(exact.mu_j) << "  sigma_J "
            << format_g17(exact.sigma_j) << "  mu_T " << format_g17(exact.mu_t) << "  sigma_T "
            << format_g17(exact.sigma_t) << '\n';
  if (empirical) {
    std::cout << "empirical (" << args.samples << " samples): mu_J "
              << format_g17(empirical->mu_j) << "  sigma_J " << format_g17(empirical->sigma_j)
              << "  R_J ";
    print_ratio(std::cout, empirical->r_j);
    std::cout << "  R_T ";
    print_ratio(std::cout, empirical->r_t);
    std::cout << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bell-test statistics on photon-counting data"};
  app.require_subcommand(1);

  AnalyzeArgs analyze_args;
  CLI::App* analyze = app.add_subcommand(
      "analyze", "Evaluate per-block J and T with Chebyshev significance");
  analyze->add_option("input", analyze_args.input, "counts CSV path, or - for stdin");
  analyze->add_option("--level", analyze_args.level, "confidence level in (0,1)")
      ->capture_default_str();
  analyze
      ->add_option("--singles-rule", analyze_args.singles_rule,
                   "singles selection: eq3, first-pair, average")
      ->capture_default_str();
  analyze->add_flag("--drift", analyze_args.drift, "add the drift-normalized T' section");
  analyze
      ->add_option("--drift-reference", analyze_args.drift_reference,
                   "reference run: a1b1, a1b2, a2b1, a2b2")
      ->capture_default_str();
  analyze->add_flag("--json", analyze_args.json, "emit the JSON report");

  SimulateArgs simulate_args;
  CLI::App* sim = app.add_subcommand("simulate", "Generate synthetic counts CSV");
  sim->add_option("--eta", simulate_args.eta, "detection efficiency for both arms")
      ->capture_default_str();
  sim->add_option("--eta-a", simulate_args.eta_a, "arm A efficiency override");
  sim->add_option("--eta-b", simulate_args.eta_b, "arm B efficiency override");
  sim->add_option("--bg", simulate_args.bg, "background click probability")
      ->capture_default_str();
  sim->add_option("--r", simulate_args.r, "entanglement parameter")->capture_default_str();
  sim->add_option("--angles-deg", simulate_args.angles_deg,
                  "analyzer angles a1 a2 b1 b2 in degrees")
      ->expected(4);
  sim->add_option("--pairs", simulate_args.pairs, "emitted pairs per run per block")
      ->capture_default_str();
  sim->add_option("--blocks", simulate_args.blocks, "number of blocks L")
      ->capture_default_str();
  sim->add_option("--seed", simulate_args.seed, "RNG seed (fallback: BELLSTAT_SEED, then 1)");
  sim->add_option("--out", simulate_args.out, "output path, or - for stdout")
      ->capture_default_str();

  double optimize_eta = 1.0;
  double optimize_bg = 0.0;
  CLI::App* optimize = app.add_subcommand(
      "optimize", "Minimize the expected J over source and analyzer parameters");
  optimize->add_option("--eta", optimize_eta, "detection efficiency")->required();
  optimize->add_option("--bg", optimize_bg, "background click probability")
      ->capture_default_str();

  NoneqArgs noneq_args;
  CLI::App* noneq = app.add_subcommand(
      "noneq", "Linear-vs-ratio significance divergence on the two-point model");
  noneq->add_option("delta", noneq_args.delta, "delta in (0,1); p1 = delta^2")->required();
  noneq->add_option("lambda", noneq_args.lambda, "eps1/eps2 ratio, > 1")->required();
  noneq->add_option("k", noneq_args.k, "target R_J scale, > 0")->required();
  noneq->add_option("--a2", noneq_args.a2, "A2 scale")->capture_default_str();
  noneq->add_option("--eps2", noneq_args.eps2, "eps2 scale")->capture_default_str();
  noneq->add_option("--samples", noneq_args.samples,
                    "Monte Carlo sample count (0 disables the empirical check)")
      ->capture_default_str();
  noneq->add_option("--seed", noneq_args.seed, "RNG seed (fallback: BELLSTAT_SEED, then 1)");
  noneq->add_flag("--json", noneq_args.json, "emit the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (*analyze) return run_analyze(analyze_args);
    if (*sim) return run_simulate(simulate_args);
    if (*optimize) return run_optimize(optimize_eta, optimize_bg);
    if (*noneq) return run_noneq(noneq_args);
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const DegenerateStatisticsError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const NormalizationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const UndefinedRatioError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return kExitOk;
}
