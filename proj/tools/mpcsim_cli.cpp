// Command-line front end: graph generation, single runs (JSON) and sweeps
// (CSV or JSON). Exit codes: 0 success, 1 invalid input, 2 contract
// violation, 3 space-model violation.

#include <CLI11.hpp>
#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "mpcsim/compression.hpp"
#include "mpcsim/errors.hpp"
#include "mpcsim/harness.hpp"
#include "mpcsim/local.hpp"

using namespace mpcsim;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Replaces "--config FILE" by one "--key=value" argument per line of the
// file ("key = value", '#' starts a comment). Keys given on the command line
// win over the file.
std::vector<std::string> expand_config(std::vector<std::string> args) {
  std::string path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config " + path);
  auto given = [&](const std::string& key) {
    return std::any_of(rest.begin(), rest.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
  };
  std::vector<std::string> extra;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path + ":" + std::to_string(number) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw InputError(path + ":" + std::to_string(number) + ": empty key");
    if (!given(key)) extra.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
  }
  // Subcommand first, then file values, then the command line.
  std::vector<std::string> out;
  if (!rest.empty()) out.push_back(rest.front());
  out.insert(out.end(), extra.begin(), extra.end());
  if (rest.size() > 1) out.insert(out.end(), rest.begin() + 1, rest.end());
  return out;
}

struct GraphSource {
  std::string input;
  std::string kind;
  std::size_t n = 0;
  double p = 0.05;
  std::uint32_t forests = 2;
  std::size_t block = 8;
  std::optional<std::uint64_t> graph_seed;

  void add(CLI::App* app) {
    app->add_option("--input", input, "Graph file: \"n m\" then m lines \"u v\"");
    app->add_option("--gen", kind, "Generator kind instead of --input");
    app->add_option("--n", n, "Generator vertex count");
    app->add_option("--p", p, "gnp edge probability");
    app->add_option("--forests", forests, "forest_union tree count");
    app->add_option("--block", block, "cliques block size");
    app->add_option("--graph-seed", graph_seed, "Generator seed (default: --seed)");
  }

  std::optional<GeneratorSpec> spec(std::uint64_t seed) const {
    if (kind.empty()) return std::nullopt;
    GeneratorSpec g;
    g.kind = parse_generator_kind(kind);
    g.n = n;
    g.p = p;
    g.alpha = forests;
    g.block = block;
    g.seed = graph_seed.value_or(seed);
    return g;
  }

  Graph load(std::uint64_t seed) const {
    if (!kind.empty() && !input.empty()) throw InputError("give --input or --gen, not both");
    if (auto g = spec(seed)) return generate(*g);
    if (input.empty()) throw InputError("missing --input or --gen");
    std::ifstream in(input);
    if (!in) throw InputError("cannot open " + input);
    return read_graph(in);
  }
};

struct Output {
  std::string path;
  std::string format = "json";

  void add(CLI::App* app, const std::string& default_format) {
    format = default_format;
    app->add_option("--out", path, "Output path (default: stdout)");
    app->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  template <class F>
  void write(F&& emit) const {
    if (path.empty()) {
      emit(std::cout);
      return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    emit(out);
  }

  void json(const nlohmann::json& j) const {
    if (format != "json") throw InputError("this command writes json only");
    write([&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }
};

int run(int argc, char** argv) {
  std::vector<std::string> args = expand_config(std::vector<std::string>(argv + 1, argv + argc));
  CLI::App app{"MPC simulator with round compression, peeling and MIS"};
  app.require_subcommand(1);

  // generate
  GeneratorSpec gen;
  std::string gen_kind = "gnp";
  std::string gen_out;
  auto* generate_cmd = app.add_subcommand("generate", "Write a generated graph");
  generate_cmd->add_option("--kind", gen_kind, "Generator kind")->required();
  generate_cmd->add_option("--n", gen.n, "Vertex count")->required();
  generate_cmd->add_option("--p", gen.p, "gnp edge probability");
  generate_cmd->add_option("--alpha", gen.alpha, "forest_union tree count");
  generate_cmd->add_option("--block", gen.block, "cliques block size");
  generate_cmd->add_option("--seed", gen.seed, "Seed");
  generate_cmd->add_option("--out", gen_out, "Output path (default: stdout)");

  // match
  GraphSource match_src;
  Output match_out;
  MatchMpcParams match_params;
  std::size_t trials = 1;
  std::optional<double> eps;
  auto* match_cmd = app.add_subcommand("match", "Constant-factor matching and vertex cover");
  match_src.add(match_cmd);
  match_out.add(match_cmd, "json");
  match_cmd->add_option("--k", match_params.k, "Phases per compressed iteration");
  match_cmd->add_option("--delta", match_params.delta, "Machine space exponent");
  match_cmd->add_option("--lambda", match_params.lambda, "Sampling constant");
  match_cmd->add_option("--seed", match_params.seed, "Seed");
  match_cmd->add_option("--trials", trials, "Independent trials, best kept");
  match_cmd->add_option("--eps", eps, "Run the (2+eps) repetition scheme");

  // mis
  GraphSource mis_src;
  Output mis_out;
  ArbMisParams mis_params;
  double mis_delta = 0.5;
  auto* mis_cmd = app.add_subcommand("mis", "Maximal independent set for bounded arboricity");
  mis_src.add(mis_cmd);
  mis_out.add(mis_cmd, "json");
  mis_cmd->add_option("--alpha", mis_params.alpha, "Arboricity bound");
  mis_cmd->add_option("--gamma", mis_params.gamma, "Shrink factor");
  mis_cmd->add_option("--delta", mis_delta, "Machine space exponent");
  mis_cmd->add_option("--seed", mis_params.seed, "Seed");

  // peel-direct
  GraphSource peel_src;
  Output peel_out;
  double peel_delta = 0.5;
  std::uint64_t peel_seed = 0;
  std::optional<double> peel_d;
  auto* peel_cmd = app.add_subcommand("peel-direct", "Uncompressed peeling on the simulator");
  peel_src.add(peel_cmd);
  peel_out.add(peel_cmd, "json");
  peel_cmd->add_option("--delta", peel_delta, "Machine space exponent");
  peel_cmd->add_option("--seed", peel_seed, "Seed");
  peel_cmd->add_option("--d", peel_d, "Initial threshold (default: max degree)");

  // compress-demo
  GraphSource demo_src;
  Output demo_out;
  double demo_delta = 0.5;
  std::uint64_t demo_seed = 0;
  std::string demo_mode = "automatic";
  auto* demo_cmd = app.add_subcommand(
      "compress-demo", "Round-compressed LOCAL MIS compared with direct simulation");
  demo_src.add(demo_cmd);
  demo_out.add(demo_cmd, "json");
  demo_cmd->add_option("--delta", demo_delta, "Machine space exponent");
  demo_cmd->add_option("--seed", demo_seed, "Seed");
  demo_cmd->add_option("--mode", demo_mode, "automatic, materialized or accounted")
      ->check(CLI::IsMember({"automatic", "materialized", "accounted"}));

  // sweep
  GraphSource sweep_src;
  Output sweep_out;
  ExperimentSpec sweep;
  std::string sweep_algorithm = "match";
  auto* sweep_cmd = app.add_subcommand("sweep", "Parameter grid times seeds");
  sweep_src.add(sweep_cmd);
  sweep_out.add(sweep_cmd, "csv");
  sweep_cmd->add_option("--algorithm", sweep_algorithm, "match, mis, peel-direct, compress-demo");
  sweep_cmd->add_option("--k", sweep.k, "k values")->delimiter(',');
  sweep_cmd->add_option("--lambda", sweep.lambda, "lambda values")->delimiter(',');
  sweep_cmd->add_option("--gamma", sweep.gamma, "gamma values")->delimiter(',');
  sweep_cmd->add_option("--delta", sweep.delta, "delta values")->delimiter(',');
  sweep_cmd->add_option("--eps", sweep.eps, "eps values")->delimiter(',');
  sweep_cmd->add_option("--seeds", sweep.seeds, "Seeds")->delimiter(',');
  sweep_cmd->add_option("--alpha", sweep.alpha, "Arboricity bound for mis");
  sweep_cmd->add_option("--trials", sweep.trials, "Trials per match run");
  sweep_cmd->add_option("--threads", sweep.threads, "Concurrent rows");
  sweep_cmd->add_flag("--timing", sweep.timing, "Fill wall_ms");

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->add_option("--config", "key = value file mirroring the flags; flags win");
  }
  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*generate_cmd) {
    gen.kind = parse_generator_kind(gen_kind);
    const Graph g = generate(gen);
    if (gen_out.empty()) {
      write_graph(std::cout, g);
    } else {
      std::ofstream out(gen_out);
      if (!out) throw InputError("cannot write " + gen_out);
      write_graph(out, g);
    }
  } else if (*match_cmd) {
    const Graph g = match_src.load(match_params.seed);
    if (eps) {
      match_out.json(match_json(two_plus_eps(g, match_params, *eps)));
    } else {
      match_out.json(match_json(boost(g, match_params, trials)));
    }
  } else if (*mis_cmd) {
    const Graph g = mis_src.load(mis_params.seed);
    MpcRun r = make_run(g, mis_delta, mis_params.seed);
    mis_out.json(mis_json(arboricity_mis(r, g, mis_params)));
  } else if (*peel_cmd) {
    const Graph g = peel_src.load(peel_seed);
    MpcRun r = make_run(g, peel_delta, peel_seed);
    const double d = peel_d.value_or(std::max<double>(1, static_cast<double>(g.max_degree())));
    nlohmann::json j = match_json(mpc_global_peeling(r, g, d));
    j["stats"] = stats_json(r.stats());
    peel_out.json(j);
  } else if (*demo_cmd) {
    const Graph g = demo_src.load(demo_seed);
    const LocalMis a(std::max<std::size_t>(2, g.max_degree()));
    const LabeledMultigraph lg =
        LabeledMultigraph::from_graph(g, mis_labels(g.n(), a.label_words(), demo_seed, 1));
    MpcRun r = make_run(g, demo_delta, demo_seed);
    CompressionOptions options;
    options.mode = demo_mode == "materialized" ? BallMode::materialized
                   : demo_mode == "accounted"  ? BallMode::accounted
                                               : BallMode::automatic;
    CompressionReport report;
    const LocalOutput out = round_compression(r, lg, a, options, &report);
    const bool equal = out == simulate_local_direct(lg, a);
    demo_out.json({{"t", report.plan.t},
                   {"schedule", report.plan.schedule},
                   {"iterations", report.plan.iterations()},
                   {"s_star", report.plan.s_star},
                   {"mode", to_string(report.mode)},
                   {"rounds", report.rounds},
                   {"peak_machine_words", report.peak_machine_words},
                   {"capacity", report.capacity},
                   {"machines", report.machines},
                   {"equal_to_direct", equal},
                   {"stats", stats_json(r.stats())}});
  } else if (*sweep_cmd) {
    sweep.algorithm = parse_algorithm(sweep_algorithm);
    sweep.generator = sweep_src.spec(0);
    sweep.input_file = sweep_src.input;
    const std::vector<ExperimentRow> rows = run_experiment(sweep);
    sweep_out.write([&](std::ostream& o) {
      if (sweep_out.format == "csv") {
        write_csv(o, rows);
      } else {
        nlohmann::json list = nlohmann::json::array();
        for (const ExperimentRow& row : rows) list.push_back(to_json(row));
        o << list.dump(2) << '\n';
      }
    });
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const InputError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const BudgetExceeded& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 1;
  } catch (const SpaceExceeded& e) {
    std::cerr << "space violation: " << e.what() << '\n';
    return 3;
  } catch (const CapacityError& e) {
    std::cerr << "space violation: " << e.what() << '\n';
    return 3;
  } catch (const ContractViolation& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 2;
  } catch (const IncompletenessError& e) {
    std::cerr << "contract violation: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
