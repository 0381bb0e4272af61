#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mpcsim/graph.hpp"
#include "mpcsim/mis.hpp"
#include "mpcsim/mpc.hpp"
#include "mpcsim/oracles.hpp"
#include "mpcsim/peeling.hpp"

namespace mpcsim {

enum class GeneratorKind {
  gnp,
  tree,
  forest_union,
  grid,
  disjoint_matching,
  star,
  cycle,
  path,
  /// Disjoint cliques of `block` vertices (the last one may be smaller).
  cliques,
};

const char* to_string(GeneratorKind kind);
/// Throws InputError on an unknown name.
GeneratorKind parse_generator_kind(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::gnp;
  std::size_t n = 0;
  double p = 0.05;          // gnp edge probability
  std::uint32_t alpha = 2;  // forest_union: number of spanning trees
  std::size_t block = 8;    // cliques: clique size
  std::uint64_t seed = 0;
};

/// Deterministic per seed. tree and forest_union use uniform random labeled
/// spanning trees (Pruefer codes); forest_union keeps the union of alpha of
/// them, so its arboricity is at most alpha. grid is a row-major grid with
/// floor(sqrt n) columns. Throws InputError on invalid parameters.
Graph generate(const GeneratorSpec& spec);

enum class Algorithm { match, mis, peel_direct, compress_demo };

const char* to_string(Algorithm a);
Algorithm parse_algorithm(const std::string& name);

/// A sweep: the cartesian product of the parameter lists, times the seeds.
/// With a generator, each seed also seeds the graph.
struct ExperimentSpec {
  Algorithm algorithm = Algorithm::match;
  std::optional<GeneratorSpec> generator;
  std::string input_file;
  std::vector<std::uint32_t> k{2};
  std::vector<std::uint32_t> lambda{32};
  std::vector<std::uint32_t> gamma{4};
  std::vector<double> delta{0.5};
  /// Empty: plain constant-factor matcher. Otherwise one (2+eps) run per value.
  std::vector<double> eps;
  std::vector<std::uint64_t> seeds{1};
  std::uint32_t alpha = 2;
  std::size_t trials = 1;
  OracleBudget oracle;
  /// Fill wall_ms. Off by default so reruns are byte-identical.
  bool timing = false;
  std::size_t threads = 1;
};

struct ExperimentRow {
  std::size_t n = 0;
  std::size_t m = 0;
  std::uint32_t k = 0;
  std::uint32_t lambda = 0;
  std::uint32_t gamma = 0;
  double delta = 0;
  std::optional<double> eps;
  std::uint64_t seed = 0;
  std::uint64_t rounds = 0;
  std::size_t max_machine_words = 0;
  std::size_t total_words = 0;
  std::optional<std::size_t> matching_size;
  std::optional<std::size_t> cover_size;
  std::optional<std::size_t> mis_size;
  std::optional<std::size_t> oracle_matching;
  std::optional<std::size_t> oracle_cover;
  bool valid = false;
  std::optional<double> wall_ms;
  /// Exception message when the run failed; the sweep continues.
  std::string error;
};

/// Rows in spec order: parameters vary slowest to fastest as k, lambda,
/// gamma, delta, eps, then seed.
std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec);

/// Header plus one line per row; empty cells for absent values.
void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
nlohmann::json to_json(const ExperimentRow& row);

/// {rounds, max_machine_words, total_words, primitives: {sort, prefix_sum}}.
nlohmann::json stats_json(const RoundStats& stats);

/// {matching, cover, rounds, max_machine_words, total_words,
/// phase_trace_summary}.
nlohmann::json match_json(const PeelingOutput& out);
nlohmann::json match_json(const TwoPlusEpsResult& out);

/// {mis, outer_iterations, rounds, max_machine_words, total_words,
/// fallback_passes}.
nlohmann::json mis_json(const ArbMisResult& out);

}  // namespace mpcsim
