#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mpcsim/compression.hpp"
#include "mpcsim/graph.hpp"
#include "mpcsim/local.hpp"
#include "mpcsim/mpc.hpp"

namespace mpcsim {

/// AND of the `i` bits starting at `cursor` (bit j of the string is bit j % 64
/// of word j / 64), so the result is 1 with probability 2^-i for uniform bits.
/// Advances the cursor by i. Throws ContractViolation if fewer than i of the
/// `bit_count` bits remain.
bool bernoulli_from_bits(std::span<const Word> bits, std::size_t bit_count,
                         std::size_t& cursor, std::uint32_t i);

/// Largest desire exponent: ceil(log2 Delta) + 1.
std::uint32_t mis_max_exponent(std::size_t Delta);
/// Label length in bits: c * L^2 with L = mis_max_exponent(Delta).
std::size_t mis_label_bits(std::size_t Delta, std::uint32_t c = 6);

enum MisStatus : Word { kUndecided = 0, kInMis = 1, kRemoved = 2 };

/// Desire-level MIS on graphs of maximum degree <= Delta, randomness read from
/// the vertex labels. Runs c1 * ceil(log2 Delta) + c2 iterations of two LOCAL
/// rounds. Round A: exchange (status, marked, exponent); a marked vertex with
/// no marked undecided neighbor joins; the exponent e (p = 2^-e) grows by one
/// when sum over undecided neighbors of 2^-e_u is at least 2 and shrinks by one
/// otherwise, within [1, L]. Round B: exchange status; neighbors of new
/// members are removed; survivors draw their next mark with probability 2^-e.
/// Output per vertex: [status, largest exponent used, bits read].
class LocalMis final : public LocalAlgorithm {
 public:
  LocalMis(std::size_t Delta, std::uint32_t c1 = 4, std::uint32_t c2 = 8,
           std::uint32_t bit_constant = 6);

  std::uint32_t iterations() const { return iterations_; }
  std::uint32_t max_exponent() const { return max_exponent_; }
  std::size_t label_bits() const { return label_bits_; }
  std::size_t label_words() const { return (label_bits_ + 63) / 64; }

  std::uint32_t rounds() const override { return 2 * iterations_; }
  std::size_t state_bound() const override { return 5; }
  std::size_t output_bound() const override { return 3; }

  Words initial_state(const VertexContext& v) const override;
  std::vector<Words> send(const VertexContext& v, const Words& state,
                          std::uint32_t round) const override;
  Words receive(const VertexContext& v, Words state, std::span<const Words> inbox,
                std::uint32_t round) const override;
  Words output(const VertexContext& v, const Words& state) const override;

 private:
  bool draw(const VertexContext& v, Words& state) const;

  std::uint32_t iterations_;
  std::uint32_t max_exponent_;
  std::size_t label_bits_;
};

/// Uniform random labels for LocalMis drawn from (seed, iteration, vertex).
std::vector<VertexLabel> mis_labels(std::size_t n, std::size_t words,
                                    std::uint64_t seed, std::uint64_t iteration);

/// U' = vertices of U whose degree in G[U] is at most Delta, with G[U']
/// relabeled to ids 0..|U'|-1 in increasing order of original id.
struct LowDegreePart {
  std::vector<VertexId> vertices;
  Graph graph;
};
LowDegreePart low_degree_extract(const Graph& g, const std::vector<bool>& in_u,
                                 std::size_t Delta);

struct ArbMisParams {
  std::uint32_t alpha = 2;
  std::uint32_t gamma = 4;
  std::uint64_t seed = 0;
  std::uint32_t c1 = 4;
  std::uint32_t c2 = 8;
  std::uint32_t bit_constant = 6;
  /// Compressed passes beyond ceil(log_gamma n) before the direct finish.
  std::uint32_t extra_passes = 3;
  CompressionOptions compression;
};

struct MisIteration {
  std::size_t u_before = 0;
  std::size_t u_low = 0;  // |U'|
  std::size_t u_after = 0;
  std::size_t undecided = 0;
  std::size_t joined = 0;
  std::uint32_t max_exponent_used = 0;
  std::uint32_t max_exponent_allowed = 0;
  std::size_t max_bits_read = 0;
  std::size_t bit_budget = 0;
  bool compressed = true;
};

struct ArbMisResult {
  std::vector<VertexId> mis;  // sorted
  std::size_t outer_iterations = 0;
  std::size_t fallback_passes = 0;
  std::vector<MisIteration> iterations;
  std::size_t degeneracy = 0;
  /// degeneracy <= 2 alpha - 1.
  bool alpha_consistent = true;
  double gamma_over_alpha = 0;
  std::uint64_t rounds = 0;
  std::size_t max_machine_words = 0;
  std::size_t total_words = 0;
};

/// Maximal independent set for graphs of arboricity at most alpha. Each pass
/// runs LocalMis on G[U'] through round compression with Delta = 2 alpha
/// gamma, adds the new members to I and removes the decided part of U' and
/// the neighbors of new members from U; undecided vertices stay in U. After
/// ceil(log_gamma n) + extra_passes passes a remaining U is finished by
/// direct simulation of LocalMis. The run must hold the edges of g.
ArbMisResult arboricity_mis(MpcRun& run, const Graph& g, const ArbMisParams& params);

}  // namespace mpcsim
