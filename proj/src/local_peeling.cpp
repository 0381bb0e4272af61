#include <algorithm>
#include <cmath>
#include <tuple>

#include "mpcsim/errors.hpp"
#include "mpcsim/peeling.hpp"

namespace mpcsim {

namespace {

// State words.
enum : std::size_t {
  kAlive,
  kInCover,
  kMate,         // mate + 1
  kHeavyMask,
  kFriendMask,
  kMatchedMask,
  kFriendEdge,   // edge index + 1 of the pending claim
  kConfirmEdge,  // edge index + 1 of the pending confirmation
  kClaimPhase,   // phase of the pending claim
  kStateWords,
};

Word bit(std::uint32_t phase) { return Word{1} << (phase - 1); }

bool blue(const VertexContext& v, std::uint32_t phase) {
  if (v.label.words.empty()) {
    throw ContractViolation("vertex " + std::to_string(v.id) + " has no color bits");
  }
  return ((v.label.words[0] >> (phase - 1)) & 1) != 0;
}

}  // namespace

LocalPeeling::LocalPeeling(std::uint32_t k_prime, std::uint32_t lambda, double log_n)
    : k_(k_prime),
      delta_local_(std::ldexp(static_cast<double>(lambda) * log_n, static_cast<int>(k_prime))) {
  if (k_prime < 1 || k_prime > 63) throw InputError("k' must lie in [1, 63]");
}

double LocalPeeling::threshold(std::uint32_t phase) const {
  return std::ldexp(delta_local_, -static_cast<int>(phase));
}

Words LocalPeeling::initial_state(const VertexContext&) const {
  Words s(kStateWords, 0);
  s[kAlive] = 1;
  return s;
}

std::vector<Words> LocalPeeling::send(const VertexContext& v, const Words& state,
                                      std::uint32_t round) const {
  std::vector<Words> out(v.edges.size());
  if (round % 2 == 1) {
    for (std::size_t e = 0; e < out.size(); ++e) {
      out[e] = {state[kAlive], state[kConfirmEdge] == e + 1 ? 1u : 0u};
    }
  } else if (state[kFriendEdge] != 0) {
    const std::uint32_t phase = round / 2;
    out[state[kFriendEdge] - 1] = {1, blue(v, phase) ? 1u : 0u};
  }
  return out;
}

Words LocalPeeling::receive(const VertexContext& v, Words state,
                            std::span<const Words> inbox, std::uint32_t round) const {
  if (round % 2 == 1) {
    // Status round of phase (round + 1) / 2; the last one only confirms.
    for (std::size_t e = 0; e < inbox.size(); ++e) {
      if (inbox[e].size() == 2 && inbox[e][1] == 1) {
        state[kMate] = v.edges[e].neighbor + 1;
        state[kMatchedMask] |= bit(static_cast<std::uint32_t>(state[kClaimPhase]));
      }
    }
    state[kConfirmEdge] = 0;
    const std::uint32_t phase = (round + 1) / 2;
    if (phase > k_ || state[kAlive] == 0) return state;
    std::size_t degree = 0;
    std::size_t best = v.edges.size();
    for (std::size_t e = 0; e < inbox.size(); ++e) {
      if (v.edges[e].phase != phase || inbox[e][0] != 1) continue;
      ++degree;
      if (best == v.edges.size() ||
          std::tie(v.edges[e].own_rho, v.edges[e].neighbor) <
              std::tie(v.edges[best].own_rho, v.edges[best].neighbor)) {
        best = e;
      }
    }
    if (degree > 0 && static_cast<double>(degree) >= threshold(phase)) {
      state[kHeavyMask] |= bit(phase);
      state[kFriendEdge] = best + 1;
    }
    return state;
  }

  const std::uint32_t phase = round / 2;
  if (state[kFriendEdge] != 0) {
    state[kAlive] = 0;
    state[kInCover] = 1;
    state[kClaimPhase] = phase;
    state[kFriendEdge] = 0;
  }
  std::size_t claims = 0, blue_claims = 0, blue_edge = 0;
  for (std::size_t e = 0; e < inbox.size(); ++e) {
    if (inbox[e].empty() || inbox[e][0] != 1) continue;
    ++claims;
    if (inbox[e][1] == 1) {
      ++blue_claims;
      blue_edge = e;
    }
  }
  if (claims > 0) {
    state[kFriendMask] |= bit(phase);
    state[kAlive] = 0;
    state[kInCover] = 1;
    if (blue_claims == 1 && !blue(v, phase)) {
      state[kMate] = v.edges[blue_edge].neighbor + 1;
      state[kMatchedMask] |= bit(phase);
      state[kConfirmEdge] = blue_edge + 1;
    }
  }
  return state;
}

Words LocalPeeling::output(const VertexContext&, const Words& state) const {
  return {state[kInCover], state[kMate], state[kHeavyMask], state[kFriendMask],
          state[kMatchedMask]};
}

LocalPeelingResult decode_local_peeling(const LocalOutput& out, std::uint32_t k_prime,
                                        double outer_delta) {
  LocalPeelingResult res;
  res.phases.resize(k_prime);
  for (std::uint32_t i = 1; i <= k_prime; ++i) {
    res.phases[i - 1].source = "local";
    res.phases[i - 1].phase = i;
    res.phases[i - 1].delta = std::ldexp(outer_delta, -static_cast<int>(i));
  }
  for (VertexId v = 0; v < out.size(); ++v) {
    const Words& o = out[v];
    if (o[0] == 1) res.cover.push_back(v);
    const bool matched = o[1] != 0;
    const auto mate = static_cast<VertexId>(o[1] - 1);
    if (matched && v < mate) res.matching.push_back({v, mate});
    for (std::uint32_t i = 1; i <= k_prime; ++i) {
      PhaseTrace& ph = res.phases[i - 1];
      const Word b = Word{1} << (i - 1);
      const bool heavy = (o[2] & b) != 0, fr = (o[3] & b) != 0;
      if (heavy) ph.heavy.push_back(v);
      if (fr) ph.friends.push_back(v);
      if (heavy || fr) ph.covered.push_back(v);
      if ((o[4] & b) != 0) {
        if (v < mate) ph.matched.push_back({v, mate});
        if (heavy) ++ph.heavy_matched;
      }
    }
  }
  return res;
}

}  // namespace mpcsim
