#include <algorithm>
#include <cmath>
#include <string>

#include "mpcsim/errors.hpp"
#include "mpcsim/harness.hpp"
#include "mpcsim/random.hpp"

namespace mpcsim {

namespace {

struct KindName {
  GeneratorKind kind;
  const char* name;
};

constexpr KindName kKinds[] = {
    {GeneratorKind::gnp, "gnp"},
    {GeneratorKind::tree, "tree"},
    {GeneratorKind::forest_union, "forest_union"},
    {GeneratorKind::grid, "grid"},
    {GeneratorKind::disjoint_matching, "disjoint_matching"},
    {GeneratorKind::star, "star"},
    {GeneratorKind::cycle, "cycle"},
    {GeneratorKind::path, "path"},
    {GeneratorKind::cliques, "cliques"},
};

Edge make_edge(std::size_t a, std::size_t b) {
  const auto u = static_cast<VertexId>(std::min(a, b));
  const auto v = static_cast<VertexId>(std::max(a, b));
  return {u, v};
}

// Uniform labeled tree on n >= 2 vertices from a random Pruefer code.
void pruefer_tree(std::size_t n, std::uint64_t seed, std::uint64_t tree,
                  std::vector<Edge>& edges) {
  std::vector<std::size_t> code(n - 2);
  for (std::size_t i = 0; i < code.size(); ++i) {
    code[i] = uniform_below(hash_words(seed, {stream::kGenerator, tree, i}), n);
  }
  std::vector<std::size_t> degree(n, 1);
  for (std::size_t x : code) ++degree[x];
  // Linear decoding: `ptr` scans for the smallest leaf.
  std::size_t ptr = 0;
  while (degree[ptr] != 1) ++ptr;
  std::size_t leaf = ptr;
  for (std::size_t x : code) {
    edges.push_back(make_edge(leaf, x));
    if (--degree[x] == 1 && x < ptr) {
      leaf = x;
    } else {
      ++ptr;
      while (degree[ptr] != 1) ++ptr;
      leaf = ptr;
    }
  }
  edges.push_back(make_edge(leaf, n - 1));
}

}  // namespace

const char* to_string(GeneratorKind kind) {
  for (const KindName& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  for (const KindName& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  throw InputError("unknown generator kind: " + name);
}

Graph generate(const GeneratorSpec& spec) {
  const std::size_t n = spec.n;
  if (n > kMaxVertices) throw InputError("generator n too large");
  const std::uint64_t seed =
      hash_words(spec.seed, {stream::kGenerator, static_cast<std::uint64_t>(spec.kind)});
  std::vector<Edge> edges;
  switch (spec.kind) {
    case GeneratorKind::gnp: {
      if (!(spec.p >= 0 && spec.p <= 1)) throw InputError("gnp needs p in [0, 1]");
      for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = u + 1; v < n; ++v) {
          if (unit_interval(hash_words(seed, {u, v})) < spec.p) edges.push_back(make_edge(u, v));
        }
      }
      break;
    }
    case GeneratorKind::tree:
      if (n >= 2) pruefer_tree(n, seed, 0, edges);
      break;
    case GeneratorKind::forest_union: {
      if (spec.alpha < 1) throw InputError("forest_union needs alpha >= 1");
      if (n >= 2) {
        for (std::uint32_t j = 0; j < spec.alpha; ++j) pruefer_tree(n, seed, j, edges);
      }
      std::sort(edges.begin(), edges.end());
      edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
      break;
    }
    case GeneratorKind::grid: {
      const std::size_t cols = std::max<std::size_t>(
          1, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
      for (std::size_t v = 0; v < n; ++v) {
        if ((v + 1) % cols != 0 && v + 1 < n) edges.push_back(make_edge(v, v + 1));
        if (v + cols < n) edges.push_back(make_edge(v, v + cols));
      }
      break;
    }
    case GeneratorKind::disjoint_matching:
      for (std::size_t v = 0; v + 1 < n; v += 2) edges.push_back(make_edge(v, v + 1));
      break;
    case GeneratorKind::star:
      for (std::size_t v = 1; v < n; ++v) edges.push_back(make_edge(0, v));
      break;
    case GeneratorKind::cycle:
      for (std::size_t v = 0; v + 1 < n; ++v) edges.push_back(make_edge(v, v + 1));
      if (n >= 3) edges.push_back(make_edge(0, n - 1));
      break;
    case GeneratorKind::path:
      for (std::size_t v = 0; v + 1 < n; ++v) edges.push_back(make_edge(v, v + 1));
      break;
    case GeneratorKind::cliques: {
      if (spec.block < 1) throw InputError("cliques needs block >= 1");
      for (std::size_t start = 0; start < n; start += spec.block) {
        const std::size_t end = std::min(n, start + spec.block);
        for (std::size_t u = start; u < end; ++u) {
          for (std::size_t v = u + 1; v < end; ++v) edges.push_back(make_edge(u, v));
        }
      }
      break;
    }
  }
  return Graph(n, std::move(edges));
}

}  // namespace mpcsim
