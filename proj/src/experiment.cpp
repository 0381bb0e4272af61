#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "mpcsim/compression.hpp"
#include "mpcsim/errors.hpp"
#include "mpcsim/harness.hpp"
#include "mpcsim/local.hpp"

namespace mpcsim {

namespace {

struct AlgorithmName {
  Algorithm algorithm;
  const char* name;
};

constexpr AlgorithmName kAlgorithms[] = {
    {Algorithm::match, "match"},
    {Algorithm::mis, "mis"},
    {Algorithm::peel_direct, "peel-direct"},
    {Algorithm::compress_demo, "compress-demo"},
};

struct Point {
  std::uint32_t k, lambda, gamma;
  double delta;
  std::optional<double> eps;
  std::uint64_t seed;
};

std::vector<Point> expand_grid(const ExperimentSpec& spec) {
  std::vector<std::optional<double>> eps;
  if (spec.eps.empty()) {
    eps.push_back(std::nullopt);
  } else {
    eps.assign(spec.eps.begin(), spec.eps.end());
  }
  std::vector<Point> points;
  for (auto k : spec.k)
    for (auto lambda : spec.lambda)
      for (auto gamma : spec.gamma)
        for (auto delta : spec.delta)
          for (const auto& e : eps)
            for (auto seed : spec.seeds) points.push_back({k, lambda, gamma, delta, e, seed});
  return points;
}

Graph load_graph(const ExperimentSpec& spec, std::uint64_t seed) {
  if (spec.generator) {
    GeneratorSpec g = *spec.generator;
    g.seed = seed;
    return generate(g);
  }
  std::ifstream in(spec.input_file);
  if (!in) throw InputError("cannot open input file: " + spec.input_file);
  return read_graph(in);
}

void fill_match(ExperimentRow& row, const Graph& g, const std::vector<Edge>& matching,
                const std::vector<VertexId>& cover) {
  row.matching_size = matching.size();
  row.cover_size = cover.size();
  bool endpoints = true;
  for (const Edge& e : matching) {
    endpoints = endpoints && std::binary_search(cover.begin(), cover.end(), e.u) &&
                std::binary_search(cover.begin(), cover.end(), e.v);
  }
  row.valid = check_matching(g, matching) && check_cover(g, cover) && endpoints &&
              cover.size() >= matching.size();
}

void run_point(const ExperimentSpec& spec, const Point& pt, ExperimentRow& row) {
  const Graph g = load_graph(spec, pt.seed);
  row.n = g.n();
  row.m = g.m();
  if (g.n() <= spec.oracle.max_n_exact_matching) {
    row.oracle_matching = max_matching_exact(g, spec.oracle).size;
  }
  if (g.n() <= spec.oracle.max_n_exact_cover) {
    row.oracle_cover = min_vertex_cover_exact(g, spec.oracle).size;
  }
  switch (spec.algorithm) {
    case Algorithm::match: {
      MatchMpcParams p;
      p.k = pt.k;
      p.lambda = pt.lambda;
      p.delta = pt.delta;
      p.seed = pt.seed;
      if (pt.eps) {
        const TwoPlusEpsResult r = two_plus_eps(g, p, *pt.eps);
        fill_match(row, g, r.matching, r.cover);
        row.rounds = r.rounds;
        row.max_machine_words = r.max_machine_words;
        row.total_words = r.total_words;
      } else {
        const PeelingOutput o = boost(g, p, spec.trials);
        fill_match(row, g, o.matching, o.cover);
        row.rounds = o.rounds;
        row.max_machine_words = o.max_machine_words;
        row.total_words = o.total_words;
      }
      break;
    }
    case Algorithm::peel_direct: {
      MpcRun run = make_run(g, pt.delta, pt.seed);
      const PeelingOutput o =
          mpc_global_peeling(run, g, std::max<double>(1, static_cast<double>(g.max_degree())));
      fill_match(row, g, o.matching, o.cover);
      row.rounds = o.rounds;
      row.max_machine_words = o.max_machine_words;
      row.total_words = o.total_words;
      break;
    }
    case Algorithm::mis: {
      ArbMisParams p;
      p.alpha = spec.alpha;
      p.gamma = pt.gamma;
      p.seed = pt.seed;
      MpcRun run = make_run(g, pt.delta, pt.seed);
      const ArbMisResult r = arboricity_mis(run, g, p);
      row.mis_size = r.mis.size();
      row.valid = check_mis(g, r.mis);
      row.rounds = r.rounds;
      row.max_machine_words = r.max_machine_words;
      row.total_words = r.total_words;
      break;
    }
    case Algorithm::compress_demo: {
      const LocalMis a(std::max<std::size_t>(2, g.max_degree()));
      const LabeledMultigraph lg =
          LabeledMultigraph::from_graph(g, mis_labels(g.n(), a.label_words(), pt.seed, 1));
      MpcRun run = make_run(g, pt.delta, pt.seed);
      const LocalOutput out = round_compression(run, lg, a);
      const LocalOutput direct = simulate_local_direct(lg, a);
      row.mis_size = static_cast<std::size_t>(std::count_if(
          out.begin(), out.end(), [](const Words& w) { return w[0] == kInMis; }));
      row.valid = out == direct;
      row.rounds = run.stats().rounds_used;
      row.max_machine_words = run.stats().max_machine_words;
      row.total_words = run.stats().total_words;
      break;
    }
  }
}

std::string cell(const std::optional<std::size_t>& v) {
  return v ? std::to_string(*v) : std::string();
}

std::string real(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// Quotes a field when it contains a separator, quote or line break.
std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

template <class T>
nlohmann::json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json phase_summary(const std::vector<PhaseTrace>& phases) {
  nlohmann::json list = nlohmann::json::array();
  for (const PhaseTrace& p : phases) {
    list.push_back({{"source", p.source},
                    {"phase", p.phase},
                    {"delta", p.delta},
                    {"heavy", p.heavy.size()},
                    {"friends", p.friends.size()},
                    {"matched", p.matched.size()},
                    {"covered", p.covered.size()},
                    {"heavy_matched", p.heavy_matched}});
  }
  return list;
}

nlohmann::json edges_json(const std::vector<Edge>& edges) {
  nlohmann::json list = nlohmann::json::array();
  for (const Edge& e : edges) list.push_back({e.u, e.v});
  return list;
}

}  // namespace

const char* to_string(Algorithm a) {
  for (const AlgorithmName& x : kAlgorithms) {
    if (x.algorithm == a) return x.name;
  }
  return "unknown";
}

Algorithm parse_algorithm(const std::string& name) {
  for (const AlgorithmName& x : kAlgorithms) {
    if (name == x.name) return x.algorithm;
  }
  throw InputError("unknown algorithm: " + name);
}

std::vector<ExperimentRow> run_experiment(const ExperimentSpec& spec) {
  if (!spec.generator && spec.input_file.empty()) {
    throw InputError("experiment needs a generator or an input file");
  }
  if (spec.seeds.empty()) throw InputError("experiment needs at least one seed");
  const std::vector<Point> points = expand_grid(spec);
  std::vector<ExperimentRow> rows(points.size());
  auto work = [&](std::size_t i) {
    const Point& pt = points[i];
    ExperimentRow& row = rows[i];
    row.k = pt.k;
    row.lambda = pt.lambda;
    row.gamma = pt.gamma;
    row.delta = pt.delta;
    row.eps = pt.eps;
    row.seed = pt.seed;
    const auto start = std::chrono::steady_clock::now();
    try {
      run_point(spec, pt, row);
    } catch (const std::exception& e) {
      row.valid = false;
      row.error = e.what();
    }
    if (spec.timing) {
      row.wall_ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(spec.threads, 1, points.size() + 1);
  if (threads == 1) {
    for (std::size_t i = 0; i < points.size(); ++i) work(i);
    return rows;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < points.size(); i = next++) work(i);
    });
  }
  pool.clear();
  return rows;
}

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << "n,m,k,lambda,gamma,delta,seed,rounds,max_machine_words,total_words,"
         "matching_size,cover_size,mis_size,oracle_matching,oracle_cover,valid,wall_ms,"
         "eps,error\n";
  for (const ExperimentRow& r : rows) {
    out << r.n << ',' << r.m << ',' << r.k << ',' << r.lambda << ',' << r.gamma << ','
        << real(r.delta) << ',' << r.seed << ',' << r.rounds << ',' << r.max_machine_words
        << ',' << r.total_words << ',' << cell(r.matching_size) << ','
        << cell(r.cover_size) << ',' << cell(r.mis_size) << ',' << cell(r.oracle_matching)
        << ',' << cell(r.oracle_cover) << ',' << (r.valid ? "true" : "false") << ','
        << (r.wall_ms ? real(*r.wall_ms) : std::string()) << ','
        << (r.eps ? real(*r.eps) : std::string()) << ',' << csv_field(r.error) << '\n';
  }
}

nlohmann::json to_json(const ExperimentRow& r) {
  return {{"n", r.n},
          {"m", r.m},
          {"k", r.k},
          {"lambda", r.lambda},
          {"gamma", r.gamma},
          {"delta", r.delta},
          {"seed", r.seed},
          {"rounds", r.rounds},
          {"max_machine_words", r.max_machine_words},
          {"total_words", r.total_words},
          {"matching_size", optional_json(r.matching_size)},
          {"cover_size", optional_json(r.cover_size)},
          {"mis_size", optional_json(r.mis_size)},
          {"oracle_matching", optional_json(r.oracle_matching)},
          {"oracle_cover", optional_json(r.oracle_cover)},
          {"valid", r.valid},
          {"wall_ms", optional_json(r.wall_ms)},
          {"eps", optional_json(r.eps)},
          {"error", r.error}};
}

nlohmann::json stats_json(const RoundStats& s) {
  return {{"rounds", s.rounds_used},
          {"max_machine_words", s.max_machine_words},
          {"total_words", s.total_words},
          {"primitives", {{"sort", s.sort_calls}, {"prefix_sum", s.prefix_sum_calls}}}};
}

nlohmann::json match_json(const PeelingOutput& out) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const MatchIteration& it : out.iterations) {
    iterations.push_back({{"delta", it.delta},
                          {"k_prime", it.k_prime},
                          {"p", it.p},
                          {"sampled_max_degree", it.sampled_max_degree},
                          {"residual_max_degree_after", it.residual_max_degree_after},
                          {"compression_rounds", it.compression.rounds},
                          {"compression_mode", to_string(it.compression.mode)}});
  }
  return {{"matching", edges_json(out.matching)},
          {"cover", out.cover},
          {"rounds", out.rounds},
          {"max_machine_words", out.max_machine_words},
          {"total_words", out.total_words},
          {"phase_trace_summary",
           {{"phases", phase_summary(out.phases)},
            {"iterations", iterations},
            {"fallback_bound", out.fallback_bound},
            {"fallback_bound_held", out.fallback_bound_held}}}};
}

nlohmann::json match_json(const TwoPlusEpsResult& out) {
  return {{"matching", edges_json(out.matching)},
          {"cover", out.cover},
          {"rounds", out.rounds},
          {"max_machine_words", out.max_machine_words},
          {"total_words", out.total_words},
          {"phase_trace_summary", {{"repetitions", out.repetitions}}}};
}

nlohmann::json mis_json(const ArbMisResult& out) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const MisIteration& it : out.iterations) {
    iterations.push_back({{"u_before", it.u_before},
                          {"u_low", it.u_low},
                          {"u_after", it.u_after},
                          {"joined", it.joined},
                          {"undecided", it.undecided},
                          {"max_exponent_used", it.max_exponent_used},
                          {"max_bits_read", it.max_bits_read},
                          {"compressed", it.compressed}});
  }
  return {{"mis", out.mis},
          {"outer_iterations", out.outer_iterations},
          {"rounds", out.rounds},
          {"max_machine_words", out.max_machine_words},
          {"total_words", out.total_words},
          {"fallback_passes", out.fallback_passes},
          {"degeneracy", out.degeneracy},
          {"alpha_consistent", out.alpha_consistent},
          {"iterations", iterations}};
}

}  // namespace mpcsim
