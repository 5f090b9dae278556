#include "sofic/sofic.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace sofic {

namespace {

std::vector<int> invert(const std::vector<int>& perm) {
  std::vector<int> inv(perm.size());
  for (std::size_t v = 0; v < perm.size(); ++v) {
    inv[static_cast<std::size_t>(perm[v])] = static_cast<int>(v);
  }
  return inv;
}

}  // namespace

PermHom PermHom::from_generators(std::vector<std::vector<int>> gens) {
  PermHom sigma;
  sigma.rank = static_cast<int>(gens.size());
  sigma.n = gens.empty() ? 0 : static_cast<int>(gens[0].size());
  for (const auto& g : gens) {
    if (static_cast<int>(g.size()) != sigma.n) {
      throw std::invalid_argument("PermHom: generator size mismatch");
    }
    std::vector<char> seen(g.size(), 0);
    for (int v : g) {
      if (v < 0 || v >= sigma.n || seen[static_cast<std::size_t>(v)]) {
        throw std::invalid_argument("PermHom: not a permutation");
      }
      seen[static_cast<std::size_t>(v)] = 1;
    }
    sigma.inv_gens.push_back(invert(g));
  }
  sigma.gens = std::move(gens);
  return sigma;
}

int evaluate(const PermHom& sigma, const Word& w, int v) {
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    int a = *it;
    if (a > 0) {
      v = sigma.gens[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(v)];
    } else {
      v = sigma.inv_gens[static_cast<std::size_t>(-a - 1)][static_cast<std::size_t>(v)];
    }
  }
  return v;
}

MultiGraph MultiGraph::from_edges(int n, int degree,
                                  std::vector<std::pair<int, int>> edges) {
  MultiGraph g;
  g.n = n;
  g.degree = degree;
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  g.edges = std::move(edges);
  g.adj.assign(static_cast<std::size_t>(n), {});
  for (auto [u, v] : g.edges) {
    g.adj[static_cast<std::size_t>(u)].push_back(v);
    g.adj[static_cast<std::size_t>(v)].push_back(u);
  }
  for (const auto& nb : g.adj) {
    if (static_cast<int>(nb.size()) != degree) {
      throw std::invalid_argument("MultiGraph: degree invariant violated");
    }
  }
  return g;
}

PermHom sample_perm_hom(int rank, int n, RngStream& rng) {
  if (rank < 1 || n < 1) {
    throw std::invalid_argument("sample_perm_hom: rank >= 1 and n >= 1 required");
  }
  std::vector<std::vector<int>> gens;
  gens.reserve(static_cast<std::size_t>(rank));
  for (int i = 0; i < rank; ++i) {
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(perm);
    gens.push_back(std::move(perm));
  }
  return PermHom::from_generators(std::move(gens));
}

MultiGraph sample_config_graph(int d, int n, RngStream& rng) {
  if (d < 1 || n < 1) {
    throw std::invalid_argument("sample_config_graph: d >= 1 and n >= 1 required");
  }
  if ((static_cast<long long>(d) * n) % 2 != 0) {
    throw std::invalid_argument("sample_config_graph: d*n must be even");
  }
  std::vector<int> half_edges(static_cast<std::size_t>(d) * static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < half_edges.size(); ++i) {
    half_edges[i] = static_cast<int>(i) / d;  // owning vertex
  }
  rng.shuffle(half_edges);
  std::vector<std::pair<int, int>> edges;
  edges.reserve(half_edges.size() / 2);
  for (std::size_t i = 0; i + 1 < half_edges.size(); i += 2) {
    edges.emplace_back(half_edges[i], half_edges[i + 1]);
  }
  return MultiGraph::from_edges(n, d, std::move(edges));
}

MultiGraph schreier_graph(const PermHom& sigma) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(sigma.rank) * static_cast<std::size_t>(sigma.n));
  for (int i = 0; i < sigma.rank; ++i) {
    for (int v = 0; v < sigma.n; ++v) {
      edges.emplace_back(v, sigma.gens[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)]);
    }
  }
  return MultiGraph::from_edges(sigma.n, 2 * sigma.rank, std::move(edges));
}

SoficReport sofic_report(const PermHom& sigma, const std::vector<Word>& window,
                         double delta) {
  SoficReport report;
  std::vector<char> fixed_by_some(static_cast<std::size_t>(sigma.n), 0);
  for (const Word& w : window) {
    if (w.is_identity()) continue;
    int fixed = 0;
    for (int v = 0; v < sigma.n; ++v) {
      if (evaluate(sigma, w, v) == v) {
        ++fixed;
        fixed_by_some[static_cast<std::size_t>(v)] = 1;
      }
    }
    report.fixed_fractions[w] = static_cast<double>(fixed) / sigma.n;
  }
  int moved_by_all = 0;
  for (char f : fixed_by_some) {
    if (!f) ++moved_by_all;
  }
  report.trace_preserving =
      static_cast<double>(moved_by_all) > (1.0 - delta) * sigma.n;
  report.multiplicative = true;
  return report;
}

namespace {

// Counts simple cycles of length >= 3 through `start` using only
// vertices >= start, over edge instances. Each cycle is found twice
// (once per direction).
void cycle_dfs(const MultiGraph& g,
               const std::vector<std::vector<std::pair<int, int>>>& inc,
               int start, int current, int length, int max_len,
               std::vector<char>& on_path, std::vector<char>& used_edge,
               std::vector<std::uint64_t>& counts) {
  for (auto [w, eid] : inc[static_cast<std::size_t>(current)]) {
    if (used_edge[static_cast<std::size_t>(eid)] || w < start) continue;
    if (w == start) {
      if (length + 1 >= 3) counts[static_cast<std::size_t>(length)] += 1;
      continue;
    }
    if (on_path[static_cast<std::size_t>(w)] || length + 1 >= max_len) continue;
    on_path[static_cast<std::size_t>(w)] = 1;
    used_edge[static_cast<std::size_t>(eid)] = 1;
    cycle_dfs(g, inc, start, w, length + 1, max_len, on_path, used_edge, counts);
    used_edge[static_cast<std::size_t>(eid)] = 0;
    on_path[static_cast<std::size_t>(w)] = 0;
  }
}

}  // namespace

std::vector<std::uint64_t> count_short_cycles(const MultiGraph& g, int max_len) {
  if (max_len < 1) {
    throw std::invalid_argument("count_short_cycles: max_len >= 1 required");
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_len), 0);

  // Length 1: one cycle per self-loop instance.
  std::map<std::pair<int, int>, int> multiplicity;
  for (auto e : g.edges) multiplicity[e] += 1;
  for (const auto& [e, m] : multiplicity) {
    if (e.first == e.second) {
      counts[0] += static_cast<std::uint64_t>(m);
    } else if (max_len >= 2) {
      // Length 2: one cycle per unordered pair of parallel edges.
      counts[1] += static_cast<std::uint64_t>(m) * (m - 1) / 2;
    }
  }
  if (max_len < 3) return counts;

  // Incidence lists over non-loop edge instances.
  std::vector<std::vector<std::pair<int, int>>> inc(static_cast<std::size_t>(g.n));
  for (std::size_t eid = 0; eid < g.edges.size(); ++eid) {
    auto [u, v] = g.edges[eid];
    if (u == v) continue;
    inc[static_cast<std::size_t>(u)].emplace_back(v, static_cast<int>(eid));
    inc[static_cast<std::size_t>(v)].emplace_back(u, static_cast<int>(eid));
  }
  std::vector<char> on_path(static_cast<std::size_t>(g.n), 0);
  std::vector<char> used_edge(g.edges.size(), 0);
  std::vector<std::uint64_t> raw(static_cast<std::size_t>(max_len), 0);
  for (int s = 0; s < g.n; ++s) {
    on_path[static_cast<std::size_t>(s)] = 1;
    cycle_dfs(g, inc, s, s, 0, max_len, on_path, used_edge, raw);
    on_path[static_cast<std::size_t>(s)] = 0;
  }
  for (int k = 3; k <= max_len; ++k) {
    counts[static_cast<std::size_t>(k - 1)] += raw[static_cast<std::size_t>(k - 1)] / 2;
  }
  return counts;
}

double edit_distance(const PermHom& a, const PermHom& b,
                     const std::vector<Word>& words) {
  if (a.n != b.n) {
    throw std::invalid_argument("edit_distance: size mismatch");
  }
  int moved = 0;
  for (int v = 0; v < a.n; ++v) {
    for (const Word& w : words) {
      if (evaluate(a, w, v) != evaluate(b, w, v)) {
        ++moved;
        break;
      }
    }
  }
  return static_cast<double>(moved) / a.n;
}

PermHom product_with_trivial(const PermHom& sigma, int copies) {
  if (copies < 1) {
    throw std::invalid_argument("product_with_trivial: copies >= 1 required");
  }
  std::vector<std::vector<int>> gens(static_cast<std::size_t>(sigma.rank));
  for (int i = 0; i < sigma.rank; ++i) {
    auto& g = gens[static_cast<std::size_t>(i)];
    g.reserve(static_cast<std::size_t>(sigma.n) * static_cast<std::size_t>(copies));
    for (int c = 0; c < copies; ++c) {
      for (int v = 0; v < sigma.n; ++v) {
        g.push_back(sigma.gens[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] +
                    c * sigma.n);
      }
    }
  }
  return PermHom::from_generators(std::move(gens));
}

std::string permhom_to_json(const PermHom& sigma) {
  nlohmann::json j;
  j["n"] = sigma.n;
  j["gens"] = sigma.gens;
  return j.dump();
}

PermHom permhom_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  return PermHom::from_generators(j.at("gens").get<std::vector<std::vector<int>>>());
}

std::string multigraph_to_json(const MultiGraph& g) {
  nlohmann::json j;
  j["n"] = g.n;
  j["degree"] = g.degree;
  auto edges = nlohmann::json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = edges;
  return j.dump();
}

}  // namespace sofic
