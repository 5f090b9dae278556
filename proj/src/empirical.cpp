#include "sofic/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace sofic {

Rational hamming_distance(const Labeling& a, const Labeling& b) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("hamming_distance: length mismatch");
  }
  long long diff = 0;
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    if (a.values[i] != b.values[i]) ++diff;
  }
  return Rational(diff, static_cast<long long>(a.values.size()));
}

Rational WindowDistribution::total_mass() const {
  Rational total = 0;
  for (const auto& [p, q] : probs) total += q;
  return total;
}

Pattern pullback_pattern(const PermHom& sigma, const Labeling& x, int v,
                         const std::vector<Word>& window) {
  Pattern p;
  p.reserve(window.size());
  for (const Word& g : window) {
    int u = evaluate(sigma, g.inverse(), v);
    p.push_back(static_cast<char>('0' + x.values[static_cast<std::size_t>(u)]));
  }
  return p;
}

WindowDistribution windowed_empirical(const PermHom& sigma, const Labeling& x,
                                      const std::vector<Word>& window) {
  WindowDistribution dist;
  dist.window = window;
  std::map<Pattern, long long> counts;
  for (int v = 0; v < sigma.n; ++v) {
    counts[pullback_pattern(sigma, x, v, window)] += 1;
  }
  for (const auto& [p, c] : counts) {
    dist.probs[p] = Rational(c, static_cast<long long>(sigma.n));
  }
  return dist;
}

Rational tv_distance(const WindowDistribution& p, const WindowDistribution& q) {
  if (p.window != q.window) {
    throw std::invalid_argument("tv_distance: window mismatch");
  }
  Rational l1 = 0;
  for (const auto& [pat, w] : p.probs) {
    auto it = q.probs.find(pat);
    Rational other = it == q.probs.end() ? Rational(0) : it->second;
    l1 += abs(w - other);
  }
  for (const auto& [pat, w] : q.probs) {
    if (!p.probs.count(pat)) l1 += w;
  }
  return l1 / 2;
}

namespace {

void all_patterns(std::size_t window_size, int alphabet, Pattern& scratch,
                  std::vector<Pattern>& out) {
  if (scratch.size() == window_size) {
    out.push_back(scratch);
    return;
  }
  for (int c = 0; c < alphabet; ++c) {
    scratch.push_back(static_cast<char>('0' + c));
    all_patterns(window_size, alphabet, scratch, out);
    scratch.pop_back();
  }
}

}  // namespace

NeighborhoodSpec uniform_spec(const std::vector<Word>& window, int alphabet,
                              const Rational& radius) {
  NeighborhoodSpec spec;
  spec.window = window;
  spec.radius = radius;
  spec.target.window = window;
  std::vector<Pattern> pats;
  Pattern scratch;
  all_patterns(window.size(), alphabet, scratch, pats);
  Rational weight(1, static_cast<long long>(pats.size()));
  for (const Pattern& p : pats) spec.target.probs[p] = weight;
  return spec;
}

bool in_model_space(const PermHom& sigma, const Labeling& x,
                    const NeighborhoodSpec& spec) {
  return tv_distance(windowed_empirical(sigma, x, spec.window), spec.target) <
         spec.radius;
}

namespace {

struct Enumerator {
  const PermHom& sigma;
  const NeighborhoodSpec& spec;
  int alphabet;
  std::optional<std::uint64_t> budget;

  int n;
  // determined_at[v]: prefix length at which v's pattern is fixed.
  std::vector<int> determined_at;
  // per prefix length, the vertices whose pattern becomes determined.
  std::vector<std::vector<int>> newly_determined;
  std::vector<std::vector<int>> preimages;  // preimages[v] = sigma(g)^{-1} v per g

  std::map<Pattern, long long> counts;  // determined patterns so far
  int undetermined = 0;
  Labeling current;
  MicrostateEnumeration result;

  Enumerator(const PermHom& s, const NeighborhoodSpec& o, int a,
             std::optional<std::uint64_t> b)
      : sigma(s), spec(o), alphabet(a), budget(b), n(s.n) {
    determined_at.assign(static_cast<std::size_t>(n), 0);
    preimages.assign(static_cast<std::size_t>(n), {});
    for (int v = 0; v < n; ++v) {
      int latest = 0;
      for (const Word& g : spec.window) {
        int u = evaluate(sigma, g.inverse(), v);
        preimages[static_cast<std::size_t>(v)].push_back(u);
        latest = std::max(latest, u + 1);
      }
      determined_at[static_cast<std::size_t>(v)] = latest;
    }
    newly_determined.assign(static_cast<std::size_t>(n) + 1, {});
    for (int v = 0; v < n; ++v) {
      newly_determined[static_cast<std::size_t>(determined_at[static_cast<std::size_t>(v)])]
          .push_back(v);
    }
    current.values.assign(static_cast<std::size_t>(n), 0);
    current.alphabet = alphabet;
    undetermined = n;
  }

  Pattern pattern_of(int v) const {
    Pattern p;
    p.reserve(preimages[static_cast<std::size_t>(v)].size());
    for (int u : preimages[static_cast<std::size_t>(v)]) {
      p.push_back(static_cast<char>('0' + current.values[static_cast<std::size_t>(u)]));
    }
    return p;
  }

  // Half-l1 lower bound over final frequencies given determined counts.
  bool feasible() const {
    Rational bound = 0;
    Rational u(undetermined, n);
    for (const auto& [pat, q] : spec.target.probs) {
      auto it = counts.find(pat);
      Rational lo(it == counts.end() ? 0 : it->second, n);
      if (lo > q) {
        bound += lo - q;
      } else if (q > lo + u) {
        bound += q - lo - u;
      }
    }
    for (const auto& [pat, c] : counts) {
      if (!spec.target.probs.count(pat)) bound += Rational(c, n);
    }
    return bound / 2 < spec.radius;
  }

  bool done() const {
    return budget && result.states.size() >= *budget;
  }

  void dfs(int depth) {
    if (done()) return;
    if (depth == n) {
      result.states.push_back(current);
      if (done()) result.complete = false;
      return;
    }
    for (int c = 0; c < alphabet; ++c) {
      current.values[static_cast<std::size_t>(depth)] =
          static_cast<std::uint8_t>(c);
      const auto& fresh = newly_determined[static_cast<std::size_t>(depth) + 1];
      for (int v : fresh) {
        counts[pattern_of(v)] += 1;
        --undetermined;
      }
      if (feasible()) dfs(depth + 1);
      for (int v : fresh) {
        auto it = counts.find(pattern_of(v));
        if (--it->second == 0) counts.erase(it);
        ++undetermined;
      }
      if (done()) return;
    }
  }
};

}  // namespace

MicrostateEnumeration enumerate_microstates(
    const PermHom& sigma, const NeighborhoodSpec& spec, int alphabet,
    std::optional<std::uint64_t> budget) {
  Enumerator e(sigma, spec, alphabet, budget);
  if (e.feasible()) e.dfs(0);
  return std::move(e.result);
}

AdmissiblePair admissible_pair(const MultiGraph& g, const Labeling& x) {
  AdmissiblePair pair;
  std::size_t k = static_cast<std::size_t>(x.alphabet);
  pair.vert.assign(k, Rational(0));
  pair.edge.assign(k, std::vector<Rational>(k, Rational(0)));
  Rational vert_unit(1, static_cast<long long>(g.n));
  long long oriented = static_cast<long long>(g.n) * g.degree;
  Rational edge_unit(1, oriented);
  for (int v = 0; v < g.n; ++v) {
    std::size_t a = x.values[static_cast<std::size_t>(v)];
    pair.vert[a] += vert_unit;
    for (int u : g.adj[static_cast<std::size_t>(v)]) {
      std::size_t b = x.values[static_cast<std::size_t>(u)];
      pair.edge[a][b] += edge_unit;
    }
  }
  return pair;
}

Labeling local_map_apply(const PermHom& sigma, const LocalMap& phi,
                         const Labeling& x) {
  Labeling y;
  y.alphabet = phi.out_alphabet;
  y.values.reserve(static_cast<std::size_t>(sigma.n));
  for (int v = 0; v < sigma.n; ++v) {
    Pattern p = pullback_pattern(sigma, x, v, phi.window);
    auto it = phi.table.find(p);
    if (it == phi.table.end()) {
      throw std::invalid_argument("local_map_apply: pattern missing from table: " + p);
    }
    y.values.push_back(it->second);
  }
  return y;
}

double entropy_estimate(const PermHom& sigma, const NeighborhoodSpec& spec,
                        int alphabet,
                        std::optional<std::uint64_t> budget) {
  if (!budget && sigma.n * std::log2(static_cast<double>(alphabet)) > 34) {
    throw std::invalid_argument(
        "entropy_estimate: state space too large without a budget");
  }
  auto enumeration = enumerate_microstates(sigma, spec, alphabet, budget);
  if (enumeration.states.empty()) {
    return -std::numeric_limits<double>::infinity();
  }
  return std::log(static_cast<double>(enumeration.states.size())) / sigma.n;
}

}  // namespace sofic
