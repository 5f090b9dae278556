#include "sofic/indepsets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "sofic/moments.hpp"
#include "sofic/rational.hpp"

namespace sofic {

VertexSet::VertexSet(int n) : n_(n), words_(static_cast<std::size_t>((n + 63) / 64), 0) {}

VertexSet VertexSet::from_indices(int n, const std::vector<int>& indices) {
  VertexSet s(n);
  for (int v : indices) s.insert(v);
  return s;
}

bool VertexSet::contains(int v) const {
  return (words_[static_cast<std::size_t>(v) / 64] >> (v % 64)) & 1;
}

void VertexSet::insert(int v) {
  if (v < 0 || v >= n_) throw std::out_of_range("VertexSet::insert");
  words_[static_cast<std::size_t>(v) / 64] |= std::uint64_t{1} << (v % 64);
}

void VertexSet::erase(int v) {
  if (v < 0 || v >= n_) throw std::out_of_range("VertexSet::erase");
  words_[static_cast<std::size_t>(v) / 64] &= ~(std::uint64_t{1} << (v % 64));
}

int VertexSet::count() const {
  int total = 0;
  for (std::uint64_t w : words_) total += std::popcount(w);
  return total;
}

std::vector<int> VertexSet::indices() const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v) {
    if (contains(v)) out.push_back(v);
  }
  return out;
}

int VertexSet::intersection_count(const VertexSet& other) const {
  int total = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    total += std::popcount(words_[i] & other.words_[i]);
  }
  return total;
}

int VertexSet::symmetric_difference_count(const VertexSet& other) const {
  int total = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    total += std::popcount(words_[i] ^ other.words_[i]);
  }
  return total;
}

bool is_independent(const MultiGraph& g, const VertexSet& w) {
  for (auto [u, v] : g.edges) {
    if (w.contains(u) && w.contains(v)) return false;
  }
  return true;
}

namespace {

// Deduplicated neighbor sets; nbr[v] contains v itself iff v has a loop.
std::vector<VertexSet> neighbor_sets(const MultiGraph& g) {
  std::vector<VertexSet> nbr(static_cast<std::size_t>(g.n), VertexSet(g.n));
  for (auto [u, v] : g.edges) {
    nbr[static_cast<std::size_t>(u)].insert(v);
    nbr[static_cast<std::size_t>(v)].insert(u);
  }
  return nbr;
}

struct IndepDfs {
  const MultiGraph& g;
  std::vector<VertexSet> nbr;
  int w_min, w_max;
  std::optional<std::uint64_t> budget;
  IndepEnumeration out;
  VertexSet current;
  VertexSet forbidden;

  IndepDfs(const MultiGraph& graph, int lo, int hi,
           std::optional<std::uint64_t> b)
      : g(graph), nbr(neighbor_sets(graph)), w_min(lo), w_max(hi), budget(b),
        current(graph.n), forbidden(graph.n) {}

  bool full() const { return budget && out.sets.size() >= *budget; }

  void run(int v, int chosen) {
    if (full()) return;
    if (chosen + (g.n - v) < w_min || chosen > w_max) return;
    if (v == g.n) {
      if (chosen >= w_min) {
        out.sets.push_back(current);
        if (full()) out.complete = false;
      }
      return;
    }
    if (chosen < w_max && !forbidden.contains(v) &&
        !nbr[static_cast<std::size_t>(v)].contains(v)) {
      current.insert(v);
      std::vector<int> newly;
      for (int u : nbr[static_cast<std::size_t>(v)].indices()) {
        if (u > v && !forbidden.contains(u)) {
          forbidden.insert(u);
          newly.push_back(u);
        }
      }
      run(v + 1, chosen + 1);
      for (int u : newly) forbidden.erase(u);
      current.erase(v);
    }
    run(v + 1, chosen);
  }
};

}  // namespace

IndepEnumeration enumerate_indep(const MultiGraph& g, int w_min, int w_max,
                                 std::optional<std::uint64_t> budget) {
  IndepDfs dfs(g, std::max(w_min, 0), std::min(w_max, g.n), budget);
  dfs.run(0, 0);
  return std::move(dfs.out);
}

namespace {

void max_indep_dfs(const std::vector<VertexSet>& nbr, int n, int v, int chosen,
                   VertexSet& current, VertexSet& forbidden, MaxIndep& best) {
  if (chosen > best.size) {
    best.size = chosen;
    best.witness = current;
  }
  if (v == n) return;
  int available = 0;
  for (int u = v; u < n; ++u) {
    if (!forbidden.contains(u) && !nbr[static_cast<std::size_t>(u)].contains(u)) {
      ++available;
    }
  }
  if (chosen + available <= best.size) return;
  if (!forbidden.contains(v) && !nbr[static_cast<std::size_t>(v)].contains(v)) {
    current.insert(v);
    std::vector<int> newly;
    for (int u : nbr[static_cast<std::size_t>(v)].indices()) {
      if (u > v && !forbidden.contains(u)) {
        forbidden.insert(u);
        newly.push_back(u);
      }
    }
    max_indep_dfs(nbr, n, v + 1, chosen + 1, current, forbidden, best);
    for (int u : newly) forbidden.erase(u);
    current.erase(v);
  }
  max_indep_dfs(nbr, n, v + 1, chosen, current, forbidden, best);
}

}  // namespace

MaxIndep max_indep(const MultiGraph& g) {
  MaxIndep best;
  best.witness = VertexSet(g.n);
  auto nbr = neighbor_sets(g);
  VertexSet current(g.n), forbidden(g.n);
  max_indep_dfs(nbr, g.n, 0, 0, current, forbidden, best);
  best.fraction = static_cast<double>(best.size) / g.n;
  return best;
}

VertexSet sample_uniform_indep(const MultiGraph& g, int w, RngStream& rng) {
  auto enumeration = enumerate_indep(g, w, w);
  if (enumeration.sets.empty()) {
    throw std::runtime_error("sample_uniform_indep: no independent set of that size");
  }
  return enumeration.sets[rng.below(enumeration.sets.size())];
}

std::pair<PermHom, VertexSet> sample_planted(int r, int n, int w,
                                             RngStream& rng) {
  if (2 * w > n) {
    throw std::invalid_argument("sample_planted: 2w <= n required");
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  std::vector<int> in_w(order.begin(), order.begin() + w);
  std::sort(in_w.begin(), in_w.end());
  VertexSet planted = VertexSet::from_indices(n, in_w);
  std::vector<int> outside;
  for (int v = 0; v < n; ++v) {
    if (!planted.contains(v)) outside.push_back(v);
  }

  std::vector<std::vector<int>> gens;
  for (int i = 0; i < r; ++i) {
    std::vector<int> perm(static_cast<std::size_t>(n), -1);
    // Uniform injection W -> V \ W for the images of W.
    std::vector<int> targets = outside;
    rng.shuffle(targets);
    std::vector<char> taken(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < w; ++j) {
      perm[static_cast<std::size_t>(in_w[static_cast<std::size_t>(j)])] =
          targets[static_cast<std::size_t>(j)];
      taken[static_cast<std::size_t>(targets[static_cast<std::size_t>(j)])] = 1;
    }
    // Uniform bijection of the remaining domain onto the remaining targets.
    std::vector<int> rest_targets;
    for (int v = 0; v < n; ++v) {
      if (!taken[static_cast<std::size_t>(v)]) rest_targets.push_back(v);
    }
    rng.shuffle(rest_targets);
    std::size_t k = 0;
    for (int v : outside) {
      perm[static_cast<std::size_t>(v)] = rest_targets[k++];
    }
    gens.push_back(std::move(perm));
  }
  return {PermHom::from_generators(std::move(gens)), planted};
}

OverlapSpectrum overlap_spectrum(const MultiGraph& g, const VertexSet& w,
                                 int band_lo, int band_hi,
                                 std::optional<std::uint64_t> budget) {
  OverlapSpectrum spectrum;
  auto enumeration = enumerate_indep(g, band_lo, band_hi, budget);
  spectrum.complete = enumeration.complete;
  for (const VertexSet& other : enumeration.sets) {
    spectrum.counts[w.intersection_count(other)] += 1;
  }
  int run_start = -1;
  for (int k = 0; k <= w.count(); ++k) {
    bool empty = !spectrum.counts.count(k);
    if (empty && run_start < 0) run_start = k;
    if (!empty && run_start >= 0) {
      spectrum.gaps.emplace_back(run_start, k - 1);
      run_start = -1;
    }
  }
  if (run_start >= 0) spectrum.gaps.emplace_back(run_start, w.count());
  return spectrum;
}

ClusterReport cluster_of(const MultiGraph& g, const VertexSet& w, double s,
                         double eps) {
  ClusterReport report;
  int lo = static_cast<int>(std::ceil((s - eps) * g.n - 1e-9));
  int hi = static_cast<int>(std::floor((s + eps) * g.n + 1e-9));
  auto enumeration = enumerate_indep(g, std::max(lo, 0), std::min(hi, g.n));
  double overlap_threshold = 0.5 * s * g.n;
  for (const VertexSet& other : enumeration.sets) {
    if (static_cast<double>(w.intersection_count(other)) >= overlap_threshold) {
      report.members.push_back(other);
    }
  }
  report.size = report.members.size();
  report.log_size_per_vertex =
      report.size == 0 ? -std::numeric_limits<double>::infinity()
                       : std::log(static_cast<double>(report.size)) / g.n;
  return report;
}

GoodSetReport good_set_filter(const PermHom& sigma, const VertexSet& w,
                              const GoodSetParams& p) {
  if (!(p.eps / 5.0 < p.b2 - p.b1)) {
    throw std::invalid_argument("good_set_filter: need eps/5 < b2 - b1");
  }
  double eps10 = p.eps / 10.0;
  double entropy_term = eps10 * std::log(2.0) + eta(eps10) + eta(1.0 - eps10);
  if (!(entropy_term < p.gamma / 6.0)) {
    throw std::invalid_argument(
        "good_set_filter: need (eps/10) log 2 + H(eps/10, 1-eps/10) < gamma/6");
  }

  GoodSetReport report;
  MultiGraph g = schreier_graph(sigma);
  int n = sigma.n;

  // Condition 1: no independent W' in the open density band with overlap
  // inside [b1 n, b2 n].
  int lo = static_cast<int>(std::ceil((p.s - p.eps) * n - 1e-9));
  int hi = static_cast<int>(std::floor((p.s + p.eps) * n + 1e-9));
  auto enumeration = enumerate_indep(g, std::max(lo, 0), std::min(hi, n));
  report.gap_ok = true;
  for (const VertexSet& other : enumeration.sets) {
    double density = static_cast<double>(other.count()) / n;
    if (!(std::abs(density - p.s) < p.eps)) continue;
    double overlap = static_cast<double>(w.intersection_count(other));
    if (overlap >= p.b1 * n && overlap <= p.b2 * n) {
      report.gap_ok = false;
      report.reasons.push_back("overlap band hit at |W ∩ W'| = " +
                               std::to_string(static_cast<int>(overlap)));
      break;
    }
  }

  ClusterReport cluster = cluster_of(g, w, p.s, p.eps);
  report.cluster_ok =
      cluster.log_size_per_vertex <= p.f_rs - p.gamma / 2.0;
  if (!report.cluster_ok) {
    report.reasons.push_back("cluster log-size exceeds f_rs - gamma/2");
  }
  report.passes = report.gap_ok && report.cluster_ok;
  return report;
}

std::vector<int> shatter_components(const std::vector<VertexSet>& sets,
                                    double kappa) {
  std::size_t m = sets.size();
  std::vector<int> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) {
      parent[static_cast<std::size_t>(a)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
      a = parent[static_cast<std::size_t>(a)];
    }
    return a;
  };
  Rational threshold(kappa);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      int diff = sets[i].symmetric_difference_count(sets[j]);
      if (Rational(diff, sets[i].n()) < threshold) {
        parent[static_cast<std::size_t>(find(static_cast<int>(i)))] =
            find(static_cast<int>(j));
      }
    }
  }
  std::vector<int> labels(m, -1);
  std::map<int, int> relabel;
  for (std::size_t i = 0; i < m; ++i) {
    int root = find(static_cast<int>(i));
    auto [it, inserted] = relabel.try_emplace(root, static_cast<int>(relabel.size()));
    labels[i] = it->second;
  }
  return labels;
}

}  // namespace sofic
