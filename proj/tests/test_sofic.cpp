#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "sofic/freegroup.hpp"
#include "sofic/rng.hpp"
#include "sofic/sofic.hpp"

using namespace sofic;

namespace {

// Oracle: a subset of edge instances is a simple cycle iff it is
// connected and every touched vertex has degree exactly 2 (loops count
// twice). Counts cycles by exhausting all edge subsets.
std::vector<std::uint64_t> brute_cycles(const MultiGraph& g, int max_len) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(max_len), 0);
  std::size_t e = g.edges.size();
  REQUIRE(e <= 20);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << e); ++mask) {
    int size = __builtin_popcountll(mask);
    if (size > max_len) continue;
    std::map<int, int> degree;
    for (std::size_t i = 0; i < e; ++i) {
      if (!(mask & (std::uint64_t{1} << i))) continue;
      auto [u, v] = g.edges[i];
      degree[u] += u == v ? 2 : 1;
      if (u != v) degree[v] += 1;
    }
    bool all_two = std::all_of(degree.begin(), degree.end(),
                               [](const auto& kv) { return kv.second == 2; });
    if (!all_two) continue;
    // Connectivity over the touched vertices via the selected edges.
    std::map<int, int> comp;
    int next = 0;
    for (const auto& [v, d] : degree) comp[v] = next++;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::size_t i = 0; i < e; ++i) {
        if (!(mask & (std::uint64_t{1} << i))) continue;
        auto [u, v] = g.edges[i];
        if (comp[u] != comp[v]) {
          int lo = std::min(comp[u], comp[v]);
          int hi = std::max(comp[u], comp[v]);
          for (auto& [w, c] : comp) {
            if (c == hi) c = lo;
          }
          changed = true;
        }
      }
    }
    std::set<int> roots;
    for (const auto& [v, c] : comp) roots.insert(c);
    if (roots.size() == 1) counts[static_cast<std::size_t>(size - 1)] += 1;
  }
  return counts;
}

}  // namespace

TEST_CASE("PermHom validation") {
  CHECK_THROWS_AS(PermHom::from_generators({{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(PermHom::from_generators({{0, 2, 1}, {0, 1}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(PermHom::from_generators({{0, 3, 1}}), std::invalid_argument);
  auto ok = PermHom::from_generators({{1, 2, 0}, {0, 2, 1}});
  CHECK(ok.n == 3);
  CHECK(ok.rank == 2);
}

TEST_CASE("evaluate acts right-to-left and respects inverses") {
  // sigma(a1) = (0 1 2), sigma(a2) = swap(1,2).
  auto sigma = PermHom::from_generators({{1, 2, 0}, {0, 2, 1}});
  CHECK(evaluate(sigma, Word(2, {1}), 0) == 1);
  CHECK(evaluate(sigma, Word(2, {-1}), 1) == 0);
  // a1*a2 means apply a2 first.
  for (int v = 0; v < 3; ++v) {
    int via_word = evaluate(sigma, Word(2, {1, 2}), v);
    int direct = sigma.gens[0][static_cast<std::size_t>(sigma.gens[1][static_cast<std::size_t>(v)])];
    CHECK(via_word == direct);
  }
  // Homomorphism property on random words.
  RngStream rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<int> raw_u, raw_v;
    for (int i = 0; i < 4; ++i) {
      int a = static_cast<int>(rng.below(4)) - 2;
      if (a >= 0) ++a;
      raw_u.push_back(a);
      a = static_cast<int>(rng.below(4)) - 2;
      if (a >= 0) ++a;
      raw_v.push_back(a);
    }
    Word u(2, raw_u), v(2, raw_v);
    for (int x = 0; x < 3; ++x) {
      CHECK(evaluate(sigma, u * v, x) == evaluate(sigma, u, evaluate(sigma, v, x)));
    }
  }
}

TEST_CASE("schreier graph is 2r-regular") {
  RngStream rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    PermHom sigma = sample_perm_hom(2, 9, rng);
    MultiGraph g = schreier_graph(sigma);
    CHECK(g.degree == 4);
    CHECK(g.edges.size() == 18);
    for (const auto& nb : g.adj) CHECK(nb.size() == 4);
  }
}

TEST_CASE("config model validation and degree invariant") {
  RngStream rng(13);
  CHECK_THROWS_AS(sample_config_graph(3, 5, rng), std::invalid_argument);
  for (int trial = 0; trial < 10; ++trial) {
    MultiGraph g = sample_config_graph(3, 4, rng);
    CHECK(g.degree == 3);
    CHECK(g.edges.size() == 6);
  }
}

TEST_CASE("uniform homomorphism sampling: chi-square against Sym(4)") {
  RngStream rng(17);
  std::map<std::vector<int>, int> counts;
  const int samples = 24000;
  for (int i = 0; i < samples; ++i) {
    counts[sample_perm_hom(1, 4, rng).gens[0]] += 1;
  }
  REQUIRE(counts.size() == 24);
  double expected = samples / 24.0;
  double stat = 0.0;
  for (const auto& [perm, c] : counts) {
    double d = c - expected;
    stat += d * d / expected;
  }
  boost::math::chi_squared dist(23);
  double p = 1.0 - boost::math::cdf(dist, stat);
  CHECK(p > 0.001);
}

TEST_CASE("short cycle counts: hand-checked instances") {
  // Single fixed point: one loop, one cycle of length 1.
  auto loop = schreier_graph(PermHom::from_generators({{0}}));
  CHECK(count_short_cycles(loop, 3) == std::vector<std::uint64_t>{1, 0, 0});
  // A swap yields two parallel edges: one 2-cycle.
  auto swap2 = schreier_graph(PermHom::from_generators({{1, 0}}));
  CHECK(count_short_cycles(swap2, 3) == std::vector<std::uint64_t>{0, 1, 0});
  // A 3-cycle generator: one triangle.
  auto tri = schreier_graph(PermHom::from_generators({{1, 2, 0}}));
  CHECK(count_short_cycles(tri, 4) == std::vector<std::uint64_t>{0, 0, 1, 0});
}

TEST_CASE("short cycle counts match the edge-subset oracle") {
  RngStream rng(19);
  for (int trial = 0; trial < 20; ++trial) {
    PermHom sigma = sample_perm_hom(2, 5, rng);
    MultiGraph g = schreier_graph(sigma);
    CHECK(count_short_cycles(g, 5) == brute_cycles(g, 5));
  }
  for (int trial = 0; trial < 10; ++trial) {
    MultiGraph g = sample_config_graph(3, 4, rng);
    CHECK(count_short_cycles(g, 4) == brute_cycles(g, 4));
  }
}

TEST_CASE("sofic report") {
  auto window = ball(1, 2);
  // Identity homomorphism fixes everything: not trace preserving.
  auto id4 = PermHom::from_generators({{0, 1, 2, 3}});
  auto bad = sofic_report(id4, window, 0.1);
  CHECK_FALSE(bad.trace_preserving);
  CHECK(bad.fixed_fractions.at(Word(1, {1})) == 1.0);
  // A 5-cycle moves every vertex under a, a^-1, a^2, a^-2.
  auto cyc5 = PermHom::from_generators({{1, 2, 3, 4, 0}});
  auto good = sofic_report(cyc5, window, 0.1);
  CHECK(good.trace_preserving);
  CHECK(good.multiplicative);
  CHECK(good.fixed_fractions.at(Word(1, {1})) == 0.0);
}

TEST_CASE("edit distance") {
  auto a = PermHom::from_generators({{1, 2, 3, 0}});
  std::vector<Word> words{Word(1, {1})};
  CHECK(edit_distance(a, a, words) == 0.0);
  auto b = PermHom::from_generators({{1, 2, 0, 3}});  // differs on vertices 2,3
  CHECK(edit_distance(a, b, words) == 0.5);
  CHECK_THROWS_AS(edit_distance(a, PermHom::from_generators({{0, 1}}), words),
                  std::invalid_argument);
}

TEST_CASE("product with trivial copies") {
  auto sigma = PermHom::from_generators({{1, 0, 2}, {2, 1, 0}});
  auto prod = product_with_trivial(sigma, 3);
  CHECK(prod.n == 9);
  for (int c = 0; c < 3; ++c) {
    for (int v = 0; v < 3; ++v) {
      for (int i = 0; i < 2; ++i) {
        CHECK(prod.gens[static_cast<std::size_t>(i)][static_cast<std::size_t>(c * 3 + v)] ==
              sigma.gens[static_cast<std::size_t>(i)][static_cast<std::size_t>(v)] + c * 3);
      }
    }
  }
  // Copies contribute the same local statistics: fixed fractions agree.
  auto window = ball(2, 2);
  auto base_report = sofic_report(sigma, window, 0.1);
  auto prod_report = sofic_report(prod, window, 0.1);
  for (const auto& [w, frac] : base_report.fixed_fractions) {
    CHECK(prod_report.fixed_fractions.at(w) == doctest::Approx(frac).epsilon(1e-12));
  }
}

TEST_CASE("json round trip") {
  RngStream rng(23);
  PermHom sigma = sample_perm_hom(3, 7, rng);
  PermHom back = permhom_from_json(permhom_to_json(sigma));
  CHECK(back.n == sigma.n);
  CHECK(back.gens == sigma.gens);
  CHECK(back.inv_gens == sigma.inv_gens);
}

TEST_CASE("determinism under fixed seeds") {
  RngStream a(99), b(99);
  PermHom x = sample_perm_hom(2, 12, a);
  PermHom y = sample_perm_hom(2, 12, b);
  CHECK(x.gens == y.gens);
  RngStream c = RngStream::derived(5, 1), d = RngStream::derived(5, 2);
  CHECK(sample_perm_hom(2, 12, c).gens != sample_perm_hom(2, 12, d).gens);
}
