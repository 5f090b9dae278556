#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "sofic/empirical.hpp"
#include "sofic/freegroup.hpp"
#include "sofic/rng.hpp"
#include "sofic/sofic.hpp"

using namespace sofic;

namespace {

Labeling random_labeling(int n, int alphabet, RngStream& rng) {
  Labeling x;
  x.alphabet = alphabet;
  for (int v = 0; v < n; ++v) {
    x.values.push_back(static_cast<std::uint8_t>(rng.below(
        static_cast<std::uint64_t>(alphabet))));
  }
  return x;
}

// Brute-force model space scan over every labeling (oracle for the
// pruned DFS).
std::vector<Labeling> brute_microstates(const PermHom& sigma,
                                        const NeighborhoodSpec& spec,
                                        int alphabet) {
  std::vector<Labeling> out;
  std::uint64_t total = 1;
  for (int i = 0; i < sigma.n; ++i) total *= static_cast<std::uint64_t>(alphabet);
  for (std::uint64_t code = 0; code < total; ++code) {
    Labeling x;
    x.alphabet = alphabet;
    std::uint64_t c = code;
    for (int v = 0; v < sigma.n; ++v) {
      x.values.push_back(static_cast<std::uint8_t>(c % alphabet));
      c /= static_cast<std::uint64_t>(alphabet);
    }
    std::reverse(x.values.begin(), x.values.end());
    if (in_model_space(sigma, x, spec)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace

TEST_CASE("pullback pattern") {
  RngStream rng(31);
  PermHom sigma = sample_perm_hom(2, 8, rng);
  auto window = ball(2, 1);

  Labeling constant;
  constant.alphabet = 3;
  constant.values.assign(8, 2);
  for (int v = 0; v < 8; ++v) {
    CHECK(pullback_pattern(sigma, constant, v, window) == "22222");
  }

  Labeling x = random_labeling(8, 2, rng);
  std::vector<Word> just_e{Word::identity()};
  for (int v = 0; v < 8; ++v) {
    Pattern p = pullback_pattern(sigma, x, v, just_e);
    CHECK(p.size() == 1);
    CHECK(p[0] - '0' == x.values[static_cast<std::size_t>(v)]);
  }

  // Independent re-evaluation: pattern[g] = x(sigma(g)^{-1} v).
  for (int v = 0; v < 8; ++v) {
    Pattern p = pullback_pattern(sigma, x, v, window);
    for (std::size_t k = 0; k < window.size(); ++k) {
      int u = evaluate(sigma, window[k].inverse(), v);
      CHECK(p[k] - '0' == x.values[static_cast<std::size_t>(u)]);
    }
  }
}

TEST_CASE("windowed empirical measure") {
  RngStream rng(37);
  PermHom sigma = sample_perm_hom(2, 10, rng);
  auto window = ball(2, 1);

  Labeling constant;
  constant.alphabet = 2;
  constant.values.assign(10, 1);
  auto point = windowed_empirical(sigma, constant, window);
  REQUIRE(point.probs.size() == 1);
  CHECK(point.probs.begin()->second == Rational(1));

  // {e}-window frequencies.
  Labeling x = random_labeling(10, 2, rng);
  int ones = static_cast<int>(std::count(x.values.begin(), x.values.end(), 1));
  auto freq = windowed_empirical(sigma, x, {Word::identity()});
  CHECK(freq.probs["1"] == Rational(ones, 10));
  CHECK(freq.total_mass() == Rational(1));

  // Recount oracle.
  auto dist = windowed_empirical(sigma, x, window);
  std::map<Pattern, int> tally;
  for (int v = 0; v < 10; ++v) tally[pullback_pattern(sigma, x, v, window)] += 1;
  CHECK(dist.probs.size() == tally.size());
  for (const auto& [p, c] : tally) CHECK(dist.probs.at(p) == Rational(c, 10));
  CHECK(dist.total_mass() == Rational(1));
}

TEST_CASE("tv distance") {
  WindowDistribution p, q;
  p.window = q.window = {Word::identity()};
  p.probs = {{"0", Rational(1, 2)}, {"1", Rational(1, 2)}};
  q.probs = {{"0", Rational(1)}};
  CHECK(tv_distance(p, p) == Rational(0));
  CHECK(tv_distance(p, q) == Rational(1, 2));
  WindowDistribution disjoint;
  disjoint.window = p.window;
  disjoint.probs = {{"2", Rational(1)}};
  CHECK(tv_distance(p, disjoint) == Rational(1));
  WindowDistribution other_window;
  other_window.window = {Word::identity(), Word::generator(1)};
  CHECK_THROWS_AS(tv_distance(p, other_window), std::invalid_argument);
}

TEST_CASE("model space membership") {
  RngStream rng(41);
  PermHom sigma = sample_perm_hom(2, 6, rng);
  Labeling x = random_labeling(6, 2, rng);
  std::vector<Word> window{Word::identity()};

  NeighborhoodSpec everything = uniform_spec(window, 2, Rational(2));
  CHECK(in_model_space(sigma, x, everything));

  NeighborhoodSpec nothing = uniform_spec(window, 2, Rational(0));
  CHECK_FALSE(in_model_space(sigma, x, nothing));

  NeighborhoodSpec self;
  self.window = window;
  self.target = windowed_empirical(sigma, x, window);
  self.radius = Rational(1, 100);
  CHECK(in_model_space(sigma, x, self));

  // Monotone in radius.
  NeighborhoodSpec narrow = uniform_spec(window, 2, Rational(1, 10));
  NeighborhoodSpec wide = uniform_spec(window, 2, Rational(3, 10));
  for (int trial = 0; trial < 50; ++trial) {
    Labeling y = random_labeling(6, 2, rng);
    if (in_model_space(sigma, y, narrow)) CHECK(in_model_space(sigma, y, wide));
  }
}

TEST_CASE("microstate enumeration") {
  RngStream rng(43);
  PermHom sigma = sample_perm_hom(2, 3, rng);
  std::vector<Word> window{Word::identity()};

  auto everything = enumerate_microstates(sigma, uniform_spec(window, 2, Rational(2)), 2);
  CHECK(everything.states.size() == 8);
  CHECK(everything.complete);

  auto empty = enumerate_microstates(sigma, uniform_spec(window, 2, Rational(0)), 2);
  CHECK(empty.states.empty());

  // Bernoulli(1/2), {e}-window, delta=0.1, n=8: only 4-ones labelings.
  PermHom sigma8 = sample_perm_hom(2, 8, rng);
  auto bern = enumerate_microstates(
      sigma8, uniform_spec(window, 2, Rational(1, 10)), 2);
  CHECK(bern.states.size() == 70);
  for (const Labeling& x : bern.states) {
    CHECK(std::count(x.values.begin(), x.values.end(), 1) == 4);
  }

  // Budget truncation keeps the lexicographic prefix.
  auto truncated = enumerate_microstates(
      sigma8, uniform_spec(window, 2, Rational(1, 10)), 2, 10);
  CHECK(truncated.states.size() == 10);
  CHECK_FALSE(truncated.complete);
  for (std::size_t i = 0; i < truncated.states.size(); ++i) {
    CHECK(truncated.states[i] == bern.states[i]);
  }
}

TEST_CASE("microstate enumeration matches the brute scan, wider windows") {
  RngStream rng(47);
  auto window = ball(2, 1);
  for (int trial = 0; trial < 5; ++trial) {
    PermHom sigma = sample_perm_hom(2, 7, rng);
    Labeling target = random_labeling(7, 2, rng);
    NeighborhoodSpec spec;
    spec.window = window;
    spec.target = windowed_empirical(sigma, target, window);
    spec.radius = Rational(1, 3);
    auto fast = enumerate_microstates(sigma, spec, 2);
    auto slow = brute_microstates(sigma, spec, 2);
    REQUIRE(fast.states.size() == slow.size());
    CHECK(fast.states == slow);
  }
}

TEST_CASE("admissible pairs") {
  // Self-loop singleton.
  auto loop = schreier_graph(PermHom::from_generators({{0}}));
  Labeling one;
  one.alphabet = 2;
  one.values = {1};
  auto p1 = admissible_pair(loop, one);
  CHECK(p1.vert[1] == Rational(1));
  CHECK(p1.edge[1][1] == Rational(1));

  // Swap with labels (0,1).
  auto swap2 = schreier_graph(PermHom::from_generators({{1, 0}}));
  Labeling x01;
  x01.alphabet = 2;
  x01.values = {0, 1};
  auto p2 = admissible_pair(swap2, x01);
  CHECK(p2.vert[0] == Rational(1, 2));
  CHECK(p2.edge[0][1] == Rational(1, 2));
  CHECK(p2.edge[1][0] == Rational(1, 2));
  CHECK(p2.edge[0][0] == Rational(0));

  // Exact symmetry and marginals on random instances.
  RngStream rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    PermHom sigma = sample_perm_hom(2, 9, rng);
    MultiGraph g = schreier_graph(sigma);
    Labeling x = random_labeling(9, 3, rng);
    auto pair = admissible_pair(g, x);
    Rational vert_total = 0;
    for (int a = 0; a < 3; ++a) {
      vert_total += pair.vert[static_cast<std::size_t>(a)];
      Rational row = 0, col = 0;
      for (int b = 0; b < 3; ++b) {
        CHECK(pair.edge[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] ==
              pair.edge[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)]);
        row += pair.edge[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        col += pair.edge[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
      }
      CHECK(row == pair.vert[static_cast<std::size_t>(a)]);
      CHECK(col == pair.vert[static_cast<std::size_t>(a)]);
    }
    CHECK(vert_total == Rational(1));
  }
}

TEST_CASE("local maps") {
  RngStream rng(59);
  PermHom sigma = sample_perm_hom(2, 6, rng);
  Labeling x = random_labeling(6, 2, rng);

  // Projection at e is the identity.
  LocalMap proj;
  proj.window = {Word::identity()};
  proj.table = {{"0", 0}, {"1", 1}};
  CHECK(local_map_apply(sigma, proj, x) == x);

  // Constant map.
  LocalMap constant;
  constant.window = {Word::identity()};
  constant.table = {{"0", 1}, {"1", 1}};
  auto y = local_map_apply(sigma, constant, x);
  CHECK(std::all_of(y.values.begin(), y.values.end(),
                    [](std::uint8_t v) { return v == 1; }));

  // Majority over {e, a1, a1^-1} on a 3-cycle with x = (0,0,1).
  auto cyc = PermHom::from_generators({{1, 2, 0}});
  LocalMap majority;
  majority.window = {Word::identity(), Word(1, {1}), Word(1, {-1})};
  std::sort(majority.window.begin(), majority.window.end());
  for (int code = 0; code < 8; ++code) {
    Pattern p;
    int ones = 0;
    for (int b = 2; b >= 0; --b) {
      int bit = (code >> b) & 1;
      p.push_back(static_cast<char>('0' + bit));
      ones += bit;
    }
    majority.table[p] = ones >= 2 ? 1 : 0;
  }
  Labeling x3;
  x3.alphabet = 2;
  x3.values = {0, 0, 1};
  auto maj = local_map_apply(cyc, majority, x3);
  CHECK(maj.values == std::vector<std::uint8_t>{0, 0, 0});

  // Missing table entry.
  LocalMap partial;
  partial.window = {Word::identity()};
  partial.table = {{"0", 0}};
  Labeling has_one;
  has_one.alphabet = 2;
  has_one.values = {0, 1, 0, 0, 0, 0};
  CHECK_THROWS_AS(local_map_apply(sigma, partial, has_one), std::invalid_argument);
}

TEST_CASE("local maps commute with copy swaps") {
  RngStream rng(61);
  PermHom sigma = sample_perm_hom(2, 5, rng);
  PermHom doubled = product_with_trivial(sigma, 2);
  auto window = ball(2, 1);
  LocalMap phi;
  phi.window = window;
  for (int code = 0; code < 32; ++code) {
    Pattern p;
    for (int b = 4; b >= 0; --b) {
      p.push_back(static_cast<char>('0' + ((code >> b) & 1)));
    }
    phi.table[p] = static_cast<std::uint8_t>(code % 2);
  }
  Labeling x = random_labeling(10, 2, rng);
  // Swapping the two blocks commutes with every generator of `doubled`.
  auto swap_blocks = [](const Labeling& in) {
    Labeling out = in;
    for (int v = 0; v < 5; ++v) {
      std::swap(out.values[static_cast<std::size_t>(v)],
                out.values[static_cast<std::size_t>(v + 5)]);
    }
    return out;
  };
  auto lhs = local_map_apply(doubled, phi, swap_blocks(x));
  auto rhs = swap_blocks(local_map_apply(doubled, phi, x));
  CHECK(lhs == rhs);
}

TEST_CASE("entropy estimates") {
  RngStream rng(67);
  PermHom sigma = sample_perm_hom(2, 8, rng);
  std::vector<Word> window{Word::identity()};
  CHECK(entropy_estimate(sigma, uniform_spec(window, 2, Rational(2)), 2) ==
        doctest::Approx(std::log(2.0)).epsilon(1e-12));
  CHECK(entropy_estimate(sigma, uniform_spec(window, 2, Rational(1, 10)), 2) ==
        doctest::Approx(std::log(70.0) / 8).epsilon(1e-12));
  CHECK(entropy_estimate(sigma, uniform_spec(window, 2, Rational(0)), 2) ==
        -std::numeric_limits<double>::infinity());

  // Point-mass target, tiny radius: only the matching constant labeling.
  NeighborhoodSpec point;
  point.window = window;
  point.target.window = window;
  point.target.probs = {{"1", Rational(1)}};
  point.radius = Rational(1, 100);
  CHECK(entropy_estimate(sigma, point, 2) == doctest::Approx(0.0));
}
