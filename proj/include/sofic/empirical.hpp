#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sofic/freegroup.hpp"
#include "sofic/rational.hpp"
#include "sofic/sofic.hpp"

namespace sofic {

// Vertex labeling x in X^V with a finite alphabet {0, ..., alphabet-1}.
struct Labeling {
  std::vector<std::uint8_t> values;
  int alphabet = 2;

  int n() const { return static_cast<int>(values.size()); }
  bool operator==(const Labeling&) const = default;
};

// Normalized Hamming distance as an exact rational (#differing / n).
Rational hamming_distance(const Labeling& a, const Labeling& b);

// Pattern over a window: one alphabet index per word, as characters
// '0' + index, in window order.
using Pattern = std::string;

// Distribution on X^D patterns with exact rational weights.
struct WindowDistribution {
  std::vector<Word> window;          // canonical (sorted) order
  std::map<Pattern, Rational> probs;  // zero-weight patterns omitted

  Rational total_mass() const;
};

// pattern[g] = x(sigma(g)^{-1} v)
Pattern pullback_pattern(const PermHom& sigma, const Labeling& x, int v,
                         const std::vector<Word>& window);

WindowDistribution windowed_empirical(const PermHom& sigma, const Labeling& x,
                                      const std::vector<Word>& window);

// Half the l1 distance over patterns. Throws on window mismatch.
Rational tv_distance(const WindowDistribution& p, const WindowDistribution& q);

// Computable stand-in for a weak* neighborhood: a TV ball of the given
// radius around `target`, read through `window`. Membership is strict,
// so radius > 1 acts as an "everything" sentinel and radius 0 is empty.
struct NeighborhoodSpec {
  std::vector<Word> window;
  WindowDistribution target;
  Rational radius;
};

// Uniform-over-patterns target (product of uniform letters).
NeighborhoodSpec uniform_spec(const std::vector<Word>& window, int alphabet,
                              const Rational& radius);

bool in_model_space(const PermHom& sigma, const Labeling& x,
                    const NeighborhoodSpec& spec);

struct MicrostateEnumeration {
  std::vector<Labeling> states;  // lexicographic order
  bool complete = true;          // false when the budget was exhausted
};

// All labelings in the model space, lexicographic, DFS with pattern-count
// pruning. `budget` bounds the number of returned states.
MicrostateEnumeration enumerate_microstates(
    const PermHom& sigma, const NeighborhoodSpec& spec, int alphabet,
    std::optional<std::uint64_t> budget = std::nullopt);

// (pi_vert, pi_edge): label law of a uniform vertex and label-pair law of
// a uniform oriented edge. Exact rationals; marginals match exactly.
struct AdmissiblePair {
  std::vector<Rational> vert;               // size |X|
  std::vector<std::vector<Rational>> edge;  // |X| x |X|, symmetric
};

AdmissiblePair admissible_pair(const MultiGraph& g, const Labeling& x);

// Local map phi: X^D -> Y applied vertexwise through pullback patterns.
struct LocalMap {
  std::vector<Word> window;
  std::map<Pattern, std::uint8_t> table;
  int out_alphabet = 2;
};

Labeling local_map_apply(const PermHom& sigma, const LocalMap& phi,
                         const Labeling& x);

// n^{-1} log #Omega(spec, sigma); -inf when empty.
double entropy_estimate(const PermHom& sigma, const NeighborhoodSpec& spec,
                        int alphabet,
                        std::optional<std::uint64_t> budget = std::nullopt);

}  // namespace sofic
