#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sofic/freegroup.hpp"
#include "sofic/rng.hpp"

namespace sofic {

// Homomorphism F_r -> Sym(n), stored as forward and inverse permutation
// tables per generator. Vertex ids are 0-based.
struct PermHom {
  int n = 0;
  int rank = 0;
  std::vector<std::vector<int>> gens;      // gens[i][v] = sigma(a_{i+1}) v
  std::vector<std::vector<int>> inv_gens;  // inverse tables

  static PermHom from_generators(std::vector<std::vector<int>> gens);
};

// Applies sigma(w) to vertex v (letters act right-to-left).
int evaluate(const PermHom& sigma, const Word& w, int v);

// d-regular multigraph on [n]. Self-loops and parallel edges are kept;
// a self-loop contributes 2 to the degree of its vertex.
struct MultiGraph {
  int n = 0;
  int degree = 0;
  std::vector<std::pair<int, int>> edges;  // instances, u <= v; loop = (v,v)
  std::vector<std::vector<int>> adj;       // neighbor multiset; loop listed twice

  static MultiGraph from_edges(int n, int degree,
                               std::vector<std::pair<int, int>> edges);
};

PermHom sample_perm_hom(int rank, int n, RngStream& rng);

// Uniform perfect matching on n*d half-edges. Throws on odd d*n.
MultiGraph sample_config_graph(int d, int n, RngStream& rng);

// 2r-regular graph with one edge {v, sigma(a_i) v} per (v, i).
MultiGraph schreier_graph(const PermHom& sigma);

struct SoficReport {
  std::map<Word, double> fixed_fractions;  // over D \ {e}
  bool trace_preserving = false;
  bool multiplicative = true;  // exact for homomorphisms
};

SoficReport sofic_report(const PermHom& sigma, const std::vector<Word>& window,
                         double delta);

// counts[k-1] = number of simple closed cycles of length k, 1 <= k <= max_len.
std::vector<std::uint64_t> count_short_cycles(const MultiGraph& g, int max_len);

// Fraction of vertices moved differently by some word in `words`.
double edit_distance(const PermHom& a, const PermHom& b,
                     const std::vector<Word>& words);

// Disjoint union of m copies of sigma (block-diagonal).
PermHom product_with_trivial(const PermHom& sigma, int copies);

std::string permhom_to_json(const PermHom& sigma);
PermHom permhom_from_json(const std::string& text);
std::string multigraph_to_json(const MultiGraph& g);

}  // namespace sofic
