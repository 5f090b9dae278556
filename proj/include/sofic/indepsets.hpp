#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sofic/rng.hpp"
#include "sofic/sofic.hpp"

namespace sofic {

// Subset of [n] as a bitmask (multi-word for n > 64).
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(int n);
  static VertexSet from_indices(int n, const std::vector<int>& indices);

  int n() const { return n_; }
  bool contains(int v) const;
  void insert(int v);
  void erase(int v);
  int count() const;
  std::vector<int> indices() const;

  int intersection_count(const VertexSet& other) const;
  // Symmetric-difference cardinality (Hamming distance of indicators).
  int symmetric_difference_count(const VertexSet& other) const;

  bool operator==(const VertexSet& other) const = default;
  auto operator<=>(const VertexSet& other) const = default;

 private:
  int n_ = 0;
  std::vector<std::uint64_t> words_;
};

// No edge inside W; a self-loop at v excludes v. Parallel edges count once.
bool is_independent(const MultiGraph& g, const VertexSet& w);

struct IndepEnumeration {
  std::vector<VertexSet> sets;
  bool complete = true;
};

// All independent sets with cardinality in [w_min, w_max]. Deterministic
// order (DFS over vertices in index order).
IndepEnumeration enumerate_indep(const MultiGraph& g, int w_min, int w_max,
                                 std::optional<std::uint64_t> budget = std::nullopt);

struct MaxIndep {
  int size = 0;
  VertexSet witness;
  double fraction = 0.0;
};

// Exact maximum independent set via branch and bound.
MaxIndep max_indep(const MultiGraph& g);

// Uniform over independent sets of cardinality exactly w (enumeration-backed).
VertexSet sample_uniform_indep(const MultiGraph& g, int w, RngStream& rng);

// Planted model: W uniform among w-subsets; each generator uniform among
// permutations with sigma(a_i)(W) disjoint from W.
std::pair<PermHom, VertexSet> sample_planted(int r, int n, int w, RngStream& rng);

struct OverlapSpectrum {
  std::map<int, std::uint64_t> counts;  // |W ∩ W'| -> number of W'
  bool complete = true;
  // Maximal runs of empty intersection sizes within [0, |W|].
  std::vector<std::pair<int, int>> gaps;
};

OverlapSpectrum overlap_spectrum(const MultiGraph& g, const VertexSet& w,
                                 int band_lo, int band_hi,
                                 std::optional<std::uint64_t> budget = std::nullopt);

struct ClusterReport {
  std::uint64_t size = 0;
  std::vector<VertexSet> members;
  double log_size_per_vertex = 0.0;  // -inf when empty
};

// Independent W' with | |W'|/n - s | <= eps and |W ∩ W'| >= (s/2) n.
ClusterReport cluster_of(const MultiGraph& g, const VertexSet& w, double s,
                         double eps);

struct GoodSetParams {
  double s = 0.0;
  double eps = 0.0;
  double b1 = 0.0;  // forbidden-overlap band, as fractions of n
  double b2 = 0.0;
  double gamma = 0.0;
  double f_rs = 0.0;
};

struct GoodSetReport {
  bool passes = false;
  bool gap_ok = false;      // no W' in the band with b1*n <= |W∩W'| <= b2*n
  bool cluster_ok = false;  // n^{-1} log #Cluster <= f_rs - gamma/2
  std::vector<std::string> reasons;
};

GoodSetReport good_set_filter(const PermHom& sigma, const VertexSet& w,
                              const GoodSetParams& params);

// Components of the strict-threshold relation d_Hamm(x,y)/n < kappa,
// transitively closed. Returns component index per input set.
std::vector<int> shatter_components(const std::vector<VertexSet>& sets,
                                    double kappa);

}  // namespace sofic
