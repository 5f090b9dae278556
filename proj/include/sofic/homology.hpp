#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sofic/empirical.hpp"
#include "sofic/rational.hpp"
#include "sofic/rng.hpp"

namespace sofic {

// Oriented simplex in canonical form: strictly increasing vertex ids.
using Simplex = std::vector<int>;

// Sparse chain with exact rational coefficients; canonical-simplex keys,
// no zero coefficients stored.
struct Chain {
  std::map<Simplex, Rational> terms;

  void add(const Simplex& s, const Rational& coeff);
  // Canonicalizes an arbitrary vertex tuple: sorts with sign, drops
  // degenerate (repeated-vertex) simplices.
  void add_oriented(std::vector<int> vertices, Rational coeff);
  bool is_zero() const { return terms.empty(); }
  std::size_t length() const { return terms.size(); }
  bool operator==(const Chain&) const = default;
};

Chain operator+(const Chain& a, const Chain& b);
Chain operator-(const Chain& a, const Chain& b);

Chain boundary(const Chain& c);

struct TwoScaleComplex {
  std::vector<Labeling> points;   // the outer vertex set Omega2
  std::vector<int> inner;         // indices of Omega1 members within points
  Rational kappa1, kappa2;
  int d_max = 0;
  // simplices per dimension (index d), canonical order.
  std::vector<std::vector<Simplex>> inner_simplices;
  std::vector<std::vector<Simplex>> outer_simplices;
};

enum class Scale { kInner, kOuter };

// Threshold-clique complexes at both scales, dimensions 0..d_max+1.
// Distances are exact normalized Hamming; simplex admission is strict.
TwoScaleComplex build_complex(const std::vector<Labeling>& omega1,
                              const std::vector<Labeling>& omega2,
                              const Rational& kappa1, const Rational& kappa2,
                              int d_max);

// Columns indexed by d-simplices at the scale, rows by (d-1)-simplices.
std::vector<std::vector<Rational>> boundary_matrix(const TwoScaleComplex& cx,
                                                   int d, Scale scale);

struct Betti0 {
  int rank = 0;
  std::vector<int> component_reps;  // least-index inner point per component
};

// Number of kappa2-path components of Omega2 that contain an Omega1 point.
Betti0 betti0_two_scale(const TwoScaleComplex& cx);

struct HomologyRank {
  int dim = 0;
  std::vector<Chain> generators;
};

inline constexpr std::uint64_t kLSearchGuard = 20;

// dim_Q of Z^L_d(inner) / (Z^L_d(inner) ∩ B_d(outer)). L absent means no
// length truncation. Finite L with more than kLSearchGuard inner
// d-simplices is refused.
HomologyRank homology_rank(const TwoScaleComplex& cx, int d,
                           std::optional<int> L = std::nullopt);

// Symmetrized prism chain P(z) for a vertex map lambda (by point id);
// satisfies boundary(P(z)) = lambda_*(z) - z - P(boundary(z)) exactly.
Chain prism_homotopy(const Chain& z,
                     const std::function<int(int)>& lambda);

// Pushforward of a chain along a vertex map.
Chain chain_map(const Chain& z, const std::function<int(int)>& lambda);

// Greedy covering number of the inner points at radius kappa1.
int greedy_cover_count(const TwoScaleComplex& cx);

// n^{-1} log dim_Q H; -inf when the rank is 0.
double betti_growth_estimate(const TwoScaleComplex& cx, int d,
                             std::optional<int> L = std::nullopt);

// Interpolation paths x_i^{(j)} = zeta(x_i, j/k | tau, z) with one shared
// draw of thresholds tau and targets z ~ base. paths[i][j].
std::vector<std::vector<Labeling>> bernoulli_contract_path(
    const std::vector<Labeling>& xs, int k, const std::vector<double>& base,
    RngStream& rng);

// Diffuse merge: step j overwrites parts 0..j-1 with x_ref.
std::vector<std::vector<Labeling>> diffuse_contract_path(
    const std::vector<std::vector<int>>& parts, const std::vector<Labeling>& xs,
    const Labeling& x_ref);

struct ContractibilityReport {
  // conds[c] for conditions 1..5 at index c-1.
  bool conds[5] = {false, false, false, false, false};
  bool all_pass = false;
  std::string first_violation;  // empty when all pass
};

ContractibilityReport contractibility_check(
    const std::vector<std::vector<Labeling>>& paths,
    const std::vector<Labeling>& originals, const PermHom& sigma,
    const NeighborhoodSpec& outer, const Rational& delta);

}  // namespace sofic
