#pragma once

#include <cstdint>
#include <vector>

#include "sofic/empirical.hpp"
#include "sofic/rational.hpp"
#include "sofic/rng.hpp"

namespace sofic {

// eta(x) = -x log x, with eta(0) = 0 by continuity. Natural log throughout.
double eta(double x);
double shannon(const std::vector<double>& p);

enum class GraphModel { kConfig, kPerm };

struct ExponentResult {
  double value = 0.0;
  AdmissiblePair maximizer;
  bool has_maximizer = false;
  double residual = 0.0;
};

// Perm model: r*H(pi_edge) - (2r-1)*H(pi_vert) with r = d/2 (d must be even).
// Config model: (d/2)*H(pi_edge) - (d-1)*H(pi_vert). The two coincide for
// d = 2r down to the last bit because they evaluate the same expression.
double first_moment_exponent(int d, const AdmissiblePair& pair, GraphModel model);

// eta(s) - (2r-1) eta(1-s) + r eta(1-2s), for 0 <= s < 1/2.
double f_single(int r, double s);

// Pair exponent at equal densities via the stationarity quadratic
// x^2 - (1-2t)x + (s-t)(1-2s) = 0, smaller root x <= s-t.
ExponentResult f_pair_closed(int r, double s, double t);

// Pair exponent by concave maximization over the admissible polytope for
// densities (s, s') and overlap t.
ExponentResult f_pair(int r, double s, double sp, double t);

struct AsymptoticF {
  double s = 0.0, t = 0.0;
  double f_s_approx = 0.0;
  double f_pair_approx = 0.0;
};

// Leading-order forms at s = bs*log(2r)/r, t = bt*log(2r)/r:
// f_s ~ eta(s) - r s^2, f_pair ~ eta(t) + 2 eta(s-t) + r(t^2 - 2 s^2).
AsymptoticF asymptotic_f(int r, double bs, double bt);

struct ClusterDrop {
  double value = 0.0;
  bool in_domain = true;  // false when bs outside (2/3, 1)
};

// bs(1-bs) log^2(r)/r.
ClusterDrop cluster_exponent_drop(int r, double bs);

// E^perm[#independent w-subsets] = C(n,w) * [ (n-w)!^2 / ((n-2w)! n!) ]^r,
// exact. Returns 0 when 2w > n.
Rational exact_expected_count_indep(int r, long long n, long long w);

// log of the same expectation via lgamma, usable for large n.
double log_expected_count_indep(int r, long long n, long long w);

struct McEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

McEstimate mc_expected_count(int r, int n, int w, std::uint64_t samples,
                             RngStream& rng);

}  // namespace sofic
