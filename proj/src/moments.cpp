#include "sofic/moments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sofic/sofic.hpp"

namespace sofic {

double eta(double x) {
  if (x < 0.0 || x > 1.0) {
    throw std::domain_error("eta: argument outside [0,1]");
  }
  if (x == 0.0) return 0.0;
  return -x * std::log(x);
}

double shannon(const std::vector<double>& p) {
  double h = 0.0;
  for (double x : p) h += eta(x);
  return h;
}

namespace {

double shannon_rational(const std::vector<Rational>& p) {
  double h = 0.0;
  for (const Rational& x : p) h += eta(to_double(x));
  return h;
}

double shannon_rational(const std::vector<std::vector<Rational>>& p) {
  double h = 0.0;
  for (const auto& row : p) h += shannon_rational(row);
  return h;
}

// -a log(b), with the eta(0)=0 convention when a vanishes.
double neg_a_log_b(double a, double b) {
  if (a <= 0.0) return 0.0;
  return -a * std::log(b);
}

}  // namespace

double first_moment_exponent(int d, const AdmissiblePair& pair,
                             GraphModel model) {
  if (model == GraphModel::kPerm && d % 2 != 0) {
    throw std::invalid_argument(
        "first_moment_exponent: perm model requires even degree d = 2r");
  }
  double h_vert = shannon_rational(pair.vert);
  double h_edge = shannon_rational(pair.edge);
  // Single expression for both models: for d = 2r the coefficients
  // (d/2, d-1) equal (r, 2r-1), so the values agree bit-for-bit.
  return 0.5 * d * h_edge - (d - 1) * h_vert;
}

double f_single(int r, double s) {
  if (s < 0.0 || s >= 0.5) {
    throw std::domain_error("f_single: s must lie in [0, 1/2)");
  }
  return eta(s) - (2 * r - 1) * eta(1.0 - s) + r * eta(1.0 - 2.0 * s);
}

namespace {

// Pair-of-independent-sets statistics on the alphabet {0,1}^2, encoded
// 0=00, 1=01, 2=10, 3=11 (first bit: membership in W, second: W').
// Ordered edge types with support constraint a1*b1 = a2*b2 = 0:
//   (00,00)=w1, (00,01)=(01,00)=b, (00,10)=(10,00)=c,
//   (00,11)=(11,00)=t, (01,10)=(10,01)=e.
AdmissiblePair pair_from_params(double s, double sp, double t, double e) {
  double b = sp - t - e;
  double c = s - t - e;
  double w1 = 1.0 - 2.0 * s - 2.0 * sp + 2.0 * t + 2.0 * e;
  AdmissiblePair pair;
  auto rat = [](double v) { return Rational(std::max(v, 0.0)); };
  pair.vert = {rat(1.0 - s - sp + t), rat(sp - t), rat(s - t), rat(t)};
  pair.edge.assign(4, std::vector<Rational>(4, Rational(0)));
  pair.edge[0][0] = rat(w1);
  pair.edge[0][1] = pair.edge[1][0] = rat(b);
  pair.edge[0][2] = pair.edge[2][0] = rat(c);
  pair.edge[0][3] = pair.edge[3][0] = rat(t);
  pair.edge[1][2] = pair.edge[2][1] = rat(e);
  return pair;
}

double pair_objective(int r, double s, double sp, double t, double e) {
  double h_vert =
      eta(t) + eta(s - t) + eta(sp - t) + eta(1.0 - s - sp + t);
  double h_edge = eta(std::max(1.0 - 2.0 * s - 2.0 * sp + 2.0 * t + 2.0 * e, 0.0)) +
                  2.0 * eta(std::max(sp - t - e, 0.0)) +
                  2.0 * eta(std::max(s - t - e, 0.0)) + 2.0 * eta(t) +
                  2.0 * eta(e);
  return r * h_edge - (2 * r - 1) * h_vert;
}

}  // namespace

ExponentResult f_pair_closed(int r, double s, double t) {
  if (!(0.0 <= t && t <= s && s < 0.5)) {
    throw std::domain_error("f_pair_closed: need 0 <= t <= s < 1/2");
  }
  double disc = (1.0 - 2.0 * t) * (1.0 - 2.0 * t) -
                4.0 * (s - t) * (1.0 - 2.0 * s);
  if (disc < 0.0) {
    throw std::domain_error("f_pair_closed: negative discriminant");
  }
  double x = 0.5 * ((1.0 - 2.0 * t) - std::sqrt(disc));
  double h_vert = eta(t) + 2.0 * eta(s - t) + eta(1.0 - 2.0 * s + t);
  double h_edge = 2.0 * eta(t) + 2.0 * neg_a_log_b(s - t, s - t - x) +
                  neg_a_log_b(1.0 - 2.0 * s, 1.0 - 2.0 * s - 2.0 * x);
  ExponentResult res;
  res.value = r * h_edge - (2 * r - 1) * h_vert;
  res.residual = std::abs((s - t - x) * (1.0 - 2.0 * s - 2.0 * x) - x * x);
  res.maximizer = pair_from_params(s, s, t, s - t - x);
  res.has_maximizer = true;
  return res;
}

ExponentResult f_pair(int r, double s, double sp, double t) {
  if (t < 0.0) throw std::domain_error("f_pair: violated bound t >= 0");
  if (t > std::min(s, sp) + 1e-15) {
    throw std::domain_error("f_pair: violated bound t <= min(s, s')");
  }
  if (s + sp - t > 1.0 + 1e-15) {
    throw std::domain_error("f_pair: violated bound s + s' - t <= 1");
  }
  t = std::min(t, std::min(s, sp));
  // One free edge variable e after eliminating the marginal constraints:
  // b = s'-t-e, c = s-t-e, w1 = 1-2s-2s'+2t+2e, all required nonnegative.
  double lo = std::max(0.0, s + sp - t - 0.5);
  double hi = std::min(s - t, sp - t);
  ExponentResult res;
  res.has_maximizer = true;
  if (hi - lo < 1e-15) {
    double e = std::clamp(hi, lo, hi);
    res.value = pair_objective(r, s, sp, t, e);
    res.maximizer = pair_from_params(s, sp, t, e);
    res.residual = 0.0;
    return res;
  }
  // The objective is strictly concave in e with derivative
  // 2r log(bc / (w1 e)), which is +inf at both lower-boundary
  // degeneracies and -inf as bc -> 0: bisect on its sign.
  auto deriv = [&](double e) {
    double b = sp - t - e;
    double c = s - t - e;
    double w1 = 1.0 - 2.0 * s - 2.0 * sp + 2.0 * t + 2.0 * e;
    return std::log(b * c) - std::log(w1 * e);
  };
  double a = lo, z = hi;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (a + z);
    if (deriv(mid) > 0.0) {
      a = mid;
    } else {
      z = mid;
    }
  }
  double e = 0.5 * (a + z);
  double b = sp - t - e;
  double c = s - t - e;
  double w1 = 1.0 - 2.0 * s - 2.0 * sp + 2.0 * t + 2.0 * e;
  res.value = pair_objective(r, s, sp, t, e);
  res.maximizer = pair_from_params(s, sp, t, e);
  res.residual = std::abs(b * c - w1 * e);
  return res;
}

AsymptoticF asymptotic_f(int r, double bs, double bt) {
  AsymptoticF out;
  double scale = std::log(2.0 * r) / r;
  out.s = bs * scale;
  out.t = bt * scale;
  out.f_s_approx = eta(out.s) - r * out.s * out.s;
  out.f_pair_approx = eta(out.t) + 2.0 * eta(out.s - out.t) +
                      r * (out.t * out.t - 2.0 * out.s * out.s);
  return out;
}

ClusterDrop cluster_exponent_drop(int r, double bs) {
  ClusterDrop drop;
  double logr = std::log(static_cast<double>(r));
  drop.value = bs * (1.0 - bs) * logr * logr / r;
  drop.in_domain = bs > 2.0 / 3.0 && bs < 1.0;
  return drop;
}

namespace {

Integer falling_factorial(long long from, long long count) {
  Integer prod = 1;
  for (long long i = 0; i < count; ++i) prod *= Integer(from - i);
  return prod;
}

}  // namespace

Rational exact_expected_count_indep(int r, long long n, long long w) {
  if (w < 0 || n < 1) {
    throw std::invalid_argument("exact_expected_count_indep: bad arguments");
  }
  if (w == 0) return Rational(1);
  if (2 * w > n) return Rational(0);
  Integer binom = falling_factorial(n, w) / falling_factorial(w, w);
  // Per generator: P(sigma(a)(W) disjoint from W) = (n-w)!^2 / ((n-2w)! n!)
  //              = (n-w)_w / (n)_w  as a falling-factorial ratio.
  Rational per_gen(falling_factorial(n - w, w), falling_factorial(n, w));
  Rational result(binom);
  for (int i = 0; i < r; ++i) result *= per_gen;
  return result;
}

double log_expected_count_indep(int r, long long n, long long w) {
  if (w == 0) return 0.0;
  if (2 * w > n) {
    throw std::domain_error("log_expected_count_indep: zero expectation");
  }
  auto lf = [](long long k) { return std::lgamma(static_cast<double>(k) + 1.0); };
  double log_binom = lf(n) - lf(w) - lf(n - w);
  double log_per_gen = 2.0 * lf(n - w) - lf(n - 2 * w) - lf(n);
  return log_binom + r * log_per_gen;
}

namespace {

std::uint64_t count_indep_of_size(const std::vector<std::uint64_t>& nbr, int n,
                                  int w) {
  // DFS over vertices in order; forbidden tracks neighbors of chosen ones.
  std::uint64_t total = 0;
  struct Frame {
    int v;
    int chosen;
    std::uint64_t forbidden;
  };
  std::vector<Frame> stack{{0, 0, 0}};
  while (!stack.empty()) {
    auto [v, chosen, forbidden] = stack.back();
    stack.pop_back();
    if (chosen == w) {
      ++total;
      continue;
    }
    if (n - v < w - chosen) continue;
    if (v >= n) continue;
    stack.push_back({v + 1, chosen, forbidden});
    std::uint64_t bit = std::uint64_t{1} << v;
    if (!(forbidden & bit) && !(nbr[static_cast<std::size_t>(v)] & bit)) {
      stack.push_back({v + 1, chosen + 1,
                       forbidden | nbr[static_cast<std::size_t>(v)] | bit});
    }
  }
  return total;
}

}  // namespace

McEstimate mc_expected_count(int r, int n, int w, std::uint64_t samples,
                             RngStream& rng) {
  if (samples < 1) {
    throw std::invalid_argument("mc_expected_count: samples >= 1 required");
  }
  if (n > 64) {
    throw std::invalid_argument("mc_expected_count: n <= 64 required");
  }
  double sum = 0.0, sum_sq = 0.0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    PermHom sigma = sample_perm_hom(r, n, rng);
    std::vector<std::uint64_t> nbr(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < r; ++j) {
      for (int v = 0; v < n; ++v) {
        int u = sigma.gens[static_cast<std::size_t>(j)][static_cast<std::size_t>(v)];
        nbr[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;
        nbr[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
      }
    }
    double count = static_cast<double>(count_indep_of_size(nbr, n, w));
    sum += count;
    sum_sq += count * count;
  }
  McEstimate est;
  est.samples = samples;
  est.estimate = sum / static_cast<double>(samples);
  double variance =
      std::max(0.0, sum_sq / static_cast<double>(samples) -
                        est.estimate * est.estimate);
  est.stderr_ = std::sqrt(variance / static_cast<double>(samples));
  return est;
}

}  // namespace sofic
