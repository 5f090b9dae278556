#include "sofic/partition.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace sofic {

Rational WeightedSpace::max_atom() const {
  Rational best = 0;
  for (const Rational& w : weights) best = std::max(best, w);
  return best;
}

void WeightedSpace::validate() const {
  Rational total = 0;
  for (const Rational& w : weights) {
    if (w <= 0) throw std::invalid_argument("WeightedSpace: nonpositive atom weight");
    total += w;
  }
  if (total != 1) throw std::invalid_argument("WeightedSpace: weights must sum to 1");
}

namespace {

void check_partition_shape(const Partition& partition, std::size_t n_atoms) {
  std::vector<char> seen(n_atoms, 0);
  for (const auto& part : partition) {
    if (part.empty()) throw std::runtime_error("partition: empty part");
    for (int a : part) {
      if (a < 0 || static_cast<std::size_t>(a) >= n_atoms ||
          seen[static_cast<std::size_t>(a)]) {
        throw std::runtime_error("partition: not a partition of the atoms");
      }
      seen[static_cast<std::size_t>(a)] = 1;
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end()) {
    throw std::runtime_error("partition: atoms left uncovered");
  }
}

// Core sweep; `eps` must bound every atom weight and satisfy
// eps < delta/100. Steers the running global deviation sum(w*(f - mean))
// toward zero by consuming atoms from whichever end of the f-sorted
// order corrects its sign, closing a part once its weight reaches 1/m
// with m = floor(delta/(10 eps)); the final short remainder is merged
// into the last part. This keeps every part's deviation within 2*eps
// and its weight within 2/m + eps, comfortably inside the advertised
// bounds, which are still re-verified by the caller.
Partition sweep(const WeightedSpace& space, const std::vector<Rational>& f,
                const Rational& delta, const Rational& eps) {
  std::size_t n = space.weights.size();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return f[static_cast<std::size_t>(a)] < f[static_cast<std::size_t>(b)];
  });

  Rational mean = 0;
  for (std::size_t i = 0; i < n; ++i) mean += space.weights[i] * f[i];

  Rational ratio = delta / (10 * eps);
  Integer m_int = numerator(ratio) / denominator(ratio);
  if (m_int < 1) throw std::runtime_error("balance: degenerate block count");
  Rational block = Rational(1) / Rational(m_int);

  Partition parts;
  std::vector<int> current;
  Rational part_weight = 0;
  Rational global_dev = 0;  // sum over consumed atoms of w*(f - mean)

  std::size_t lo = 0, hi = n;  // remaining atoms are order[lo..hi)
  while (lo < hi) {
    int atom;
    if (global_dev <= 0) {
      atom = order[--hi];  // largest remaining f pushes the deviation up
    } else {
      atom = order[lo++];
    }
    current.push_back(atom);
    part_weight += space.weights[static_cast<std::size_t>(atom)];
    global_dev += space.weights[static_cast<std::size_t>(atom)] *
                  (f[static_cast<std::size_t>(atom)] - mean);
    if (part_weight >= block) {
      parts.push_back(std::move(current));
      current.clear();
      part_weight = 0;
    }
  }
  if (!current.empty()) {
    if (parts.empty()) {
      parts.push_back(std::move(current));
    } else {
      // Merge the short remainder so no part has a tiny weight with an
      // unpinned mean.
      parts.back().insert(parts.back().end(), current.begin(), current.end());
    }
  }
  return parts;
}

}  // namespace

Rational mean_deviation(const WeightedSpace& space,
                        const std::vector<Rational>& f,
                        const Partition& partition) {
  Rational mean = 0;
  for (std::size_t i = 0; i < space.weights.size(); ++i) {
    mean += space.weights[i] * f[i];
  }
  Rational worst = 0;
  for (const auto& part : partition) {
    Rational w = 0, s = 0;
    for (int a : part) {
      w += space.weights[static_cast<std::size_t>(a)];
      s += space.weights[static_cast<std::size_t>(a)] * f[static_cast<std::size_t>(a)];
    }
    Rational dev = s / w - mean;
    if (dev < 0) dev = -dev;
    worst = std::max(worst, dev);
  }
  return worst;
}

Rational max_part_weight(const WeightedSpace& space, const Partition& partition) {
  Rational worst = 0;
  for (const auto& part : partition) {
    Rational w = 0;
    for (int a : part) w += space.weights[static_cast<std::size_t>(a)];
    worst = std::max(worst, w);
  }
  return worst;
}

Partition balance_single(const WeightedSpace& space,
                         const std::vector<Rational>& f, const Rational& delta,
                         const Rational& eps) {
  space.validate();
  if (f.size() != space.weights.size()) {
    throw std::invalid_argument("balance_single: f size mismatch");
  }
  for (const Rational& v : f) {
    if (v < 0 || v > 1) {
      throw std::invalid_argument("balance_single: f values must lie in [0,1]");
    }
  }
  if (!(delta > 0 && delta < Rational(1, 4))) {
    throw std::invalid_argument("balance_single: need delta in (0, 1/4)");
  }
  if (!(eps < delta / 200)) {
    throw std::invalid_argument("balance_single: need eps < delta/200");
  }
  if (!(space.max_atom() < eps)) {
    throw std::invalid_argument("balance_single: need every atom weight < eps");
  }
  Partition parts = sweep(space, f, delta, eps);
  check_partition_shape(parts, space.weights.size());
  if (max_part_weight(space, parts) > 100 * eps / delta) {
    throw std::runtime_error("balance_single: part-weight bound violated");
  }
  if (mean_deviation(space, f, parts) > delta) {
    throw std::runtime_error("balance_single: conditional-mean bound violated");
  }
  return parts;
}

Partition balance_multi(const WeightedSpace& space,
                        const std::vector<std::vector<Rational>>& fs,
                        const Rational& delta) {
  space.validate();
  if (!(delta > 0 && delta < Rational(1, 4))) {
    throw std::invalid_argument("balance_multi: need delta in (0, 1/4)");
  }
  std::size_t m = fs.size();
  Rational eps = space.max_atom();
  Rational bound = 1;
  for (std::size_t i = 0; i < m; ++i) bound *= delta / 100;
  if (m > 0 && !(eps < bound)) {
    throw std::invalid_argument("balance_multi: need max atom weight < (delta/100)^m");
  }

  std::size_t n = space.weights.size();
  Partition current(n);
  for (std::size_t i = 0; i < n; ++i) current[i] = {static_cast<int>(i)};
  Rational level_eps = eps;

  for (std::size_t step = 0; step < m; ++step) {
    // Quotient space: atoms are the current parts, the function is the
    // conditional mean of fs[step] on each part.
    WeightedSpace quotient;
    std::vector<Rational> g;
    for (const auto& part : current) {
      Rational w = 0, s = 0;
      for (int a : part) {
        w += space.weights[static_cast<std::size_t>(a)];
        s += space.weights[static_cast<std::size_t>(a)] *
             fs[step][static_cast<std::size_t>(a)];
      }
      quotient.weights.push_back(w);
      g.push_back(s / w);
    }
    Partition coarse = sweep(quotient, g, delta, level_eps);
    Partition next;
    for (const auto& block : coarse) {
      std::vector<int> merged;
      for (int part_id : block) {
        const auto& part = current[static_cast<std::size_t>(part_id)];
        merged.insert(merged.end(), part.begin(), part.end());
      }
      next.push_back(std::move(merged));
    }
    current = std::move(next);
    level_eps *= Rational(100) / delta;
  }

  check_partition_shape(current, n);
  if (m > 0 && max_part_weight(space, current) > level_eps) {
    throw std::runtime_error("balance_multi: part-weight bound violated");
  }
  for (const auto& f : fs) {
    if (mean_deviation(space, f, current) > delta) {
      throw std::runtime_error("balance_multi: conditional-mean bound violated");
    }
  }
  return current;
}

}  // namespace sofic
