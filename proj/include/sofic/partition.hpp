#pragma once

#include <vector>

#include "sofic/rational.hpp"

namespace sofic {

// Finite probability space: positive atom weights summing to 1.
struct WeightedSpace {
  std::vector<Rational> weights;

  Rational max_atom() const;
  void validate() const;  // throws unless weights positive and sum to 1
};

// Parts as atom-index lists; disjoint, covering, no empty part.
using Partition = std::vector<std::vector<int>>;

// Partition with every part P of weight <= 100*eps/delta and
// |E[f|P] - E[f]| <= delta. Requires delta in (0,1/4), eps < delta/200,
// every atom weight < eps, f values in [0,1]. Both output bounds are
// re-verified exactly before returning.
Partition balance_single(const WeightedSpace& space,
                         const std::vector<Rational>& f, const Rational& delta,
                         const Rational& eps);

// Iterated balancing for f_1..f_m: every part of weight
// <= eps*(100/delta)^m and |E[f_i|P] - E[f_i]| <= delta for every i,
// where eps is the max atom weight; requires eps < (delta/100)^m.
Partition balance_multi(const WeightedSpace& space,
                        const std::vector<std::vector<Rational>>& fs,
                        const Rational& delta);

// Exact conditional-mean deviation max_P |E[f|P] - E[f]|.
Rational mean_deviation(const WeightedSpace& space,
                        const std::vector<Rational>& f,
                        const Partition& partition);

Rational max_part_weight(const WeightedSpace& space, const Partition& partition);

}  // namespace sofic
