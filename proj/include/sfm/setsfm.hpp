// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "sfm/rational.hpp"

namespace sfm {

using Subset = std::uint32_t;  // bitmask over a ground set of size <= 24

struct SetOracle {
  int ground_size = 0;
  std::function<Rat(Subset)> eval;

  Rat operator()(Subset s) const { return eval(s); }
  Subset full() const { return (Subset(1) << ground_size) - 1; }
};

enum class SetBackend { exhaustive, minnorm };

// Exact minimum value and a deterministic minimizer (exhaustive: first in
// mask order; minnorm: the minimal minimizer).
std::pair<Subset, Rat> min_set(const SetOracle& g, SetBackend backend);

// min over {Y : A subseteq Y subseteq B}, by contraction of the oracle
std::pair<Subset, Rat> min_over_interval(const SetOracle& g, Subset A, Subset B,
                                         SetBackend backend);

// every minimizer of g within [A, B], via recursive interval splitting
std::vector<Subset> all_minimizers(const SetOracle& g, Subset A, Subset B,
                                   SetBackend backend, std::uint64_t cap = 65536);

// Edmonds min-max self test: min g equals the negative part of the min-norm
// point of B(g); for |V| <= 6 additionally checks weak duality over all
// greedy orderings.
bool edmonds_check(const SetOracle& g);

// the min-norm point of the base polytope B(g - g(empty)); exposed for tests
QVec min_norm_point(const SetOracle& g);

}  // namespace sfm
