// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "sfm/polytope.hpp"

namespace sfm {

struct GreedyResult {
  PVector vector;
  std::vector<int> top_atoms;            // p_1..p_n (atom indices)
  std::vector<LatticeTuple> tight_chain; // v_0, v_0[1=p_1], v_1, ..., v_n (2n+1 tuples)
};

// Lemma greedy-Bf construction. Requires f submodular (promise), f(0) >= 0.
// Integer entries; O(n k) oracle calls; result is in B_M(f) and unified.
GreedyResult greedy_base(const OracleFunction& f);

// apply(greedy(f).vector^-, 1_{M^n}); a lower bound on min f for normalized f
long long dual_lower_bound(const OracleFunction& f);

// Theorem Pf=Bf augmentation: z in P_M(f), z <= 0, unified -> y in B_M(f)
// with y >= z and apply(y^-, 1) >= apply(z, 1). Dense ratio tests.
PVector lift_to_base(const PVector& z, const OracleFunction& f,
                     std::uint64_t budget = kDefaultEnumBudget);

}  // namespace sfm
