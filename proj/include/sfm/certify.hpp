// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "sfm/minimize.hpp"

namespace sfm {

// Theorem coNP proof object. claimed_min refers to the normalized function
// f - f(0); verify normalizes before checking.
struct Certificate {
  int version = 1;
  int n = 0;
  int k = 0;
  long long claimed_min = 0;
  LatticeTuple witness;
  std::vector<PVector> vectors;               // exactly n*k + 1
  std::vector<std::vector<LatticeTuple>> chains;  // per vector, exactly 2n tuples
  PVector dual;                               // c: integer, unified, <= 0
};

struct VerifyResult {
  bool accept = false;
  int failed_check = 0;  // 0 = structural, 1..5 = semantic check number
  std::string reason;
};

// The five ordered checks from the Theorem coNP verifier; lambda and y for
// eq. (syseq-verify) are recomputed, not shipped.
VerifyResult verify(const Certificate& cert, const OracleFunction& f);

// Desk-scale prover: dense vertex enumeration + Caratheodory decomposition
// of c = greedy_base(monotone_closure(normalize(f))).vector.
Certificate prove(const OracleFunction& f, std::uint64_t budget = kDefaultEnumBudget);

std::string serialize(const Certificate& cert);
Certificate deserialize(const std::string& bytes);  // throws Error (structural)

}  // namespace sfm
