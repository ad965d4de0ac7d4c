// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <optional>

#include "sfm/greedy.hpp"
#include "sfm/lpengine.hpp"
#include "sfm/setsfm.hpp"

namespace sfm {

struct TightChain {
  std::vector<LatticeTuple> tuples;  // weakly increasing, tuples[0] = 0_{M^n}
  int jump_bound = 2;                // max Bottom->Top coordinates per step
};

int segment_jump(const LatticeTuple& a, const LatticeTuple& b);  // #(0 -> 1) coords

struct SeparationResult {
  bool member = false;
  std::optional<LatticeTuple> tuple;       // violated tuple
  std::optional<AtomPairSelector> selector;
};

// Lemma poly-verify: membership of x in P_M(f) checked segment by segment
// along a chain of x-tight tuples (the last tuple need not be tight).
// Oracle-efficient: (k+2)^jump * set-SFM per segment.
SeparationResult chain_separate(const PVector& x, const OracleFunction& f,
                                const TightChain& chain,
                                SetBackend backend = SetBackend::exhaustive);

struct Direction {
  QVec z;
  int value = 0;  // 0 = x optimal, 1 = improving direction found
};

// counters and in-loop assertions surfaced to tests and reports
struct PipelineStats {
  std::ostream* trace = nullptr;   // per-iteration vertex/chain dumps
  long long decisions = 0;
  long long improve_steps = 0;
  long long direction_lps = 0;
  int max_gap_jump = 0;            // largest Bottom->Top gap seen in T'
  bool progress_ok = true;         // every accepted step gained >= 1/2
  long long ellipsoid_fallbacks = 0;
};

// A vertex of P_M(f_strict) together with its complete tight set (a chain).
struct VertexState {
  PVector x;
  std::vector<LatticeTuple> tight;
};

// selector cuts discovered by earlier direction LPs, revalidated against the
// current vertex before reuse
struct DirectionCache {
  std::vector<std::pair<LatticeTuple, QVec>> rows;
};

// eq. (increasing): max <c,z> s.t. <e,z> <= 0 for all tight selectors e,
// <c,z> <= 1. Optimum is 0 or 1; on 1 the returned z is a vertex optimum.
Direction improving_direction(const VertexState& v, const OracleFunction& f_strict,
                              const QVec& c, PipelineStats* stats = nullptr,
                              DirectionCache* cache = nullptr);

// Lemma opt-tight-chain: maximize <c,y> over the face of P_M(f) where every
// tuple of face_tuples keeps x's maximizing selectors tight (narrowed to the
// z-maximal ones when z is given); returns a vertex of that face.
PVector face_optimize(const QVec& c, const PVector& x, const OracleFunction& f,
                      const std::vector<LatticeTuple>& face_tuples,
                      const QVec* z = nullptr,
                      SetBackend backend = SetBackend::exhaustive);

// Lemma find-better: one strict improvement step (or the optimal verdict).
std::optional<VertexState> improve_vertex(const VertexState& v,
                                          const OracleFunction& f_strict, const QVec& c,
                                          PipelineStats* stats = nullptr,
                                          DirectionCache* cache = nullptr);

// greedy start + improve_vertex loop; exact maximum of <c, y> over
// P_M(f_strict) for integral c >= 0, f_strict strictly submodular, f(0) = 0
LpOptimal optimize_vertex_strict(const OracleFunction& f_strict, const QVec& c,
                                 PipelineStats* stats = nullptr);

struct MinimizeOptions {
  Engine engine = Engine::cuttingplane;
  bool emit_dual = false;               // dense (monotone closure) dual witness
  std::uint64_t dense_budget = kDefaultEnumBudget;
  PipelineStats* stats = nullptr;
};

// decision "min G >= theta" through the strictified zero-membership test
bool min_ge(const OracleFunction& g, long long theta, const MinimizeOptions& opt = {});

struct ZeroSep {
  bool inside = false;
  std::optional<LatticeTuple> violated;  // f(t) < 0
};

ZeroSep separate_zero(const OracleFunction& f, const MinimizeOptions& opt = {});

struct MinimizeResult {
  long long min = 0;
  LatticeTuple argmin;
  std::optional<PVector> dual;  // witness for the normalized function f - f(0)
};

MinimizeResult minimize(const OracleFunction& f, const MinimizeOptions& opt = {});

// max <c, y> over P_M(f) for integral c >= 0; separation solved by the
// minimization pipeline on f minus the query evaluation (Theorem sep-0).
std::pair<Rat, PVector> optimize_P(const QVec& c, const OracleFunction& f,
                                   const MinimizeOptions& opt = {});

}  // namespace sfm
