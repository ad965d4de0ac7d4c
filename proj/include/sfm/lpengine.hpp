// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "sfm/linalg.hpp"
#include "sfm/rational.hpp"

namespace sfm {

// a . x <= b  (rel 'L')  or  a . x = b  (rel 'E')
struct Row {
  QVec a;
  char rel = 'L';
  Rat b;
};

struct LinearSystem {
  int dim = 0;
  std::vector<Row> rows;
};

struct LpOptimal {
  QVec point;
  Rat value;
};
struct LpInfeasible {
  QVec farkas;  // y >= 0 combining the rows into a contradiction
};
struct LpUnbounded {
  QVec ray;  // feasible direction with positive objective
};
using LpResult = std::variant<LpOptimal, LpInfeasible, LpUnbounded>;

// Exact two-phase primal simplex with Bland's rule; maximizes.
LpResult solve_lp_dense(const LinearSystem& sys, const QVec& objective);

std::optional<QVec> feasibility(const LinearSystem& sys);

// All vertices of the system clipped to the box [-R, R]^dim; vertices tight
// on a box plane are discarded (callers choose R so real vertices are inside).
std::vector<QVec> vertices_dense(const LinearSystem& sys, const Rat& box_radius);

// ---- oracle-driven LP ----------------------------------------------------

// Returns a valid violated row for the query point, or nullopt if feasible.
using PointSeparator = std::function<std::optional<Row>(const QVec&)>;
// Same for recession directions: a valid row with a . r > 0, or nullopt if r
// is a genuine recession ray of the target region.
using RaySeparator = std::function<std::optional<Row>(const QVec&)>;

struct OracleLp {
  int dim = 0;
  std::vector<Row> pool;  // grows; every row must be valid for the region
  PointSeparator separate_point;
  RaySeparator separate_ray;
};

struct OracleLpOutcome {
  bool unbounded = false;
  QVec point;  // optimum, or the certified recession ray when unbounded
  Rat value;
};

// Kelley cutting plane: repeatedly solve the pool relaxation and cut.
// The region must be nonempty (pool rows are valid, so relaxations stay
// feasible). Deterministic.
OracleLpOutcome oracle_lp_maximize(OracleLp& lp, const QVec& objective);

// Starting from an optimal point, pin down a vertex of the region that is
// optimal for the objective (lexicographic re-optimization over coordinates).
// tight_rows_out receives pool rows tight at the vertex (rank == dim).
QVec oracle_lp_vertexify(OracleLp& lp, const QVec& objective, const QVec& start,
                         std::vector<Row>* tight_rows_out = nullptr);

// ---- engine front end ----------------------------------------------------

enum class Engine { cuttingplane, ellipsoid };

struct SepVerdict {
  bool inside = false;
  std::optional<Row> cut;
};
using SeparationOracle = std::function<SepVerdict(const QVec&)>;

struct OptimizeOutcome {
  bool empty = false;
  QVec point;
  Rat value;
};

// Maximize objective over {x : separation accepts} intersected with the box
// [-R, R]^dim. Cutting-plane is exact; the ellipsoid engine works in
// high-precision floating point and returns the best exactly-verified point
// (callers round onto their solution grid and re-verify).
OptimizeOutcome oracle_optimize(const SeparationOracle& sep, const QVec& objective,
                                const Rat& box_radius, Engine engine, int dim);

QVec round_to_half_grid(const QVec& x);

// Exact maximization oracle: objective -> maximizer (vertex) and value.
// The shapes used here (P_M-style regions with nonpositive characteristic
// cone, queried with objectives >= 0) are never empty or unbounded.
using OptimizationOracle = std::function<LpOptimal(const QVec& objective)>;

struct MembershipVerdict {
  bool inside = false;
  std::optional<QVec> separator;  // c >= 0 with max over the region < 0
  LpOptimal last;                 // the optimizer for the separating objective
};

// Membership of the point 0 via the optimization oracle (polar Kelley loop):
// 0 is in the region iff max <c, x> >= 0 for every c in [0,1]^dim.
MembershipVerdict membership_from_optimization(const OptimizationOracle& opt, int dim);

}  // namespace sfm
