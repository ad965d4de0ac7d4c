// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "sfm/rational.hpp"

namespace sfm {

using QMat = std::vector<QVec>;  // row-major

// Solve A x = b by Gaussian elimination with partial (first-nonzero) pivoting.
// Returns nullopt if no solution; for underdetermined systems returns one
// solution (free variables set to 0).
std::optional<QVec> gaussian_solve(QMat A, QVec b);

int matrix_rank(QMat A);

// A nonzero vector w with M w = 0, or nullopt if M has full column rank.
std::optional<QVec> nullspace_vector(QMat M, int cols);

}  // namespace sfm
