// SPDX-License-Identifier: Apache-2.0
#include "sfm/linalg.hpp"

namespace sfm {

std::optional<QVec> gaussian_solve(QMat A, QVec b) {
  const size_t rows = A.size();
  if (b.size() != rows) throw Error("gaussian_solve: shape mismatch");
  const size_t cols = rows ? A[0].size() : 0;
  std::vector<size_t> pivot_col;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    std::swap(b[p], b[r]);
    const Rat inv = A[r][c];
    for (size_t j = c; j < cols; ++j) A[r][j] /= inv;
    b[r] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      const Rat m = A[i][c];
      for (size_t j = c; j < cols; ++j) A[i][j] -= m * A[r][j];
      b[i] -= m * b[r];
    }
    pivot_col.push_back(c);
    ++r;
  }
  for (size_t i = r; i < rows; ++i)
    if (b[i] != 0) return std::nullopt;
  QVec x(cols, Rat(0));
  for (size_t i = 0; i < r; ++i) x[pivot_col[i]] = b[i];
  return x;
}

int matrix_rank(QMat A) {
  const size_t rows = A.size();
  const size_t cols = rows ? A[0].size() : 0;
  int rank = 0;
  size_t r = 0;
  for (size_t c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && A[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(A[p], A[r]);
    for (size_t i = r + 1; i < rows; ++i) {
      if (A[i][c] == 0) continue;
      const Rat m = A[i][c] / A[r][c];
      for (size_t j = c; j < cols; ++j) A[i][j] -= m * A[r][j];
    }
    ++r;
    ++rank;
  }
  return rank;
}

std::optional<QVec> nullspace_vector(QMat M, int cols) {
  const size_t rows = M.size();
  std::vector<int> pivot_of_col(static_cast<size_t>(cols), -1);
  size_t r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    size_t p = r;
    while (p < rows && M[p][static_cast<size_t>(c)] == 0) ++p;
    if (p == rows) continue;
    std::swap(M[p], M[r]);
    const Rat inv = M[r][static_cast<size_t>(c)];
    for (int j = c; j < cols; ++j) M[r][static_cast<size_t>(j)] /= inv;
    for (size_t i = 0; i < rows; ++i) {
      if (i == r || M[i][static_cast<size_t>(c)] == 0) continue;
      const Rat m = M[i][static_cast<size_t>(c)];
      for (int j = c; j < cols; ++j) M[i][static_cast<size_t>(j)] -= m * M[r][static_cast<size_t>(j)];
    }
    pivot_of_col[static_cast<size_t>(c)] = static_cast<int>(r);
    ++r;
  }
  int free_col = -1;
  for (int c = 0; c < cols; ++c)
    if (pivot_of_col[static_cast<size_t>(c)] < 0) {
      free_col = c;
      break;
    }
  if (free_col < 0) return std::nullopt;
  QVec w(static_cast<size_t>(cols), Rat(0));
  w[static_cast<size_t>(free_col)] = 1;
  for (int c = 0; c < cols; ++c) {
    const int pr = pivot_of_col[static_cast<size_t>(c)];
    if (pr >= 0) w[static_cast<size_t>(c)] = -M[static_cast<size_t>(pr)][static_cast<size_t>(free_col)];
  }
  return w;
}

}  // namespace sfm
