#pragma once

// Independent reference computations used by the verify suite and tests.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/multivec.hpp"

namespace projlab::oracle {

/// Dot-filling picture on an m x (n-m) board: fill the l lowest rows, then
/// place the remaining dots column by column in the other rows. Returns the
/// number of columns left without a dot in those rows.
inline int dot_filling_p(int n, int m, int k, int l) {
  const int rows = m;
  const int cols = n - m;
  std::vector<std::vector<bool>> board(static_cast<std::size_t>(rows), std::vector<bool>(static_cast<std::size_t>(cols)));
  int left = k;
  for (int r = 0; r < l && left > 0; ++r)
    for (int c = 0; c < cols && left > 0; ++c, --left) board[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = true;
  for (int c = 0; c < cols && left > 0; ++c)
    for (int r = l; r < rows && left > 0; ++r, --left) board[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] = true;
  int empty = 0;
  for (int c = 0; c < cols; ++c) {
    bool hit = false;
    for (int r = l; r < rows; ++r) hit = hit || board[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    if (!hit) ++empty;
  }
  return empty;
}

/// Central difference of a vector-valued function of one real variable.
inline Vector central_difference(const std::function<Vector(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Leibniz expansion of det over all permutations; small matrices only.
inline double leibniz_det(const Matrix& a) {
  const auto n = static_cast<int>(a.rows());
  if (a.rows() != a.cols()) throw InputError("leibniz_det: matrix must be square");
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  double total = 0.0;
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) inversions += perm[static_cast<std::size_t>(i)] > perm[static_cast<std::size_t>(j)];
    double term = inversions % 2 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) term *= a(i, perm[static_cast<std::size_t>(i)]);
    total += term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

}  // namespace projlab::oracle
