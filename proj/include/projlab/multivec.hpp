#pragma once

// Norms of simple r-vectors and of the induced maps on r-vectors.

#include <Eigen/Dense>

#include <cmath>
#include <vector>

#include "projlab/errors.hpp"

namespace projlab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// v_1 ^ ... ^ v_r stored as the r x n matrix D whose rows are the v_i.
class SimpleMultivector {
 public:
  explicit SimpleMultivector(const std::vector<Vector>& vectors) {
    detail::require(!vectors.empty(), "SimpleMultivector: need at least one vector");
    const auto n = vectors.front().size();
    detail::require(n >= 1, "SimpleMultivector: vectors must be non-empty");
    rows_.resize(static_cast<Eigen::Index>(vectors.size()), n);
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      detail::require(vectors[i].size() == n, "SimpleMultivector: vectors have different lengths");
      rows_.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
    }
    check_order();
  }

  static SimpleMultivector from_rows(Matrix rows) { return SimpleMultivector(std::move(rows)); }
  static SimpleMultivector from_columns(const Matrix& columns) {
    return SimpleMultivector(columns.transpose());
  }

  int order() const { return static_cast<int>(rows_.rows()); }
  int ambient_dim() const { return static_cast<int>(rows_.cols()); }
  const Matrix& rows() const { return rows_; }

 private:
  explicit SimpleMultivector(Matrix rows) : rows_(std::move(rows)) {
    detail::require(rows_.rows() >= 1 && rows_.cols() >= 1, "SimpleMultivector: empty input");
    check_order();
  }

  void check_order() const {
    detail::require(rows_.rows() <= rows_.cols(),
                    "SimpleMultivector: order r must not exceed the ambient dimension");
    detail::require(rows_.allFinite(), "SimpleMultivector: non-finite entries");
  }

  Matrix rows_;
};

namespace detail {

// Volume of the parallelepiped spanned by the columns of a tall matrix:
// |product of the diagonal of R| from a column-pivoted QR.
template <class Derived>
double column_volume(const Eigen::MatrixBase<Derived>& columns) {
  using Small = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, 16, 16>;
  if (columns.rows() <= 16 && columns.cols() <= 16) {
    Small a = columns;
    Eigen::ColPivHouseholderQR<Small> qr(a);
    return std::abs(qr.matrixQR().diagonal().prod());
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(columns.eval());
  return std::abs(qr.matrixQR().diagonal().prod());
}

}  // namespace detail

/// ||v_1 ^ ... ^ v_r|| = sqrt(det(D D^T)).
inline double gram_norm(const SimpleMultivector& v) {
  return detail::column_volume(v.rows().transpose());
}

/// Scale-aware zero test: dependent when the volume falls below
/// 1e-10 times the product of the vector lengths.
inline bool is_dependent(const SimpleMultivector& v, double relative_tol = 1e-10) {
  double scale = 1.0;
  for (Eigen::Index i = 0; i < v.rows().rows(); ++i) scale *= v.rows().row(i).norm();
  return gram_norm(v) <= relative_tol * scale;
}

namespace detail {

// Calls fn(indices) for every increasing r-subset of {0..n-1}.
template <class Fn>
void for_each_subset(int n, int r, Fn&& fn) {
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[static_cast<std::size_t>(i)] = i;
  for (;;) {
    fn(idx);
    int pos = r - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - r + pos) --pos;
    if (pos < 0) return;
    ++idx[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < r; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
}

}  // namespace detail

/// Cauchy-Binet: the square root of the sum of squares of all r x r minors
/// of D. Explicit enumeration; kept as an independent oracle for gram_norm.
inline double cauchy_binet_norm(const SimpleMultivector& v) {
  const Matrix& d = v.rows();
  const int r = v.order();
  const int n = v.ambient_dim();
  double sum = 0.0;
  Matrix minor(r, r);
  detail::for_each_subset(n, r, [&](const std::vector<int>& cols) {
    for (int c = 0; c < r; ++c) minor.col(c) = d.col(cols[static_cast<std::size_t>(c)]);
    const double det = minor.partialPivLu().determinant();
    sum += det * det;
  });
  return std::sqrt(sum);
}

/// ||^_r L|| over unit simple r-vectors: the product of the r largest
/// singular values of L.
inline double wedge_operator_norm(const Matrix& map, int r) {
  detail::require(map.allFinite(), "wedge_operator_norm: non-finite entries");
  detail::require(r >= 1 && r <= std::min(map.rows(), map.cols()),
                  "wedge_operator_norm: r must be in [1, min(rows, cols)]");
  const Eigen::VectorXd sigma = map.jacobiSvd().singularValues();  // descending
  double product = 1.0;
  for (int i = 0; i < r; ++i) product *= sigma[i];
  return product;
}

/// ^_r L (v_1 ^ ... ^ v_r) = L v_1 ^ ... ^ L v_r.
inline SimpleMultivector wedge_apply(const Matrix& map, const SimpleMultivector& v) {
  detail::require(map.cols() == v.ambient_dim(), "wedge_apply: dimension mismatch");
  return SimpleMultivector::from_rows(v.rows() * map.transpose());
}

/// Checks ||v ^ u|| = ||v|| ||u|| for lists v, u that are mutually
/// perpendicular. Throws PreconditionError when they are not.
inline bool perp_factor_check(const std::vector<Vector>& v, const std::vector<Vector>& u,
                              double orth_tol = 1e-9, double rel_tol = 1e-9) {
  for (const auto& a : v) {
    for (const auto& b : u) {
      detail::require(a.size() == b.size(), "perp_factor_check: dimension mismatch");
      if (std::abs(a.dot(b)) > orth_tol * a.norm() * b.norm())
        throw PreconditionError("perp_factor_check: the two lists are not perpendicular");
    }
  }
  std::vector<Vector> joined = v;
  joined.insert(joined.end(), u.begin(), u.end());
  const double lhs = gram_norm(SimpleMultivector(joined));
  const double rhs = gram_norm(SimpleMultivector(v)) * gram_norm(SimpleMultivector(u));
  return std::abs(lhs - rhs) <= rel_tol * (1.0 + rhs);
}

}  // namespace projlab
