#pragma once

// Orthonormal frames, rotation charts on G(n, m), projections and their
// derivatives.
//
// Chart conventions: a Chart is an orthonormal basis e_0..e_{n-1} of R^n
// whose first m vectors span the base plane V and whose remaining n - m
// vectors span V^perp. Indices below are 0-based; the angle alpha(i, j - m)
// rotates e_i (i < m) towards e_j (j >= m). The rotations acting on e_i are
// applied with j ascending, e_i(alpha) = R^{i,n-1} ... R^{i,m} e_i.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/multivec.hpp"

namespace projlab {

inline constexpr double kChartLimit = std::numbers::pi / 4.0;

/// An m-plane of R^n stored through an orthonormal basis (the columns of
/// an n x m matrix). Also used for full-space bases (m = n) where a
/// subspace of a Euclidean space is needed as a whole.
class Frame {
 public:
  /// Columns must be orthonormal within tol.
  static Frame from_basis(Matrix basis, double tol = 1e-10) {
    detail::require(basis.cols() >= 1 && basis.cols() <= basis.rows(),
                    "Frame: need 1 <= plane_dim <= ambient_dim");
    detail::require(basis.allFinite(), "Frame: non-finite basis");
    const Matrix gram = basis.transpose() * basis;
    const double defect = (gram - Matrix::Identity(basis.cols(), basis.cols())).cwiseAbs().maxCoeff();
    detail::require(defect <= tol, "Frame: basis vectors are not orthonormal");
    return Frame(std::move(basis));
  }

  /// Orthonormalizes the columns in order (Gram-Schmidt semantics: the
  /// k-th basis vector lies in the span of the first k inputs).
  static Frame orthonormalize(const Matrix& spanning, double rank_tol = 1e-12) {
    detail::require(spanning.cols() >= 1 && spanning.cols() <= spanning.rows(),
                    "Frame: need 1 <= plane_dim <= ambient_dim");
    Matrix q = spanning;
    for (Eigen::Index c = 0; c < q.cols(); ++c) {
      const double original = q.col(c).norm();
      // Two passes of modified Gram-Schmidt.
      for (int pass = 0; pass < 2; ++pass)
        for (Eigen::Index p = 0; p < c; ++p) q.col(c) -= q.col(p).dot(q.col(c)) * q.col(p);
      const double norm = q.col(c).norm();
      detail::require(norm > rank_tol * std::max(1.0, original),
                      "Frame: spanning vectors are linearly dependent");
      q.col(c) /= norm;
    }
    return Frame(std::move(q));
  }

  static Frame standard(int n, int m) {
    detail::require(m >= 1 && m <= n, "Frame: need 1 <= m <= n");
    return Frame(Matrix::Identity(n, m));
  }

  int ambient_dim() const { return static_cast<int>(basis_.rows()); }
  int plane_dim() const { return static_cast<int>(basis_.cols()); }
  const Matrix& basis() const { return basis_; }
  Vector vector(int i) const { return basis_.col(i); }

 private:
  explicit Frame(Matrix basis) : basis_(std::move(basis)) {}
  Matrix basis_;
};

/// Orthonormal frame of the orthogonal complement.
inline Frame complement(const Frame& f) {
  const int n = f.ambient_dim();
  const int m = f.plane_dim();
  detail::require(m < n, "complement: frame spans the whole space");
  Eigen::HouseholderQR<Matrix> qr(f.basis());
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  Matrix rest = q.rightCols(n - m);
  // Project out residual components, then re-orthonormalize.
  rest -= f.basis() * (f.basis().transpose() * rest);
  return Frame::orthonormalize(rest);
}

/// Pi_V = sum_i b_i b_i^T, as an n x n matrix.
inline Matrix projector(const Frame& f) { return f.basis() * f.basis().transpose(); }

/// Largest principal angle between two planes of equal dimension.
inline double subspace_distance(const Frame& a, const Frame& b) {
  detail::require(a.ambient_dim() == b.ambient_dim() && a.plane_dim() == b.plane_dim(),
                  "subspace_distance: dimension mismatch");
  const Matrix cross = a.basis().transpose() * b.basis();
  const double cos_min = cross.jacobiSvd().singularValues().minCoeff();
  const Matrix residual = b.basis() - a.basis() * cross;
  const double sin_max = residual.jacobiSvd().singularValues().maxCoeff();
  return std::atan2(std::min(1.0, sin_max), std::max(0.0, std::min(1.0, cos_min)));
}

/// Rotation R^{ij}(beta) acting on coordinates i and j of x.
inline Vector rotate(const Vector& x, int i, int j, double beta) {
  detail::require(i != j, "rotate: indices must differ");
  detail::require(i >= 0 && j >= 0 && i < x.size() && j < x.size(), "rotate: index out of range");
  Vector y = x;
  const double c = std::cos(beta);
  const double s = std::sin(beta);
  y[i] = x[i] * c - x[j] * s;
  y[j] = x[i] * s + x[j] * c;
  return y;
}

/// Orthonormal coordinate system (base plane, complement) of a chart.
class Chart {
 public:
  Chart(Frame base, Frame base_complement) : base_(std::move(base)), complement_(std::move(base_complement)) {
    detail::require(base_.ambient_dim() == complement_.ambient_dim(), "Chart: dimension mismatch");
    detail::require(base_.plane_dim() + complement_.plane_dim() == base_.ambient_dim(),
                    "Chart: plane and complement dimensions must add up to n");
    const double cross = (base_.basis().transpose() * complement_.basis()).cwiseAbs().maxCoeff();
    detail::require(cross <= 1e-10, "Chart: complement is not orthogonal to the base plane");
    coords_.resize(base_.ambient_dim(), base_.ambient_dim());
    coords_ << base_.basis(), complement_.basis();
  }

  explicit Chart(const Frame& base) : Chart(base, complement(base)) {}

  static Chart standard(int n, int m) { return Chart(Frame::standard(n, m)); }

  int ambient_dim() const { return base_.ambient_dim(); }
  int plane_dim() const { return base_.plane_dim(); }
  const Frame& base() const { return base_; }
  const Frame& base_complement() const { return complement_; }
  /// n x n orthogonal matrix [base | complement]; maps chart coordinates
  /// to ambient coordinates.
  const Matrix& coordinates() const { return coords_; }

 private:
  Frame base_;
  Frame complement_;
  Matrix coords_;
};

/// A point alpha of the rotation chart around the chart's base plane.
class ChartPoint {
 public:
  ChartPoint(Chart chart, Matrix angles) : chart_(std::move(chart)), angles_(std::move(angles)) {
    const int m = chart_.plane_dim();
    const int n = chart_.ambient_dim();
    detail::require(angles_.rows() == m && angles_.cols() == n - m,
                    "ChartPoint: angles must be an m x (n - m) array");
    detail::require(angles_.allFinite(), "ChartPoint: non-finite angle");
    detail::require(angles_.size() == 0 || angles_.cwiseAbs().maxCoeff() < kChartLimit,
                    "ChartPoint: every angle must satisfy |alpha_ij| < pi/4");
  }

  static ChartPoint origin(Chart chart) {
    const int m = chart.plane_dim();
    const int n = chart.ambient_dim();
    return ChartPoint(std::move(chart), Matrix::Zero(m, n - m));
  }

  const Chart& chart() const { return chart_; }
  const Matrix& angles() const { return angles_; }
  double angle(int i, int j) const { return angles_(i, j - chart_.plane_dim()); }
  bool at_origin() const { return angles_.size() == 0 || angles_.cwiseAbs().maxCoeff() == 0.0; }

 private:
  Chart chart_;
  Matrix angles_;
};

namespace detail {

inline void check_slot(const ChartPoint& c, int i, int j) {
  const int m = c.chart().plane_dim();
  const int n = c.chart().ambient_dim();
  require(i >= 0 && i < m && j >= m && j < n, "chart slot (i, j) must satisfy i < m <= j < n");
}

// e_i(alpha) in chart coordinates; when differentiate_at >= m, the
// derivative with respect to alpha(i, differentiate_at) instead.
inline Vector rotated_coordinates(const ChartPoint& c, int i, int differentiate_at = -1) {
  const int m = c.chart().plane_dim();
  const int n = c.chart().ambient_dim();
  Vector x = Vector::Unit(n, i);
  for (int j = m; j < n; ++j) {
    x = rotate(x, i, j, c.angle(i, j));
    if (j == differentiate_at) {
      // d/dbeta R(beta) x = J R(beta) x with J the quarter-turn generator.
      const double xi = x[i];
      const double xj = x[j];
      x.setZero();
      x[i] = -xj;
      x[j] = xi;
    }
  }
  return x;
}

}  // namespace detail

/// The rotated vectors e_1(alpha)..e_m(alpha) as ambient columns (n x m).
/// They span V(alpha) but are not mutually orthogonal in general.
inline Matrix chart_point_vectors(const ChartPoint& c) {
  const int m = c.chart().plane_dim();
  Matrix coords(c.chart().ambient_dim(), m);
  for (int i = 0; i < m; ++i) coords.col(i) = detail::rotated_coordinates(c, i);
  return c.chart().coordinates() * coords;
}

/// d e_i(alpha) / d alpha_ij as an n x m matrix (only column i is nonzero).
inline Matrix chart_point_vectors_derivative(const ChartPoint& c, int i, int j) {
  detail::check_slot(c, i, j);
  Matrix coords = Matrix::Zero(c.chart().ambient_dim(), c.chart().plane_dim());
  coords.col(i) = detail::rotated_coordinates(c, i, j);
  return c.chart().coordinates() * coords;
}

/// Orthonormal frame of V(alpha); the base frame itself at alpha = 0.
inline Frame chart_point_frame(const ChartPoint& c) {
  if (c.at_origin()) return c.chart().base();
  return Frame::orthonormalize(chart_point_vectors(c));
}

/// Derivative of Pi_{span M}(z) along dM, for M of full column rank:
/// dPi = (I - P) dM M^+ + (M^+)^T dM^T (I - P).
inline Vector projection_derivative(const Matrix& spanning, const Matrix& d_spanning, const Vector& z) {
  detail::require(spanning.rows() == z.size() && d_spanning.rows() == spanning.rows() &&
                      d_spanning.cols() == spanning.cols(),
                  "projection_derivative: dimension mismatch");
  const Eigen::LLT<Matrix> gram(spanning.transpose() * spanning);
  const Vector coeff = gram.solve(spanning.transpose() * z);  // M^+ z
  const Vector proj = spanning * coeff;
  const Vector residual = z - proj;  // (I - P) z
  const Vector first = d_spanning * coeff;
  const Vector first_perp = first - spanning * gram.solve(spanning.transpose() * first);
  const Vector second = spanning * gram.solve(d_spanning.transpose() * residual);
  return first_perp + second;
}

/// d Pi_{V(alpha)}(z) / d alpha_ij at alpha = 0, from the closed form:
/// z_j e_i for the V^perp part of z plus w_i e_j for the V part.
inline Vector tangent_projection_derivative(const ChartPoint& c, int i, int j, const Vector& z) {
  detail::check_slot(c, i, j);
  if (!c.at_origin())
    throw PreconditionError("tangent_projection_derivative: chart point must be alpha = 0");
  const Matrix& coords = c.chart().coordinates();
  detail::require(z.size() == coords.rows(), "tangent_projection_derivative: dimension mismatch");
  const Vector zeta = coords.transpose() * z;
  return zeta[j] * coords.col(i) + zeta[i] * coords.col(j);
}

}  // namespace projlab
