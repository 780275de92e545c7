#pragma once

// Parametrized families lambda -> V_lambda of m-planes and their
// derivative data.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <set>
#include <utility>
#include <vector>

#include "projlab/bounds.hpp"
#include "projlab/errors.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/multivec.hpp"

namespace projlab {

/// Parameter `param` drives the chart angle alpha(i, j) with the given
/// weight. Indices are 0-based: i < m <= j < n.
struct ScheduleEntry {
  int param = 0;
  int i = 0;
  int j = 0;
  double weight = 1.0;

  friend bool operator==(const ScheduleEntry&, const ScheduleEntry&) = default;
};

/// A rotation-schedule family: alpha_ij(lambda) = sum of weight * lambda_param
/// over the entries driving (i, j), on the box prod (-radius_a, radius_a).
struct FamilySpec {
  int n = 0;
  int m = 0;
  int k = 0;
  Chart chart = Chart::standard(2, 1);
  std::vector<ScheduleEntry> schedule;
  std::vector<double> radii;

  void validate() const {
    check_family_dims(n, m, k);
    detail::require(chart.ambient_dim() == n && chart.plane_dim() == m,
                    "FamilySpec: chart dimensions do not match (n, m)");
    detail::require(static_cast<int>(radii.size()) == k, "FamilySpec: need one domain radius per parameter");
    for (double r : radii) detail::require(std::isfinite(r) && r > 0, "FamilySpec: radii must be positive");
    std::set<std::pair<int, std::pair<int, int>>> seen;
    Matrix reach = Matrix::Zero(m, n - m);
    for (const auto& e : schedule) {
      detail::require(e.param >= 0 && e.param < k, "FamilySpec: schedule parameter out of range");
      detail::require(e.i >= 0 && e.i < m && e.j >= m && e.j < n, "FamilySpec: schedule slot out of range");
      detail::require(std::isfinite(e.weight), "FamilySpec: non-finite weight");
      detail::require(seen.insert({e.param, {e.i, e.j}}).second,
                      "FamilySpec: a parameter drives the same slot twice");
      reach(e.i, e.j - m) += std::abs(e.weight) * radii[static_cast<std::size_t>(e.param)];
    }
    detail::require(reach.size() == 0 || reach.maxCoeff() <= kChartLimit,
                    "FamilySpec: domain lets some angle reach pi/4");
  }

  bool contains(const Vector& lambda) const {
    if (lambda.size() != k) return false;
    for (int a = 0; a < k; ++a)
      if (!(std::abs(lambda[a]) < radii[static_cast<std::size_t>(a)])) return false;
    return true;
  }

  /// Chart angles at lambda.
  Matrix angles(const Vector& lambda) const {
    Matrix alpha = Matrix::Zero(m, n - m);
    for (const auto& e : schedule) alpha(e.i, e.j - m) += e.weight * lambda[e.param];
    return alpha;
  }
};

/// One parameter per slot, slots taken in the given order.
inline FamilySpec make_slot_family(int n, int m, std::vector<std::pair<int, int>> slots, double radius,
                                   Chart chart) {
  FamilySpec spec;
  spec.n = n;
  spec.m = m;
  spec.k = static_cast<int>(slots.size());
  spec.chart = std::move(chart);
  for (int a = 0; a < spec.k; ++a)
    spec.schedule.push_back({a, slots[static_cast<std::size_t>(a)].first, slots[static_cast<std::size_t>(a)].second, 1.0});
  spec.radii.assign(static_cast<std::size_t>(spec.k), radius);
  spec.validate();
  return spec;
}

inline FamilySpec make_slot_family(int n, int m, std::vector<std::pair<int, int>> slots, double radius = 0.7) {
  return make_slot_family(n, m, std::move(slots), radius, Chart::standard(n, m));
}

/// Any differentiable family of planes on a box domain, described through
/// spanning columns M(lambda) (full column rank, not necessarily
/// orthonormal) and their parameter derivatives.
class PlaneFamily {
 public:
  virtual ~PlaneFamily() = default;

  virtual int ambient_dim() const = 0;
  virtual int plane_dim() const = 0;
  virtual int param_count() const = 0;
  virtual Vector domain_center() const = 0;
  virtual Vector domain_radii() const = 0;
  virtual Matrix spanning(const Vector& lambda) const = 0;
  /// dM/dlambda_a for a = 0..k-1.
  virtual std::vector<Matrix> spanning_derivatives(const Vector& lambda) const = 0;

  bool contains(const Vector& lambda) const {
    if (lambda.size() != param_count()) return false;
    const Vector c = domain_center();
    const Vector r = domain_radii();
    for (int a = 0; a < param_count(); ++a)
      if (!(std::abs(lambda[a] - c[a]) < r[a])) return false;
    return true;
  }

  void require_in_domain(const Vector& lambda) const {
    detail::require(contains(lambda), "parameter lies outside the family domain");
  }

  /// Orthonormal basis of V_lambda^perp used as coordinates for Jacobians.
  virtual Frame complement_at(const Vector& lambda) const { return complement(plane(lambda)); }

  Frame plane(const Vector& lambda) const {
    require_in_domain(lambda);
    return Frame::orthonormalize(spanning(lambda));
  }
};

/// The family lambda -> V(alpha(lambda)) of a rotation schedule.
class RotationFamily final : public PlaneFamily {
 public:
  explicit RotationFamily(FamilySpec spec) : spec_(std::move(spec)) { spec_.validate(); }

  const FamilySpec& spec() const { return spec_; }

  int ambient_dim() const override { return spec_.n; }
  int plane_dim() const override { return spec_.m; }
  int param_count() const override { return spec_.k; }
  Vector domain_center() const override { return Vector::Zero(spec_.k); }
  Vector domain_radii() const override {
    return Eigen::Map<const Vector>(spec_.radii.data(), spec_.k);
  }

  ChartPoint chart_point(const Vector& lambda) const {
    require_in_domain(lambda);
    return ChartPoint(spec_.chart, spec_.angles(lambda));
  }

  Matrix spanning(const Vector& lambda) const override { return chart_point_vectors(chart_point(lambda)); }

  std::vector<Matrix> spanning_derivatives(const Vector& lambda) const override {
    const ChartPoint c = chart_point(lambda);
    std::vector<Matrix> out(static_cast<std::size_t>(spec_.k), Matrix::Zero(spec_.n, spec_.m));
    for (const auto& e : spec_.schedule)
      out[static_cast<std::size_t>(e.param)] += e.weight * chart_point_vectors_derivative(c, e.i, e.j);
    return out;
  }

  /// The chart complement carried along: orthonormalized (I - P) applied to
  /// the base complement. Equals the chart's complement at lambda = 0.
  Frame complement_at(const Vector& lambda) const override {
    const ChartPoint c = chart_point(lambda);
    if (c.at_origin()) return spec_.chart.base_complement();
    const Matrix p = projector(chart_point_frame(c));
    const Matrix& u = spec_.chart.base_complement().basis();
    return Frame::orthonormalize(u - p * u);
  }

 private:
  FamilySpec spec_;
};

/// V_lambda as an orthonormal frame (the chart frame for rotation families).
inline Frame family_frame(const FamilySpec& spec, const Vector& lambda) {
  const RotationFamily family(spec);
  return chart_point_frame(family.chart_point(lambda));
}

/// n x k matrix whose columns are d Pi_{V_lambda}(z) / d lambda_a.
inline Matrix projection_jacobian(const PlaneFamily& family, const Vector& lambda, const Vector& z) {
  family.require_in_domain(lambda);
  detail::require(z.size() == family.ambient_dim(), "projection_jacobian: dimension mismatch");
  const Matrix m = family.spanning(lambda);
  const std::vector<Matrix> dm = family.spanning_derivatives(lambda);
  Matrix out(family.ambient_dim(), family.param_count());
  for (int a = 0; a < family.param_count(); ++a)
    out.col(a) = projection_derivative(m, dm[static_cast<std::size_t>(a)], z);
  return out;
}

/// The maps A_a : V^perp -> V, z -> d Pi_{V_lambda}(z) / d lambda_a at a
/// site, written as m x (n - m) matrices in the (plane, complement) bases.
struct FamilyJacobian {
  Vector site;
  Frame plane = Frame::standard(2, 1);
  Frame plane_complement = Frame::standard(2, 1);
  std::vector<Matrix> maps;

  int param_count() const { return static_cast<int>(maps.size()); }
  int plane_dim() const { return plane.plane_dim(); }
  int complement_dim() const { return plane_complement.plane_dim(); }

  /// A_a as vectors of R^{m(n-m)} (row-major), one per row.
  Matrix flattened() const {
    const int m = plane_dim();
    const int c = complement_dim();
    Matrix out(param_count(), m * c);
    for (int a = 0; a < param_count(); ++a)
      for (int r = 0; r < m; ++r)
        for (int q = 0; q < c; ++q) out(a, r * c + q) = maps[static_cast<std::size_t>(a)](r, q);
    return out;
  }
};

inline FamilyJacobian family_jacobian(const PlaneFamily& family, const Vector& site) {
  family.require_in_domain(site);
  FamilyJacobian jac;
  jac.site = site;
  jac.plane = family.plane(site);
  jac.plane_complement = family.complement_at(site);
  const Matrix m = family.spanning(site);
  const std::vector<Matrix> dm = family.spanning_derivatives(site);
  const Matrix& v = jac.plane.basis();
  const Matrix& u = jac.plane_complement.basis();
  for (int a = 0; a < family.param_count(); ++a) {
    Matrix map(v.cols(), u.cols());
    for (Eigen::Index q = 0; q < u.cols(); ++q)
      map.col(q) = v.transpose() * projection_derivative(m, dm[static_cast<std::size_t>(a)], u.col(q));
    jac.maps.push_back(std::move(map));
  }
  return jac;
}

inline FamilyJacobian family_jacobian(const FamilySpec& spec, const Vector& site) {
  return family_jacobian(RotationFamily(spec), site);
}

struct NondegeneracyResult {
  double wedge_norm = 0.0;
  bool pass = false;
};

/// Injectivity of D_lambda V_lambda, tested as linear independence of the
/// flattened maps A_1..A_k.
inline NondegeneracyResult nondegeneracy_check(const FamilyJacobian& jac, double tol = 1e-6) {
  const Matrix flat = jac.flattened();
  NondegeneracyResult out;
  if (flat.rows() > flat.cols()) return out;  // more maps than dimensions
  out.wedge_norm = gram_norm(SimpleMultivector::from_rows(flat));
  out.pass = out.wedge_norm > tol;
  return out;
}

inline NondegeneracyResult nondegeneracy_check(const PlaneFamily& family, const Vector& site, double tol = 1e-6) {
  return nondegeneracy_check(family_jacobian(family, site), tol);
}

inline NondegeneracyResult nondegeneracy_check(const FamilySpec& spec, const Vector& site, double tol = 1e-6) {
  return nondegeneracy_check(family_jacobian(spec, site), tol);
}

/// Slots of the dot-filling picture: the l lowest rows first, then the
/// remaining dots column by column from the left (rows l..m-1).
inline std::vector<std::pair<int, int>> dot_filling_slots(int n, int m, int k, int l) {
  check_family_dims(n, m, k);
  detail::require(0 <= l && l < m, "dot_filling_slots: need 0 <= l <= m - 1");
  std::vector<std::pair<int, int>> slots;
  for (int i = 0; i < l && static_cast<int>(slots.size()) < k; ++i)
    for (int j = m; j < n && static_cast<int>(slots.size()) < k; ++j) slots.emplace_back(i, j);
  for (int j = m; j < n && static_cast<int>(slots.size()) < k; ++j)
    for (int i = l; i < m && static_cast<int>(slots.size()) < k; ++i) slots.emplace_back(i, j);
  return slots;
}

/// The family attaining the bound for given (l, p): one parameter per
/// dot-filling slot around the standard chart. Requires the k-limits
/// inequality for (l, p).
inline FamilySpec sharpness_family(int n, int m, int k, int l, int p, double radius = 0.7) {
  check_family_dims(n, m, k);
  detail::require(0 <= l && l < m, "sharpness_family: need 0 <= l <= m - 1");
  const KLimits limits = k_limits(n, m, k, l, p);
  if (!limits.holds)
    throw InputError("sharpness_family: (l, p, k) violate " + limits.describe() + " with k = " +
                     std::to_string(k));
  return make_slot_family(n, m, dot_filling_slots(n, m, k, l), radius);
}

}  // namespace projlab
