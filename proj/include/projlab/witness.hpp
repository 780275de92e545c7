#pragma once

// Witness subspaces W of V^perp on which the Jacobian maps keep a uniform
// (l+1)-volume, and the extension of a family to (m+p)-planes built on them.

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <memory>
#include <vector>

#include "projlab/bounds.hpp"
#include "projlab/family.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/multivec.hpp"
#include "projlab/parallel.hpp"
#include "projlab/random.hpp"

namespace projlab {

struct WitnessOptions {
  int trials = 200;
  int sphere_samples = 512;
  int refine_steps = 50;
  std::uint64_t seed = 0;
  int threads = 0;
};

struct WitnessResult {
  Matrix basis;           // (n-m) x t, orthonormal columns, complement coordinates
  double d_prime = 0.0;   // min over sampled unit z in W of the best (l+1)-volume
};

inline bool witness_hypothesis(int k, int m, int complement_dim, int t, int l) {
  return static_cast<long>(k) > static_cast<long>(m) * (t - 1) + static_cast<long>(l) * (complement_dim - t + 1);
}

/// max over index sets {j_1..j_{l+1}} of ||A_{j_1} z ^ ... ^ A_{j_{l+1}} z||.
inline double best_wedge_volume(const std::vector<Matrix>& maps, const Vector& z, int l) {
  const int k = static_cast<int>(maps.size());
  if (l + 1 > k) return 0.0;
  Matrix images(maps.front().rows(), k);
  for (int a = 0; a < k; ++a) images.col(a) = maps[static_cast<std::size_t>(a)] * z;
  if (l + 1 > images.rows()) return 0.0;
  double best = 0.0;
  Matrix picked(images.rows(), l + 1);
  detail::for_each_subset(k, l + 1, [&](const std::vector<int>& idx) {
    for (int c = 0; c <= l; ++c) picked.col(c) = images.col(idx[static_cast<std::size_t>(c)]);
    best = std::max(best, detail::column_volume(picked));
  });
  return best;
}

/// Score of a candidate W: the smallest best_wedge_volume over the sphere
/// sample mapped into W.
inline double witness_score(const FamilyJacobian& jac, const Matrix& w_basis, int l, const Matrix& sphere) {
  double worst = std::numeric_limits<double>::infinity();
  for (Eigen::Index s = 0; s < sphere.cols(); ++s) {
    const Vector z = w_basis * sphere.col(s);
    worst = std::min(worst, best_wedge_volume(jac.maps, z, l));
  }
  return worst;
}

/// Randomized search for the witness subspace: random t-frame restarts,
/// each refined by perturbation hill-climbing. The returned d' certifies
/// the sampled sphere points only.
inline WitnessResult find_witness_subspace(const FamilyJacobian& jac, int t, int l, const WitnessOptions& options = {}) {
  const int c = jac.complement_dim();
  const int m = jac.plane_dim();
  const int k = jac.param_count();
  detail::require(1 <= t && t <= c, "find_witness_subspace: need 1 <= t <= n - m");
  detail::require(0 <= l && l < m, "find_witness_subspace: need 0 <= l <= m - 1");
  detail::require(options.trials >= 1 && options.refine_steps >= 0, "find_witness_subspace: bad options");
  if (!witness_hypothesis(k, m, c, t, l))
    throw InputError("find_witness_subspace: need k > m(t-1) + l(n-m-t+1)");

  const Matrix sphere = sphere_sample(t, options.sphere_samples);
  std::vector<WitnessResult> results(static_cast<std::size_t>(options.trials));
  parallel_for(results.size(), options.threads, [&](std::size_t trial) {
    Engine rng = make_engine(options.seed, trial);
    Matrix w = random_orthonormal(rng, c, t);
    double score = witness_score(jac, w, l, sphere);
    double step = 0.3;
    for (int s = 0; s < options.refine_steps && t < c; ++s, step *= 0.92) {
      Matrix candidate = w;
      for (Eigen::Index col = 0; col < t; ++col) candidate.col(col) += step * gaussian_vector(rng, c);
      candidate = Frame::orthonormalize(candidate).basis();
      const double candidate_score = witness_score(jac, candidate, l, sphere);
      if (candidate_score > score) {
        w = std::move(candidate);
        score = candidate_score;
      }
    }
    results[trial] = {std::move(w), score};
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].d_prime > results[best].d_prime) best = i;
  return results[best];
}

/// V~ = <V_{lambda1}, e^_{m+t}(lambda2), ..., e^_{n-1}(lambda2)>: the base
/// family's planes enlarged by the p complement directions orthogonal to W,
/// each rotated towards W by the pt extra parameters.
class ExtendedFamily final : public PlaneFamily {
 public:
  /// hat_basis: n x (n-m) orthonormal basis of V_site^perp whose first t
  /// columns span W. extra_radius: half-width of the extra parameter box.
  ExtendedFamily(std::shared_ptr<const PlaneFamily> base, Vector site, Matrix hat_basis, int t,
                 double extra_radius = 0.45)
      : base_(std::move(base)), site_(std::move(site)), hat_(std::move(hat_basis)), t_(t), extra_radius_(extra_radius) {
    const int n = base_->ambient_dim();
    const int m = base_->plane_dim();
    detail::require(hat_.rows() == n && hat_.cols() == n - m, "ExtendedFamily: hat basis must be n x (n - m)");
    detail::require(1 <= t_ && t_ <= n - m, "ExtendedFamily: need 1 <= t <= n - m");
    detail::require(extra_radius_ > 0 && extra_radius_ < kChartLimit, "ExtendedFamily: extra radius must be in (0, pi/4)");
    base_->require_in_domain(site_);
    Frame::from_basis(hat_, 1e-9);
    const Vector center = base_->domain_center();
    const Vector radii = base_->domain_radii();
    base_radii_.resize(site_.size());
    for (Eigen::Index a = 0; a < site_.size(); ++a) base_radii_[a] = radii[a] - std::abs(site_[a] - center[a]);
  }

  int extension_dim() const { return ambient_dim() - base_->plane_dim() - t_; }  // p
  int witness_dim() const { return t_; }
  const Matrix& hat_basis() const { return hat_; }
  const Vector& site() const { return site_; }
  const PlaneFamily& base() const { return *base_; }

  int ambient_dim() const override { return base_->ambient_dim(); }
  int plane_dim() const override { return base_->plane_dim() + extension_dim(); }
  int param_count() const override { return base_->param_count() + extension_dim() * t_; }

  Vector domain_center() const override {
    Vector c = Vector::Zero(param_count());
    c.head(site_.size()) = site_;
    return c;
  }

  Vector domain_radii() const override {
    Vector r = Vector::Constant(param_count(), extra_radius_);
    r.head(base_radii_.size()) = base_radii_;
    return r;
  }

  /// Index of the extra parameter rotating e^_{m+t+q} towards e^_{m+w}.
  int extra_param(int q, int w) const { return base_->param_count() + q * t_ + w; }

  Matrix spanning(const Vector& lambda) const override {
    require_in_domain(lambda);
    const int m = base_->plane_dim();
    const int p = extension_dim();
    Matrix out(ambient_dim(), m + p);
    out.leftCols(m) = base_->spanning(lambda.head(base_->param_count()));
    for (int q = 0; q < p; ++q) out.col(m + q) = hat_ * rotated(lambda, q, -1);
    return out;
  }

  std::vector<Matrix> spanning_derivatives(const Vector& lambda) const override {
    require_in_domain(lambda);
    const int m = base_->plane_dim();
    const int p = extension_dim();
    const int kb = base_->param_count();
    std::vector<Matrix> out(static_cast<std::size_t>(param_count()), Matrix::Zero(ambient_dim(), m + p));
    const std::vector<Matrix> base_d = base_->spanning_derivatives(lambda.head(kb));
    for (int a = 0; a < kb; ++a) out[static_cast<std::size_t>(a)].leftCols(m) = base_d[static_cast<std::size_t>(a)];
    for (int q = 0; q < p; ++q)
      for (int w = 0; w < t_; ++w)
        out[static_cast<std::size_t>(extra_param(q, w))].col(m + q) = hat_ * rotated(lambda, q, w);
    return out;
  }

 private:
  // e^_{m+t+q}(lambda2) in hat coordinates, or its derivative with respect
  // to the angle towards e^_{m+w} when differentiate_at >= 0.
  Vector rotated(const Vector& lambda, int q, int differentiate_at) const {
    const int c = static_cast<int>(hat_.cols());
    const int i = t_ + q;
    Vector x = Vector::Unit(c, i);
    for (int w = 0; w < t_; ++w) {
      x = rotate(x, i, w, lambda[extra_param(q, w)]);
      if (w == differentiate_at) {
        const double xi = x[i];
        const double xw = x[w];
        x.setZero();
        x[i] = -xw;
        x[w] = xi;
      }
    }
    return x;
  }

  std::shared_ptr<const PlaneFamily> base_;
  Vector site_;
  Matrix hat_;
  int t_;
  double extra_radius_;
  Vector base_radii_;
};

struct ExtensionResult {
  bool extended = false;  // false: p >= n - m, nothing to extend
  int l = 0;
  int p = 0;
  int t = 0;
  int added_params = 0;
  int target_order = 0;   // r = l + 1 + p
  FamilyJacobian jacobian;
  WitnessResult witness;
  std::shared_ptr<const ExtendedFamily> family;

  /// The site (lambda0, 0) of the extended family.
  Vector extended_site() const { return family ? family->domain_center() : Vector(); }
};

/// Builds the extended family around `site` for the given l.
inline ExtensionResult extend_family(std::shared_ptr<const PlaneFamily> base, const Vector& site, int l,
                                     const WitnessOptions& options = {}, double extra_radius = 0.45) {
  const int n = base->ambient_dim();
  const int m = base->plane_dim();
  const int k = base->param_count();
  ExtensionResult out;
  out.l = l;
  out.p = p_of_l(n, m, k, l);
  out.t = n - m - out.p;
  out.target_order = l + 1 + out.p;
  if (out.p >= n - m) return out;

  out.jacobian = family_jacobian(*base, site);
  out.witness = find_witness_subspace(out.jacobian, out.t, l, options);
  const int c = n - m;
  Matrix completed(c, c);
  completed.leftCols(out.t) = out.witness.basis;
  if (out.t < c) completed.rightCols(c - out.t) = complement(Frame::from_basis(out.witness.basis, 1e-9)).basis();
  const Matrix hat = out.jacobian.plane_complement.basis() * completed;
  out.family = std::make_shared<ExtendedFamily>(std::move(base), site, hat, out.t, extra_radius);
  out.added_params = out.p * out.t;
  out.extended = true;
  return out;
}

inline ExtensionResult extend_family(const FamilySpec& spec, const Vector& site, int l,
                                     const WitnessOptions& options = {}, double extra_radius = 0.45) {
  return extend_family(std::make_shared<RotationFamily>(spec), site, l, options, extra_radius);
}

}  // namespace projlab
