#pragma once

// Numerical probes of the two analytic facts behind the extension argument:
// second-order agreement of projections onto V_s and <V_s, U>, and the
// sublevel-set decay L^k{lambda : |Pi_{V_lambda}(w)| <= delta} ~ delta^r.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/family.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/parallel.hpp"
#include "projlab/random.hpp"
#include "projlab/regression.hpp"

namespace projlab {

/// s -> spanning columns of V_s.
using PlanePath = std::function<Matrix(double)>;

struct ExtendedDerivativeOptions {
  std::vector<double> steps{1e-1, 1e-2, 1e-3, 1e-4};
  int z_samples = 4;
  std::uint64_t seed = 0;
  double min_order = 1.9;
  /// Differences below this (relative to |z|) count as exact agreement.
  double exact_floor = 1e-13;
};

struct ExtendedDerivativeResult {
  double order = 0.0;  // worst fitted slope over the z samples; +inf if exact
  bool pass = false;
  std::vector<double> steps;
  std::vector<double> differences;  // for the worst z sample
};

/// Fits the log-log slope of |Pi_{V_s}(z) - Pi_{<V_s,U>}(z)| against |s - c|
/// for z in <V_c, U>^perp; the two projections agree to second order.
inline ExtendedDerivativeResult extended_plane_derivative_check(const PlanePath& path, double c, const Matrix& u,
                                                                const ExtendedDerivativeOptions& options = {}) {
  const Frame vc = Frame::orthonormalize(path(c));
  const int n = vc.ambient_dim();
  detail::require(u.rows() == n && u.cols() >= 1, "extended_plane_derivative_check: U must be n x p");
  const Frame uf = Frame::from_basis(u, 1e-9);
  if ((vc.basis().transpose() * uf.basis()).cwiseAbs().maxCoeff() > 1e-9)
    throw InputError("extended_plane_derivative_check: U is not inside V_c^perp");
  const int joined_dim = vc.plane_dim() + uf.plane_dim();
  detail::require(joined_dim < n, "extended_plane_derivative_check: <V_c, U> must be a proper subspace");
  detail::require(options.steps.size() >= 2, "extended_plane_derivative_check: need at least two steps");

  Matrix joined(n, joined_dim);
  joined << vc.basis(), uf.basis();
  const Frame outside = complement(Frame::from_basis(joined, 1e-9));

  auto projection = [](const Matrix& spanning, const Vector& z) {
    const Frame f = Frame::orthonormalize(spanning);
    return Vector(f.basis() * (f.basis().transpose() * z));
  };
  auto difference = [&](double s, const Vector& z) {
    const Matrix vs = path(s);
    Matrix extended(n, joined_dim);
    extended << vs, uf.basis();
    return (projection(vs, z) - projection(extended, z)).norm();
  };

  Engine rng = make_engine(options.seed, 0);
  ExtendedDerivativeResult out;
  out.steps = options.steps;
  out.order = std::numeric_limits<double>::infinity();
  for (int sample = 0; sample < options.z_samples; ++sample) {
    const Vector z = outside.basis() * random_unit_vector(rng, outside.plane_dim());
    std::vector<double> diffs;
    std::vector<double> log_h;
    std::vector<double> log_d;
    bool exact = true;
    for (double h : options.steps) {
      const double d = 0.5 * (difference(c + h, z) + difference(c - h, z));
      diffs.push_back(d);
      if (d > options.exact_floor) exact = false;
      log_h.push_back(std::log(h));
      log_d.push_back(std::log(std::max(d, std::numeric_limits<double>::min())));
    }
    const double order = exact ? std::numeric_limits<double>::infinity() : least_squares(log_h, log_d).slope;
    if (order < out.order || out.differences.empty()) {
      out.order = std::min(out.order, order);
      out.differences = diffs;
    }
  }
  out.pass = out.order >= options.min_order;
  return out;
}

struct ProbeOptions {
  std::vector<double> deltas{0.1, 0.05, 0.02, 0.01, 0.005, 0.002, 0.001};
  std::size_t samples = 1'000'000;
  std::uint64_t seed = 0;
  /// Ball radius; 0 means half the distance from lambda0 to the domain boundary.
  double radius = 0.0;
  std::size_t min_hits = 16;
  int threads = 0;
};

struct ProbeResult {
  std::vector<double> deltas;
  std::vector<std::size_t> hits;
  std::vector<double> fractions;
  std::vector<bool> used;
  std::size_t samples = 0;
  double radius = 0.0;
  double exponent = std::numeric_limits<double>::quiet_NaN();
  double exponent_stderr = std::numeric_limits<double>::quiet_NaN();
  bool fitted = false;
  std::string diagnostic;
};

inline double default_probe_radius(const PlaneFamily& family, const Vector& site) {
  const Vector c = family.domain_center();
  const Vector r = family.domain_radii();
  double dist = std::numeric_limits<double>::infinity();
  for (int a = 0; a < family.param_count(); ++a) dist = std::min(dist, r[a] - std::abs(site[a] - c[a]));
  return 0.5 * dist;
}

namespace detail {
inline constexpr std::size_t kProbeShards = 64;
}

/// Monte-Carlo volume fractions of {lambda in B(lambda0, R) : |Pi_{V_lambda}(w)| <= delta}
/// and the fitted exponent of their decay in delta. Deterministic in the
/// seed: samples are split into a fixed number of shards, each with its
/// own derived stream.
inline ProbeResult transversality_probe(const PlaneFamily& family, const Vector& site, const Vector& w,
                                        const ProbeOptions& options = {}) {
  family.require_in_domain(site);
  detail::require(w.size() == family.ambient_dim(), "transversality_probe: direction has wrong dimension");
  detail::require(w.norm() > 0, "transversality_probe: direction must be nonzero");
  detail::require(!options.deltas.empty(), "transversality_probe: need at least one delta");
  for (std::size_t i = 0; i < options.deltas.size(); ++i) {
    detail::require(options.deltas[i] > 0, "transversality_probe: deltas must be positive");
    if (i > 0)
      detail::require(options.deltas[i] < options.deltas[i - 1], "transversality_probe: deltas must be decreasing");
  }
  const Vector unit = w / w.norm();
  const int k = family.param_count();
  ProbeResult out;
  out.deltas = options.deltas;
  out.samples = options.samples;
  out.radius = options.radius > 0 ? options.radius : default_probe_radius(family, site);
  detail::require(out.radius > 0, "transversality_probe: ball radius must be positive");
  detail::require(out.radius <= default_probe_radius(family, site) * 2.0,
                  "transversality_probe: ball leaves the family domain");

  const std::size_t shards = detail::kProbeShards;
  std::vector<std::vector<std::size_t>> shard_hits(shards, std::vector<std::size_t>(options.deltas.size(), 0));
  parallel_for(shards, options.threads, [&](std::size_t shard) {
    Engine rng = make_engine(options.seed, shard);
    const std::size_t count = options.samples / shards + (shard < options.samples % shards ? 1 : 0);
    auto& hits = shard_hits[shard];
    for (std::size_t s = 0; s < count; ++s) {
      const Vector lambda = site + out.radius * random_in_ball(rng, k);
      if (!family.contains(lambda)) continue;  // boundary of the closed ball
      const Matrix m = family.spanning(lambda);
      const Eigen::LLT<Matrix> gram(m.transpose() * m);
      const Vector coeff = gram.solve(m.transpose() * unit);
      // |Pi w|^2 = <w, M coeff> = coeff^T G coeff.
      const double value = std::sqrt(std::max(0.0, unit.dot(m * coeff)));
      for (std::size_t d = 0; d < options.deltas.size() && value <= options.deltas[d]; ++d) ++hits[d];
    }
  });

  out.hits.assign(options.deltas.size(), 0);
  for (const auto& hits : shard_hits)
    for (std::size_t d = 0; d < hits.size(); ++d) out.hits[d] += hits[d];
  out.used.assign(options.deltas.size(), false);
  std::vector<double> log_delta;
  std::vector<double> log_fraction;
  for (std::size_t d = 0; d < options.deltas.size(); ++d) {
    out.fractions.push_back(static_cast<double>(out.hits[d]) / static_cast<double>(options.samples));
    if (out.hits[d] >= options.min_hits) {
      out.used[d] = true;
      log_delta.push_back(std::log(options.deltas[d]));
      log_fraction.push_back(std::log(out.fractions[d]));
    }
  }
  if (out.hits.front() == 0) {
    out.diagnostic = "direction never near kernel: no hits at the largest delta";
    return out;
  }
  if (log_delta.size() < 3) {
    out.diagnostic = "fewer than three resolvable deltas";
    return out;
  }
  const LinearFit fit = least_squares(log_delta, log_fraction);
  out.exponent = fit.slope;
  out.exponent_stderr = fit.slope_stderr;
  out.fitted = true;
  return out;
}

}  // namespace projlab
