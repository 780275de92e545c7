#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "projlab/errors.hpp"

namespace projlab {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Seed for an independent task: seed xor task index, then mixed so that
/// neighbouring indices give unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t task) {
  return splitmix64(seed ^ splitmix64(task));
}

inline Engine make_engine(std::uint64_t seed, std::uint64_t task) {
  return Engine(derive_seed(seed, task));
}

inline double uniform01(Engine& rng) {
  // 53 random mantissa bits, in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Eigen::VectorXd gaussian_vector(Engine& rng, int dim) {
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(dim);
  for (int i = 0; i < dim; ++i) v[i] = normal(rng);
  return v;
}

inline Eigen::VectorXd random_unit_vector(Engine& rng, int dim) {
  for (;;) {
    Eigen::VectorXd v = gaussian_vector(rng, dim);
    const double norm = v.norm();
    if (norm > 1e-12) return v / norm;
  }
}

/// Uniform point in the closed unit ball of R^dim.
inline Eigen::VectorXd random_in_ball(Engine& rng, int dim) {
  const Eigen::VectorXd direction = random_unit_vector(rng, dim);
  const double radius = std::pow(uniform01(rng), 1.0 / dim);
  return radius * direction;
}

/// n x m matrix with orthonormal columns, Haar distributed.
inline Eigen::MatrixXd random_orthonormal(Engine& rng, int n, int m) {
  detail::require(m >= 1 && m <= n, "random_orthonormal: need 1 <= m <= n");
  Eigen::MatrixXd g(n, m);
  for (int j = 0; j < m; ++j) g.col(j) = gaussian_vector(rng, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, m);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j)
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  return q;
}

namespace detail {

inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double factor = inv;
  double value = 0.0;
  while (index > 0) {
    value += factor * static_cast<double>(index % base);
    index /= base;
    factor *= inv;
  }
  return value;
}

constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace detail

/// Deterministic low-discrepancy sample of the unit sphere S^{dim-1}
/// (one point per column). Antipodal points are identified: dim 1 gives
/// the single point {1}, dim 2 gives evenly spaced angles on a half circle,
/// higher dims map Halton points through Box-Muller and normalize.
inline Eigen::MatrixXd sphere_sample(int dim, int count) {
  detail::require(dim >= 1 && dim <= 12, "sphere_sample: dim must be in [1, 12]");
  detail::require(count >= 1, "sphere_sample: count must be positive");
  if (dim == 1) return Eigen::MatrixXd::Ones(1, 1);
  Eigen::MatrixXd out(dim, count);
  if (dim == 2) {
    for (int q = 0; q < count; ++q) {
      const double angle = std::numbers::pi * q / count;
      out(0, q) = std::cos(angle);
      out(1, q) = std::sin(angle);
    }
    return out;
  }
  const int pairs = (dim + 1) / 2;
  for (int q = 0; q < count; ++q) {
    Eigen::VectorXd v(2 * pairs);
    for (int p = 0; p < pairs; ++p) {
      const auto idx = static_cast<std::uint64_t>(q) + 1;
      const double u1 = detail::radical_inverse(idx, detail::kPrimes[2 * p]);
      const double u2 = detail::radical_inverse(idx, detail::kPrimes[2 * p + 1]);
      const double radius = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
      v[2 * p] = radius * std::cos(2.0 * std::numbers::pi * u2);
      v[2 * p + 1] = radius * std::sin(2.0 * std::numbers::pi * u2);
    }
    Eigen::VectorXd head = v.head(dim);
    const double norm = head.norm();
    out.col(q) = norm > 0 ? Eigen::VectorXd(head / norm) : Eigen::VectorXd::Unit(dim, 0);
  }
  return out;
}

}  // namespace projlab
