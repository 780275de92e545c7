#pragma once

// Compactly supported test measures: Cantor-type IFS measures, uniform
// balls, and orthogonal products of them embedded in R^n.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/parallel.hpp"
#include "projlab/random.hpp"

namespace projlab {

/// Weighted point cloud approximating a probability measure.
struct SampledMeasure {
  Matrix points;       // N x n, one point per row
  Vector weights;      // N, nonnegative, summing to 1
  double nominal_dim = 0.0;
  std::string provenance;

  int ambient_dim() const { return static_cast<int>(points.cols()); }
  std::size_t size() const { return static_cast<std::size_t>(points.rows()); }

  /// Throws InputError when mass or support invariants are violated.
  void validate(double support_radius = 2.0) const {
    detail::require(points.rows() >= 1 && points.cols() >= 1, "SampledMeasure: empty");
    detail::require(weights.size() == points.rows(), "SampledMeasure: one weight per point");
    detail::require(points.allFinite() && weights.allFinite(), "SampledMeasure: non-finite data");
    detail::require(weights.minCoeff() >= 0.0, "SampledMeasure: negative weight");
    detail::require(std::abs(weights.sum() - 1.0) <= 1e-12, "SampledMeasure: weights must sum to 1");
    detail::require(points.rowwise().norm().maxCoeff() <= support_radius,
                    "SampledMeasure: support exceeds the stated bound");
  }
};

inline constexpr int kMaxFourCornerLevel = 12;
inline constexpr int kMaxLineCantorLevel = 24;

/// Level-th iterate (from the origin) of x -> x/4 + c, c in {0, 3/4}^2,
/// with equal weights 4^-level.
inline SampledMeasure four_corner_cantor(int level) {
  detail::require(level >= 1 && level <= kMaxFourCornerLevel, "four_corner_cantor: level must be in [1, 12]");
  const std::size_t count = std::size_t{1} << (2 * level);
  SampledMeasure mu;
  mu.points.resize(static_cast<Eigen::Index>(count), 2);
  for (std::size_t idx = 0; idx < count; ++idx) {
    double x = 0.0;
    double y = 0.0;
    double scale = 0.75;
    std::size_t code = idx;
    // Digit q (base 4) picks the corner of the q-th contraction.
    for (int q = 0; q < level; ++q, code >>= 2, scale *= 0.25) {
      x += scale * static_cast<double>(code & 1U);
      y += scale * static_cast<double>((code >> 1) & 1U);
    }
    mu.points(static_cast<Eigen::Index>(idx), 0) = x;
    mu.points(static_cast<Eigen::Index>(idx), 1) = y;
  }
  mu.weights = Vector::Constant(static_cast<Eigen::Index>(count), 1.0 / static_cast<double>(count));
  mu.nominal_dim = 1.0;
  mu.provenance = "four_corner_cantor(level=" + std::to_string(level) + ")";
  return mu;
}

/// Two-map IFS on [0, 1] with ratio rho = 2^(-1/s) and translations {0, 1 - rho}.
inline SampledMeasure line_cantor(double s, int level) {
  detail::require(std::isfinite(s) && s > 0.0 && s <= 1.0, "line_cantor: need 0 < s <= 1");
  detail::require(level >= 1 && level <= kMaxLineCantorLevel, "line_cantor: level must be in [1, 24]");
  const double rho = std::pow(2.0, -1.0 / s);
  const std::size_t count = std::size_t{1} << level;
  SampledMeasure mu;
  mu.points.resize(static_cast<Eigen::Index>(count), 1);
  for (std::size_t idx = 0; idx < count; ++idx) {
    double x = 0.0;
    double scale = 1.0 - rho;
    std::size_t code = idx;
    for (int q = 0; q < level; ++q, code >>= 1, scale *= rho) x += scale * static_cast<double>(code & 1U);
    mu.points(static_cast<Eigen::Index>(idx), 0) = x;
  }
  mu.weights = Vector::Constant(static_cast<Eigen::Index>(count), 1.0 / static_cast<double>(count));
  mu.nominal_dim = s;
  mu.provenance = "line_cantor(s=" + std::to_string(s) + ",level=" + std::to_string(level) + ")";
  return mu;
}

/// Dirac mass at the origin of R^dim.
inline SampledMeasure atom(int dim) {
  detail::require(dim >= 1, "atom: dim must be positive");
  SampledMeasure mu;
  mu.points = Matrix::Zero(1, dim);
  mu.weights = Vector::Ones(1);
  mu.nominal_dim = 0.0;
  mu.provenance = "atom(dim=" + std::to_string(dim) + ")";
  return mu;
}

namespace detail {
inline constexpr std::size_t kSampleBlock = 4096;

// Calls fill(rng, first, last) on fixed-size blocks, each block seeded from
// its index, so the output does not depend on the thread count.
template <class Fill>
void blocked_sampling(std::size_t count, std::uint64_t seed, int threads, Fill&& fill) {
  const std::size_t blocks = (count + kSampleBlock - 1) / kSampleBlock;
  parallel_for(blocks, threads, [&](std::size_t b) {
    Engine rng = make_engine(seed, b);
    fill(rng, b * kSampleBlock, std::min(count, (b + 1) * kSampleBlock));
  });
}
}  // namespace detail

/// N uniform samples of the unit ball of R^dim, equal weights.
inline SampledMeasure lebesgue_ball(int dim, std::size_t count, std::uint64_t seed, int threads = 0) {
  detail::require(dim >= 1, "lebesgue_ball: dim must be positive");
  detail::require(count >= 1, "lebesgue_ball: need at least one sample");
  SampledMeasure mu;
  mu.points.resize(static_cast<Eigen::Index>(count), dim);
  detail::blocked_sampling(count, seed, threads, [&](Engine& rng, std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i)
      mu.points.row(static_cast<Eigen::Index>(i)) = random_in_ball(rng, dim).transpose();
  });
  mu.weights = Vector::Constant(static_cast<Eigen::Index>(count), 1.0 / static_cast<double>(count));
  mu.nominal_dim = dim;
  mu.provenance = "lebesgue_ball(dim=" + std::to_string(dim) + ")";
  return mu;
}

/// Translates the support to be centred on its bounding box and scales it
/// into the closed unit ball. Dimension-preserving.
inline SampledMeasure normalized_to_unit_ball(SampledMeasure mu) {
  const Eigen::RowVectorXd lo = mu.points.colwise().minCoeff();
  const Eigen::RowVectorXd hi = mu.points.colwise().maxCoeff();
  const Eigen::RowVectorXd center = 0.5 * (lo + hi);
  mu.points.rowwise() -= center;
  const double radius = mu.points.rowwise().norm().maxCoeff();
  if (radius > 1.0) mu.points /= radius;
  return mu;
}

/// A factor of a product: points mapped into R^n by basis (n x d,
/// orthonormal columns) plus offset.
struct Embedding {
  SampledMeasure measure;
  Matrix basis;
  Vector offset;
};

namespace detail {

inline void check_embeddings(const std::vector<Embedding>& parts, int n) {
  require(!parts.empty(), "product_embed: need at least one factor");
  for (const auto& part : parts) {
    require(part.basis.rows() == n && part.basis.cols() == part.measure.ambient_dim(),
            "product_embed: factor basis must be n x (factor dimension)");
    require(part.offset.size() == 0 || part.offset.size() == n, "product_embed: offset must have length n");
    Frame::from_basis(part.basis, 1e-9);
  }
  for (std::size_t a = 0; a < parts.size(); ++a)
    for (std::size_t b = a + 1; b < parts.size(); ++b)
      if ((parts[a].basis.transpose() * parts[b].basis).cwiseAbs().maxCoeff() > 1e-9)
        throw InputError("product_embed: embedding subspaces overlap");
}

inline std::size_t sample_index(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u * cumulative.back());
  return std::min(static_cast<std::size_t>(it - cumulative.begin()), cumulative.size() - 1);
}

inline std::vector<double> cumulative_weights(const Vector& w) {
  std::vector<double> c(static_cast<std::size_t>(w.size()));
  std::partial_sum(w.data(), w.data() + w.size(), c.begin());
  return c;
}

}  // namespace detail

/// N independent samples of the product of the factors, each factor drawn
/// by weight and mapped through its embedding; nominal dims add.
inline SampledMeasure product_embed(const std::vector<Embedding>& parts, int n, std::size_t count,
                                    std::uint64_t seed, int threads = 0) {
  detail::require(n >= 1 && count >= 1, "product_embed: need n >= 1 and count >= 1");
  detail::check_embeddings(parts, n);
  std::vector<std::vector<double>> cumulative;
  for (const auto& part : parts) cumulative.push_back(detail::cumulative_weights(part.measure.weights));
  SampledMeasure mu;
  mu.points = Matrix::Zero(static_cast<Eigen::Index>(count), n);
  detail::blocked_sampling(count, seed, threads, [&](Engine& rng, std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) {
      Vector x = Vector::Zero(n);
      for (std::size_t f = 0; f < parts.size(); ++f) {
        const auto& part = parts[f];
        const std::size_t pick = detail::sample_index(cumulative[f], uniform01(rng));
        x += part.basis * part.measure.points.row(static_cast<Eigen::Index>(pick)).transpose();
        if (part.offset.size() == n) x += part.offset;
      }
      mu.points.row(static_cast<Eigen::Index>(i)) = x.transpose();
    }
  });
  mu.weights = Vector::Constant(static_cast<Eigen::Index>(count), 1.0 / static_cast<double>(count));
  mu.nominal_dim = 0.0;
  mu.provenance = "product(";
  for (std::size_t f = 0; f < parts.size(); ++f) {
    mu.nominal_dim += parts[f].measure.nominal_dim;
    mu.provenance += (f ? "," : "") + parts[f].measure.provenance;
  }
  mu.provenance += ")";
  return mu;
}

/// Deterministic image of a measure under x -> basis x + offset.
inline SampledMeasure embed(const SampledMeasure& inner, const Matrix& basis, const Vector& offset) {
  const int n = static_cast<int>(basis.rows());
  detail::require(basis.cols() == inner.ambient_dim(), "embed: basis must be n x (inner dimension)");
  detail::require(offset.size() == 0 || offset.size() == n, "embed: offset must have length n");
  Frame::from_basis(basis, 1e-9);
  SampledMeasure mu = inner;
  mu.points = inner.points * basis.transpose();
  if (offset.size() == n) mu.points.rowwise() += offset.transpose();
  mu.provenance = "embedded(" + inner.provenance + ")";
  return mu;
}

// ---------------------------------------------------------------------------
// Declarative measure specifications.

struct MeasureSpec;

struct FourCornerCantorSpec {
  int level = 8;
};
struct LineCantorSpec {
  double s = 1.0;
  int level = 10;
};
struct LebesgueBallSpec {
  int dim = 1;
  std::size_t points = 100000;
};
struct AtomSpec {
  int dim = 1;
};
/// Inner measure (normalized into the unit ball) mapped by basis + offset.
struct EmbeddedSpec {
  std::shared_ptr<const MeasureSpec> inner;
  Matrix basis;
  Vector offset;
};
struct ProductSpec {
  std::vector<EmbeddedSpec> parts;
  std::size_t points = 100000;
};

struct MeasureSpec {
  std::variant<FourCornerCantorSpec, LineCantorSpec, LebesgueBallSpec, AtomSpec, EmbeddedSpec, ProductSpec> variant;

  int ambient_dim() const {
    return std::visit(
        [](const auto& v) -> int {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, FourCornerCantorSpec>) return 2;
          else if constexpr (std::is_same_v<T, LineCantorSpec>) return 1;
          else if constexpr (std::is_same_v<T, LebesgueBallSpec>) return v.dim;
          else if constexpr (std::is_same_v<T, AtomSpec>) return v.dim;
          else if constexpr (std::is_same_v<T, EmbeddedSpec>) return static_cast<int>(v.basis.rows());
          else return v.parts.empty() ? 0 : static_cast<int>(v.parts.front().basis.rows());
        },
        variant);
  }

  double nominal_dim() const {
    return std::visit(
        [](const auto& v) -> double {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, FourCornerCantorSpec>) return 1.0;
          else if constexpr (std::is_same_v<T, LineCantorSpec>) return v.s;
          else if constexpr (std::is_same_v<T, LebesgueBallSpec>) return v.dim;
          else if constexpr (std::is_same_v<T, AtomSpec>) return 0.0;
          else if constexpr (std::is_same_v<T, EmbeddedSpec>) return v.inner->nominal_dim();
          else {
            double d = 0.0;
            for (const auto& p : v.parts) d += p.inner->nominal_dim();
            return d;
          }
        },
        variant);
  }
};

/// Samples a specification; deterministic in (spec, seed).
inline SampledMeasure generate(const MeasureSpec& spec, std::uint64_t seed, int threads = 0) {
  return std::visit(
      [&](const auto& v) -> SampledMeasure {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FourCornerCantorSpec>) {
          return four_corner_cantor(v.level);
        } else if constexpr (std::is_same_v<T, LineCantorSpec>) {
          return line_cantor(v.s, v.level);
        } else if constexpr (std::is_same_v<T, LebesgueBallSpec>) {
          return lebesgue_ball(v.dim, v.points, seed, threads);
        } else if constexpr (std::is_same_v<T, AtomSpec>) {
          return atom(v.dim);
        } else if constexpr (std::is_same_v<T, EmbeddedSpec>) {
          detail::require(v.inner != nullptr, "embedded measure needs an inner measure");
          return embed(normalized_to_unit_ball(generate(*v.inner, derive_seed(seed, 1), threads)), v.basis, v.offset);
        } else {
          std::vector<Embedding> parts;
          for (std::size_t f = 0; f < v.parts.size(); ++f) {
            const auto& p = v.parts[f];
            detail::require(p.inner != nullptr, "product factor needs an inner measure");
            parts.push_back({normalized_to_unit_ball(generate(*p.inner, derive_seed(seed, 100 + f), threads)),
                             p.basis, p.offset});
          }
          const int n = parts.empty() ? 0 : static_cast<int>(parts.front().basis.rows());
          return product_embed(parts, n, v.points, derive_seed(seed, 2), threads);
        }
      },
      spec.variant);
}

}  // namespace projlab
