#pragma once

// Box-counting and correlation-integral dimension estimates of sampled
// measures, a discrete t-energy diagnostic, and point-cloud projection.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "projlab/errors.hpp"
#include "projlab/fractal.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/parallel.hpp"
#include "projlab/random.hpp"
#include "projlab/regression.hpp"

namespace projlab {

enum class EstimatorMethod { box_counting, correlation };

inline const char* to_string(EstimatorMethod m) {
  return m == EstimatorMethod::box_counting ? "box_counting" : "correlation";
}

/// One log-log data point: scale (box side or radius) and the count (boxes
/// or correlation integral) measured at it.
struct FitPoint {
  double scale = 0.0;
  double count = 0.0;
  bool used = false;
};

struct DimensionEstimate {
  double value = 0.0;
  EstimatorMethod method = EstimatorMethod::box_counting;
  double scale_min = 0.0;
  double scale_max = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t point_count = 0;
  std::size_t scales_used = 0;
  std::vector<FitPoint> fit_data;
  std::string warning;
};

/// Applies Pi_V to every point; weights unchanged.
inline SampledMeasure project_points(const Frame& f, const SampledMeasure& mu) {
  detail::require(f.ambient_dim() == mu.ambient_dim(), "project_points: dimension mismatch");
  SampledMeasure out = mu;
  out.points = (mu.points * f.basis()) * f.basis().transpose();
  out.provenance = "projected(" + mu.provenance + ")";
  return out;
}

/// count values from hi down to lo, equally spaced in log scale.
inline std::vector<double> geometric_scales(double hi, double lo, int count) {
  detail::require(hi > lo && lo > 0 && count >= 2, "geometric_scales: need hi > lo > 0 and count >= 2");
  std::vector<double> out;
  const double ratio = std::pow(lo / hi, 1.0 / (count - 1));
  for (int i = 0; i < count; ++i) out.push_back(hi * std::pow(ratio, i));
  return out;
}

namespace detail {

inline double bounding_diameter(const Matrix& points) {
  const Eigen::RowVectorXd lo = points.colwise().minCoeff();
  const Eigen::RowVectorXd hi = points.colwise().maxCoeff();
  return (hi - lo).norm();
}

inline bool is_degenerate(const Matrix& points) {
  const double scale = 1.0 + points.cwiseAbs().maxCoeff();
  return bounding_diameter(points) <= 1e-12 * scale;
}

inline DimensionEstimate degenerate_estimate(EstimatorMethod method, std::size_t n) {
  DimensionEstimate e;
  e.method = method;
  e.point_count = n;
  e.r_squared = 1.0;
  e.warning = "degenerate measure: all points coincide";
  return e;
}

struct CellKey {
  std::uint64_t h1;
  std::uint64_t h2;
  double mass;
};

}  // namespace detail

struct BoxCountingOptions {
  std::vector<double> scales;   // descending; empty selects 28 scales in [diam*1e-4, diam/4]
  int offsets = 6;              // random grid anchors per scale
  std::uint64_t seed = 0x5eed;  // fixed internal seed for the anchors
  std::size_t min_window = 5;
  double min_boxes = 8.0;       // coarse-scale cut
  double saturation = 0.25;     // fine-scale cut: boxes <= saturation * points
  int threads = 1;
};

/// Slope of log N(eps) against log(1/eps) over the best window of
/// resolvable scales. Boxes count when they carry at least
/// 1 / (10 * boxes covering the bounding box) of the mass.
inline DimensionEstimate box_counting_dim(const SampledMeasure& mu, const BoxCountingOptions& options = {}) {
  const std::size_t count = mu.size();
  detail::require(count >= 1 && mu.weights.size() == mu.points.rows(), "box_counting_dim: empty measure");
  if (detail::is_degenerate(mu.points)) return detail::degenerate_estimate(EstimatorMethod::box_counting, count);

  const int n = mu.ambient_dim();
  const double diam = detail::bounding_diameter(mu.points);
  const Eigen::RowVectorXd lo = mu.points.colwise().minCoeff();
  const Eigen::RowVectorXd extent = mu.points.colwise().maxCoeff() - lo;
  std::vector<double> scales = options.scales.empty() ? geometric_scales(diam / 4, diam * 1e-4, 28) : options.scales;
  std::sort(scales.begin(), scales.end(), std::greater<>());
  detail::require(scales.size() >= 4, "box_counting_dim: need at least four scales");
  const double total_mass = mu.weights.sum();

  std::vector<double> boxes(scales.size(), 0.0);
  parallel_for(scales.size(), options.threads, [&](std::size_t si) {
    const double eps = scales[si];
    double possible = 1.0;
    for (int d = 0; d < n; ++d) possible *= std::floor(extent[d] / eps) + 2.0;
    const double floor_mass = total_mass / (10.0 * possible);
    Engine rng = make_engine(options.seed, si);
    std::vector<detail::CellKey> keys(count);
    double sum = 0.0;
    for (int o = 0; o < options.offsets; ++o) {
      Eigen::RowVectorXd shift(n);
      for (int d = 0; d < n; ++d) shift[d] = uniform01(rng) * eps;
      for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t h1 = 0x243f6a8885a308d3ULL;
        std::uint64_t h2 = 0x13198a2e03707344ULL;
        for (int d = 0; d < n; ++d) {
          const auto cell = static_cast<std::int64_t>(
              std::floor((mu.points(static_cast<Eigen::Index>(i), d) - lo[d] + shift[d]) / eps));
          const auto u = static_cast<std::uint64_t>(cell);
          h1 = splitmix64(h1 ^ u);
          h2 = splitmix64(h2 + 0x9e3779b97f4a7c15ULL * (u + 1));
        }
        keys[i] = {h1, h2, mu.weights[static_cast<Eigen::Index>(i)]};
      }
      std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        return a.h1 != b.h1 ? a.h1 < b.h1 : a.h2 < b.h2;
      });
      std::size_t occupied = 0;
      for (std::size_t i = 0; i < count;) {
        std::size_t j = i;
        double mass = 0.0;
        while (j < count && keys[j].h1 == keys[i].h1 && keys[j].h2 == keys[i].h2) mass += keys[j++].mass;
        if (mass >= floor_mass) ++occupied;
        i = j;
      }
      sum += static_cast<double>(occupied);
    }
    boxes[si] = sum / options.offsets;
  });

  DimensionEstimate e;
  e.method = EstimatorMethod::box_counting;
  e.point_count = count;
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    e.fit_data.push_back({scales[si], boxes[si], false});
    x.push_back(std::log(1.0 / scales[si]));
    y.push_back(std::log(std::max(boxes[si], 1.0)));
  }
  if (count < 1000) e.warning = "fewer than 1000 points";
  // Admissible scales: above the coarse cut, below saturation, and away
  // from the two finest scales.
  const std::size_t last = scales.size() >= 2 ? scales.size() - 2 : scales.size();
  auto admissible = [&](double min_boxes) {
    std::size_t a = 0;
    while (a < last && boxes[a] < min_boxes) ++a;
    std::size_t b = a;
    while (b < last && boxes[b] <= options.saturation * static_cast<double>(count)) ++b;
    return std::pair{a, b};
  };
  auto [first, end] = admissible(options.min_boxes);
  std::optional<LinearFit> fit = best_window(x, y, first, end, options.min_window);
  if (!fit) {
    std::tie(first, end) = admissible(1.0);
    fit = best_window(x, y, first, end, 4);
    if (!fit) {
      e.warning = "no resolvable scaling window";
      return e;
    }
    e.warning = "coarse-scale cut relaxed";
  }
  e.value = std::max(0.0, fit->slope);
  e.slope_stderr = fit->slope_stderr;
  e.r_squared = fit->r_squared;
  e.scales_used = fit->count;
  e.scale_max = scales[fit->first];
  e.scale_min = scales[fit->first + fit->count - 1];
  for (std::size_t i = fit->first; i < fit->first + fit->count; ++i) e.fit_data[i].used = true;
  return e;
}

struct CorrelationOptions {
  std::size_t pair_budget = 2'000'000;
  std::uint64_t seed = 0;
  int radii = 40;               // geometric radii in [max distance * 1e-5, max distance]
  std::size_t min_window = 5;
  std::size_t min_pairs = 100;  // fine-scale cut
  double max_fraction = 0.1;    // coarse-scale cut on C(r)
  int threads = 1;
};

namespace detail {
inline constexpr std::size_t kPairShards = 64;
}

/// Slope of log C(r) against log r, C(r) the weighted fraction of sampled
/// pairs of distinct points at distance <= r.
inline DimensionEstimate correlation_dim(const SampledMeasure& mu, const CorrelationOptions& options = {}) {
  const std::size_t count = mu.size();
  detail::require(count >= 1 && mu.weights.size() == mu.points.rows(), "correlation_dim: empty measure");
  detail::require(options.pair_budget >= 16, "correlation_dim: pair budget too small");
  if (count < 2 || detail::is_degenerate(mu.points))
    return detail::degenerate_estimate(EstimatorMethod::correlation, count);

  const std::vector<double> cumulative = detail::cumulative_weights(mu.weights);
  const std::size_t shards = detail::kPairShards;
  std::vector<std::vector<double>> shard_distances(shards);
  parallel_for(shards, options.threads, [&](std::size_t shard) {
    Engine rng = make_engine(options.seed, shard);
    const std::size_t pairs = options.pair_budget / shards + (shard < options.pair_budget % shards ? 1 : 0);
    auto& out = shard_distances[shard];
    out.reserve(pairs);
    while (out.size() < pairs) {
      const std::size_t i = detail::sample_index(cumulative, uniform01(rng));
      const std::size_t j = detail::sample_index(cumulative, uniform01(rng));
      if (i == j) continue;
      out.push_back((mu.points.row(static_cast<Eigen::Index>(i)) - mu.points.row(static_cast<Eigen::Index>(j))).norm());
    }
  });
  std::vector<double> distances;
  distances.reserve(options.pair_budget);
  for (const auto& d : shard_distances) distances.insert(distances.end(), d.begin(), d.end());
  std::sort(distances.begin(), distances.end());
  const double total = static_cast<double>(distances.size());
  const double dmax = distances.back();

  DimensionEstimate e;
  e.method = EstimatorMethod::correlation;
  e.point_count = count;
  if (count < 1000) e.warning = "fewer than 1000 points";
  if (dmax <= 0.0) return detail::degenerate_estimate(EstimatorMethod::correlation, count);

  const std::vector<double> radii = geometric_scales(dmax, dmax * 1e-5, options.radii);
  std::vector<double> hits;
  for (double r : radii)
    hits.push_back(static_cast<double>(std::upper_bound(distances.begin(), distances.end(), r) - distances.begin()));
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < radii.size(); ++i) {
    e.fit_data.push_back({radii[i], hits[i] / total, false});
    x.push_back(std::log(radii[i]));
    y.push_back(std::log(std::max(hits[i], 1.0) / total));
  }
  // Radii descend: skip saturated coarse radii, stop at the pair-count floor.
  auto admissible = [&](double max_fraction) {
    const std::size_t last = radii.size() - 2;
    std::size_t a = 0;
    while (a < last && hits[a] / total > max_fraction) ++a;
    std::size_t b = a;
    while (b < last && hits[b] >= static_cast<double>(options.min_pairs)) ++b;
    return std::pair{a, b};
  };
  auto [first, end] = admissible(options.max_fraction);
  std::optional<LinearFit> fit = best_window(x, y, first, end, options.min_window);
  if (!fit) {
    std::tie(first, end) = admissible(1.0);
    fit = best_window(x, y, first, end, 4);
    if (!fit) {
      // C(r) flat below the smallest separation: atomic at resolved scales.
      e.warning = distances.front() > dmax * 1e-3 ? "atomic at resolved scales" : "no resolvable scaling window";
      return e;
    }
    e.warning = "saturation cut relaxed";
  }
  e.value = std::max(0.0, fit->slope);
  e.slope_stderr = fit->slope_stderr;
  e.r_squared = fit->r_squared;
  e.scales_used = fit->count;
  e.scale_max = radii[fit->first];
  e.scale_min = radii[fit->first + fit->count - 1];
  for (std::size_t i = fit->first; i < fit->first + fit->count; ++i) e.fit_data[i].used = true;
  return e;
}

struct EnergyDiagnostic {
  bool finite_trend = false;
  std::vector<std::size_t> sizes;
  std::vector<double> values;
  std::size_t clipped_pairs = 0;
  std::size_t total_pairs = 0;
  bool clipped_flag = false;  // clipped pairs exceed 0.1% of all pairs
};

/// Discrete t-energy sum_{i != j} w_i w_j |x_i - x_j|^-t on nested
/// subsamples of sizes subsample/256, subsample/16 and subsample. Values that
/// stabilize (last ratio < 1.5) indicate I_t(mu) < infinity.
inline EnergyDiagnostic energy_diagnostic(const SampledMeasure& mu, double t, std::size_t subsample,
                                          std::uint64_t seed) {
  detail::require(mu.size() >= 1, "energy_diagnostic: empty measure");
  detail::require(t > 0.0, "energy_diagnostic: need t > 0");
  detail::require(subsample >= 1024, "energy_diagnostic: subsample must be at least 1024");
  constexpr double kDistanceFloor = 1e-12;
  const std::vector<double> cumulative = detail::cumulative_weights(mu.weights);
  Engine rng = make_engine(seed, 0);
  std::vector<std::size_t> picks(subsample);
  for (auto& p : picks) p = detail::sample_index(cumulative, uniform01(rng));

  EnergyDiagnostic out;
  for (std::size_t size : {subsample / 256, subsample / 16, subsample}) {
    double sum = 0.0;
    for (std::size_t a = 0; a < size; ++a) {
      const auto xa = mu.points.row(static_cast<Eigen::Index>(picks[a]));
      for (std::size_t b = a + 1; b < size; ++b) {
        if (picks[a] == picks[b]) continue;  // same atom: a self-pair
        double dist = (xa - mu.points.row(static_cast<Eigen::Index>(picks[b]))).norm();
        if (dist < kDistanceFloor) {
          dist = kDistanceFloor;
          ++out.clipped_pairs;
        }
        sum += 2.0 * std::pow(dist, -t);
      }
      out.total_pairs += size - a - 1;
    }
    out.sizes.push_back(size);
    out.values.push_back(sum / (static_cast<double>(size) * static_cast<double>(size)));
  }
  out.clipped_flag = static_cast<double>(out.clipped_pairs) > 1e-3 * static_cast<double>(out.total_pairs);
  const double ratio = out.values.back() / out.values[out.values.size() - 2];
  out.finite_trend = ratio < 1.5;
  return out;
}

}  // namespace projlab
