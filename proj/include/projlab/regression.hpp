#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>

#include "projlab/errors.hpp"

namespace projlab {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  std::size_t first = 0;  // index of the first point used
  std::size_t count = 0;  // number of consecutive points used
};

/// Ordinary least squares y = slope * x + intercept.
inline LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  detail::require(x.size() == y.size(), "least_squares: size mismatch");
  detail::require(x.size() >= 2, "least_squares: need at least two points");
  const auto n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  detail::require(sxx > 0, "least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.count = x.size();
  const double ss_res = std::max(0.0, syy - fit.slope * sxy);
  // A flat response is fitted exactly by slope 0.
  fit.r_squared = syy > 0 ? 1.0 - ss_res / syy : 1.0;
  fit.slope_stderr = x.size() > 2 ? std::sqrt(ss_res / (n - 2) / sxx) : 0.0;
  return fit;
}

/// Best contiguous window inside [lo, hi) with at least min_len points:
/// windows no shorter than half the admissible range compete on r^2.
inline std::optional<LinearFit> best_window(std::span<const double> x, std::span<const double> y,
                                            std::size_t lo, std::size_t hi, std::size_t min_len) {
  if (hi <= lo || hi - lo < min_len) return std::nullopt;
  const std::size_t span_len = hi - lo;
  const std::size_t shortest = std::max(min_len, (span_len + 1) / 2);
  std::optional<LinearFit> best;
  for (std::size_t len = shortest; len <= span_len; ++len) {
    for (std::size_t start = lo; start + len <= hi; ++start) {
      LinearFit fit = least_squares(x.subspan(start, len), y.subspan(start, len));
      fit.first = start;
      if (!best || fit.r_squared > best->r_squared + 1e-12 ||
          (std::abs(fit.r_squared - best->r_squared) <= 1e-12 && len > best->count)) {
        best = fit;
      }
    }
  }
  return best;
}

}  // namespace projlab
