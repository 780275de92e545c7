#pragma once

// The defect function p(l) and the almost-sure lower bound it induces for
// the dimension of projected measures.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "projlab/errors.hpp"

namespace projlab {

/// ]x]: the smallest integer q >= 0 with x <= q.
inline std::int64_t bracket_ceil(double x) {
  detail::require(std::isfinite(x), "bracket_ceil: x must be finite");
  return x <= 0.0 ? 0 : static_cast<std::int64_t>(std::ceil(x));
}

/// ]num/den] in exact integer arithmetic (den > 0).
inline std::int64_t bracket_ceil(std::int64_t num, std::int64_t den) {
  detail::require(den > 0, "bracket_ceil: denominator must be positive");
  if (num <= 0) return 0;
  return (num + den - 1) / den;
}

inline void check_family_dims(int n, int m, int k) {
  detail::require(0 < m && m < n, "need 0 < m < n");
  detail::require(0 < k && k < m * (n - m), "need 0 < k < m(n - m)");
}

/// p(l) = n - m - ](k - l(n - m)) / (m - l)], l = 0..m-1.
inline int p_of_l(int n, int m, int k, int l) {
  check_family_dims(n, m, k);
  detail::require(0 <= l && l < m, "p_of_l: need 0 <= l <= m - 1");
  const std::int64_t q = bracket_ceil(static_cast<std::int64_t>(k) - static_cast<std::int64_t>(l) * (n - m),
                                      static_cast<std::int64_t>(m - l));
  return static_cast<int>(n - m - q);
}

struct BoundTable {
  int n = 0;
  int m = 0;
  int k = 0;
  std::vector<int> p;                 // p(0..m-1)
  std::vector<double> breakpoints;    // where the bound changes branch, ascending
  double absolute_continuity = 0.0;   // p(m-1) + m
};

inline BoundTable bound_table(int n, int m, int k) {
  check_family_dims(n, m, k);
  BoundTable table{n, m, k, {}, {}, 0.0};
  for (int l = 0; l < m; ++l) table.p.push_back(p_of_l(n, m, k, l));
  for (int l = 0; l < m; ++l) {
    table.breakpoints.push_back(table.p[static_cast<std::size_t>(l)] + l);
    table.breakpoints.push_back(table.p[static_cast<std::size_t>(l)] + l + 1);
  }
  table.absolute_continuity = table.p.back() + m;
  std::sort(table.breakpoints.begin(), table.breakpoints.end());
  table.breakpoints.erase(std::unique(table.breakpoints.begin(), table.breakpoints.end()),
                          table.breakpoints.end());
  return table;
}

/// Lower bound for dim (Pi_{V_lambda})_* mu valid for almost every lambda
/// of a non-degenerate k-parameter family, given d = dim mu.
///
/// For each l the branch d - p(l) applies on [p(l)+l, p(l)+l+1] and the
/// flat branch l+1 on [p(l)+l+1, p(l+1)+l+1]. The flat branch at l = m-1
/// would need p(m), which is undefined; it is closed at the absolute
/// continuity threshold p(m-1)+m, beyond which the bound is m. The result
/// is clamped to the trivial band [max(0, d-(n-m)), min(d, m)].
inline double theorem_lower_bound(int n, int m, int k, double d) {
  check_family_dims(n, m, k);
  detail::require(std::isfinite(d) && d >= 0.0 && d <= n, "theorem_lower_bound: need 0 <= d <= n");
  const BoundTable table = bound_table(n, m, k);
  const double floor_bound = std::max(0.0, d - (n - m));
  const double ceiling = std::min(d, static_cast<double>(m));
  double best = floor_bound;
  for (int l = 0; l < m; ++l) {
    const double p = table.p[static_cast<std::size_t>(l)];
    if (p + l <= d && d <= p + l + 1) best = std::max(best, d - p);
    const double flat_top = l + 1 < m ? table.p[static_cast<std::size_t>(l + 1)] + l + 1
                                      : table.absolute_continuity;
    if (p + l + 1 <= d && d <= flat_top) best = std::max(best, static_cast<double>(l + 1));
  }
  if (d > table.absolute_continuity) best = m;
  return std::min(best, ceiling);
}

/// Lower and upper inequalities relating k to p = p(l):
///   l(n-m) + (n-m-p-1)(m-l) < k <= l(n-m) + (n-m-p)(m-l).
struct KLimits {
  long lower = 0;  // strict
  long upper = 0;
  bool holds = false;
  std::string describe() const {
    return std::to_string(lower) + " < k <= " + std::to_string(upper);
  }
};

inline KLimits k_limits(int n, int m, int k, int l, int p) {
  KLimits out;
  out.lower = static_cast<long>(l) * (n - m) + static_cast<long>(n - m - p - 1) * (m - l);
  out.upper = static_cast<long>(l) * (n - m) + static_cast<long>(n - m - p) * (m - l);
  out.holds = out.lower < k && k <= out.upper;
  return out;
}

}  // namespace projlab
