#pragma once

// Property suites behind `projlab verify`. Each suite returns its raw
// statistics so tests can assert on them with their own tolerances; the
// verify table turns them into pass/fail rows. All suites use fixed
// internal seeds.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "projlab/bounds.hpp"
#include "projlab/dimest.hpp"
#include "projlab/family.hpp"
#include "projlab/fractal.hpp"
#include "projlab/grassmann.hpp"
#include "projlab/multivec.hpp"
#include "projlab/oracles.hpp"
#include "projlab/random.hpp"
#include "projlab/regression.hpp"
#include "projlab/transversality.hpp"
#include "projlab/witness.hpp"

namespace projlab::checks {

using PFunction = std::function<int(int n, int m, int k, int l)>;

inline int default_p(int n, int m, int k, int l) { return p_of_l(n, m, k, l); }

/// Range of the exhaustive scans: 2 <= n <= max_n, 1 <= m <= n-1,
/// 1 <= k <= m(n-m)-1, 0 <= l <= m-1.
template <class Fn>
void for_each_tuple(int max_n, Fn&& fn) {
  for (int n = 2; n <= max_n; ++n)
    for (int m = 1; m < n; ++m)
      for (int k = 1; k < m * (n - m); ++k)
        for (int l = 0; l < m; ++l) fn(n, m, k, l);
}

inline std::string tuple_text(int n, int m, int k, int l) {
  std::ostringstream s;
  s << "(n=" << n << ",m=" << m << ",k=" << k << ",l=" << l << ")";
  return s.str();
}

struct PEnumerationStats {
  long tuples = 0;
  long mismatches = 0;
  long monotone_breaks = 0;
  std::string first_mismatch;
};

inline PEnumerationStats p_enumeration(const PFunction& p = default_p, int max_n = 8) {
  PEnumerationStats out;
  for_each_tuple(max_n, [&](int n, int m, int k, int l) {
    ++out.tuples;
    const int got = p(n, m, k, l);
    const int want = oracle::dot_filling_p(n, m, k, l);
    if (got != want) {
      if (out.mismatches++ == 0)
        out.first_mismatch = tuple_text(n, m, k, l) + ": p=" + std::to_string(got) + " oracle=" + std::to_string(want);
    }
    if (l > 0 && p(n, m, k, l - 1) > got) ++out.monotone_breaks;
  });
  return out;
}

struct KLimitsStats {
  long tuples = 0;      // tuples scanned
  long failures = 0;    // tuples where the double inequality fails
  long saturated = 0;   // tuples with p = n - m
  long saturated_failures = 0;
  std::string first_failure;
};

/// Scans l(n-m) + (n-m-p-1)(m-l) < k <= l(n-m) + (n-m-p)(m-l) with p from
/// `p`. With only_unsaturated, tuples with p = n - m are skipped; the
/// inequality is only meaningful when p < n - m.
inline KLimitsStats k_limits_scan(bool only_unsaturated, const PFunction& p = default_p, int max_n = 8) {
  KLimitsStats out;
  for_each_tuple(max_n, [&](int n, int m, int k, int l) {
    const int pv = p(n, m, k, l);
    const bool saturated = pv == n - m;
    if (saturated) ++out.saturated;
    if (saturated && only_unsaturated) return;
    ++out.tuples;
    const KLimits lim = k_limits(n, m, k, l, pv);
    if (!lim.holds) {
      if (saturated) ++out.saturated_failures;
      if (out.failures++ == 0) out.first_failure = tuple_text(n, m, k, l) + ": " + lim.describe() + ", p=" + std::to_string(pv);
    }
  });
  return out;
}

struct MultivecStats {
  int cases = 0;
  double worst_gram_vs_minors = 0.0;  // |gram - cauchy_binet| / (1 + gram)
  double worst_det = 0.0;             // |wedge_n - |det|| / (1 + |det|)
  double worst_wedge_bound = 0.0;     // max(0, ||^_r L v|| - ||^_r L||) over unit frames
};

/// Random integer matrices with entries in [-3, 3], r <= n <= 6.
inline MultivecStats multivec_oracle(int cases = 10000, std::uint64_t seed = 0xA11CE) {
  MultivecStats out;
  Engine rng = make_engine(seed, 0);
  std::uniform_int_distribution<int> entry(-3, 3);
  std::uniform_int_distribution<int> size(1, 6);
  for (int c = 0; c < cases; ++c) {
    const int n = size(rng);
    const int r = std::uniform_int_distribution<int>(1, n)(rng);
    Matrix rows(r, n);
    for (int a = 0; a < r; ++a)
      for (int b = 0; b < n; ++b) rows(a, b) = entry(rng);
    const SimpleMultivector v = SimpleMultivector::from_rows(rows);
    const double g = gram_norm(v);
    out.worst_gram_vs_minors = std::max(out.worst_gram_vs_minors, std::abs(g - cauchy_binet_norm(v)) / (1.0 + g));

    Matrix square(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) square(a, b) = entry(rng);
    const double det = std::abs(oracle::leibniz_det(square));
    out.worst_det = std::max(out.worst_det, std::abs(wedge_operator_norm(square, n) - det) / (1.0 + det));

    const Matrix frame = random_orthonormal(rng, n, r);
    const double image = gram_norm(wedge_apply(square, SimpleMultivector::from_columns(frame)));
    out.worst_wedge_bound = std::max(out.worst_wedge_bound, image - wedge_operator_norm(square, r) * (1.0 + 1e-12));
    ++out.cases;
  }
  return out;
}

struct OrderStats {
  int cases = 0;
  int exact = 0;  // cases whose differences sat at rounding level for every step
  double min_order = std::numeric_limits<double>::infinity();
  std::string worst_case;
};

inline Chart random_chart(Engine& rng, int n, int m) {
  const Matrix q = random_orthonormal(rng, n, n);
  return Chart(Frame::from_basis(q.leftCols(m)), Frame::from_basis(q.rightCols(n - m)));
}

/// Analytic d Pi z / d alpha_ij at alpha = 0 against central differences.
inline OrderStats tangent_fd_order(int cases = 100, std::uint64_t seed = 0xD1FF,
                                   const std::vector<double>& steps = {1e-2, 1e-3, 1e-4}) {
  OrderStats out;
  Engine rng = make_engine(seed, 0);
  for (int c = 0; c < cases; ++c) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const int i = std::uniform_int_distribution<int>(0, m - 1)(rng);
    const int j = std::uniform_int_distribution<int>(m, n - 1)(rng);
    const Chart chart = random_chart(rng, n, m);
    const Vector z = gaussian_vector(rng, n);
    const Vector analytic = tangent_projection_derivative(ChartPoint::origin(chart), i, j, z);
    auto f = [&](double beta) {
      Matrix alpha = Matrix::Zero(m, n - m);
      alpha(i, j - m) = beta;
      return Vector(projector(chart_point_frame(ChartPoint(chart, alpha))) * z);
    };
    std::vector<double> lx;
    std::vector<double> ly;
    bool exact = true;
    for (double h : steps) {
      const double err = (oracle::central_difference(f, 0.0, h) - analytic).norm();
      exact = exact && err <= 1e-12 * (1.0 + z.norm());
      lx.push_back(std::log(h));
      ly.push_back(std::log(std::max(err, 1e-300)));
    }
    ++out.cases;
    if (exact) {
      ++out.exact;
      continue;
    }
    const double order = least_squares(lx, ly).slope;
    if (order < out.min_order) {
      out.min_order = order;
      out.worst_case = "n=" + std::to_string(n) + " m=" + std::to_string(m) + " slot=(" + std::to_string(i) + "," +
                       std::to_string(j) + ")";
    }
  }
  return out;
}

/// Random smooth paths s -> span(V0 + (s-c) B1 + (s-c)^2 B2) with n <= 5 and
/// a random U inside V_c^perp.
inline OrderStats extended_derivative_paths(int paths = 20, std::uint64_t seed = 0xE7D) {
  OrderStats out;
  Engine rng = make_engine(seed, 0);
  for (int c = 0; c < paths; ++c) {
    const int n = std::uniform_int_distribution<int>(3, 5)(rng);
    const int m = std::uniform_int_distribution<int>(1, n - 2)(rng);
    const int q = std::uniform_int_distribution<int>(1, n - m - 1)(rng);
    const double center = 2.0 * uniform01(rng) - 1.0;
    const Matrix v0 = random_orthonormal(rng, n, m);
    Matrix b1(n, m);
    Matrix b2(n, m);
    for (int col = 0; col < m; ++col) {
      b1.col(col) = gaussian_vector(rng, n);
      b2.col(col) = gaussian_vector(rng, n);
    }
    const PlanePath path = [=](double s) {
      const double d = s - center;
      return Matrix(v0 + d * b1 + d * d * b2);
    };
    const Frame perp = complement(Frame::from_basis(v0));
    const Matrix u = perp.basis() * random_orthonormal(rng, n - m, q);
    ExtendedDerivativeOptions options;
    options.seed = derive_seed(seed, static_cast<std::uint64_t>(c));
    const ExtendedDerivativeResult r = extended_plane_derivative_check(path, center, u, options);
    ++out.cases;
    if (std::isinf(r.order)) {
      ++out.exact;
      continue;
    }
    if (r.order < out.min_order) {
      out.min_order = r.order;
      out.worst_case = "n=" + std::to_string(n) + " m=" + std::to_string(m) + " dim U=" + std::to_string(q);
    }
  }
  return out;
}

/// A random rotation-schedule family: random chart, each parameter driving
/// one or two slots with weights in [0.5, 1].
inline FamilySpec random_family(Engine& rng, int n, int m, int k, double radius = 0.3) {
  FamilySpec spec;
  spec.n = n;
  spec.m = m;
  spec.k = k;
  spec.chart = random_chart(rng, n, m);
  const int slots = m * (n - m);
  for (int a = 0; a < k; ++a) {
    const int count = std::uniform_int_distribution<int>(1, std::min(2, slots))(rng);
    std::vector<int> picked;
    while (static_cast<int>(picked.size()) < count) {
      const int s = std::uniform_int_distribution<int>(0, slots - 1)(rng);
      if (std::find(picked.begin(), picked.end(), s) == picked.end()) picked.push_back(s);
    }
    for (int s : picked) spec.schedule.push_back({a, s / (n - m), m + s % (n - m), 0.5 + 0.5 * uniform01(rng)});
  }
  Matrix reach = Matrix::Zero(m, n - m);
  for (const auto& e : spec.schedule) reach(e.i, e.j - m) += std::abs(e.weight);
  spec.radii.assign(static_cast<std::size_t>(k), std::min(radius, 0.95 * kChartLimit / reach.maxCoeff()));
  spec.validate();
  return spec;
}

inline Vector random_site(Engine& rng, const PlaneFamily& family, double fraction = 0.5) {
  Vector site = family.domain_center();
  const Vector r = family.domain_radii();
  for (Eigen::Index a = 0; a < site.size(); ++a) site[a] += fraction * r[a] * (2.0 * uniform01(rng) - 1.0);
  return site;
}

struct ProjboundStats {
  int cases = 0;
  int comparisons = 0;
  double worst_shortfall = -std::numeric_limits<double>::infinity();  // max of rhs - lhs
};

/// ||^_r D Pi(z1 + z2)|| >= ||^_r D Pi(z2)|| for z1 in V, z2 in V^perp, all r.
inline ProjboundStats projbound(int cases = 100, std::uint64_t seed = 0xB0B) {
  ProjboundStats out;
  Engine rng = make_engine(seed, 0);
  for (int c = 0; c < cases; ++c) {
    const int n = std::uniform_int_distribution<int>(2, 6)(rng);
    const int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
    if (m * (n - m) < 2) {
      --c;
      continue;
    }
    const int k = std::uniform_int_distribution<int>(1, m * (n - m) - 1)(rng);
    const RotationFamily family(random_family(rng, n, m, k));
    const Vector site = random_site(rng, family);
    const Frame v = family.plane(site);
    const Frame perp = complement(v);
    const Vector z1 = v.basis() * gaussian_vector(rng, m);
    const Vector z2 = perp.basis() * gaussian_vector(rng, n - m);
    const Matrix full = projection_jacobian(family, site, z1 + z2);
    const Matrix part = projection_jacobian(family, site, z2);
    for (int r = 1; r <= std::min(n, k); ++r) {
      const double lhs = wedge_operator_norm(full, r);
      const double rhs = wedge_operator_norm(part, r);
      out.worst_shortfall = std::max(out.worst_shortfall, rhs - lhs);
      ++out.comparisons;
    }
    ++out.cases;
  }
  return out;
}

struct JacobianFdStats {
  int cases = 0;
  double worst_error = 0.0;
};

/// family_jacobian maps against central differences of Pi_{V_lambda} u_q.
inline JacobianFdStats jacobian_fd(int cases = 40, std::uint64_t seed = 0x7AC, double h = 1e-5) {
  JacobianFdStats out;
  Engine rng = make_engine(seed, 0);
  for (int c = 0; c < cases; ++c) {
    const int n = std::uniform_int_distribution<int>(3, 6)(rng);
    const int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
    const int k = std::uniform_int_distribution<int>(1, m * (n - m) - 1)(rng);
    const RotationFamily family(random_family(rng, n, m, k));
    const Vector site = random_site(rng, family);
    const FamilyJacobian jac = family_jacobian(family, site);
    const Matrix& v = jac.plane.basis();
    const Matrix& u = jac.plane_complement.basis();
    for (int a = 0; a < k; ++a) {
      Vector plus = site;
      Vector minus = site;
      plus[a] += h;
      minus[a] -= h;
      const Matrix dp = (projector(family.plane(plus)) - projector(family.plane(minus))) / (2.0 * h);
      const Matrix fd = v.transpose() * dp * u;
      out.worst_error = std::max(out.worst_error, (fd - jac.maps[static_cast<std::size_t>(a)]).cwiseAbs().maxCoeff());
    }
    ++out.cases;
  }
  return out;
}

struct KeyInequalityStats {
  int families = 0;
  int points = 0;
  double worst_ratio = std::numeric_limits<double>::infinity();  // min of lhs / (d'/sqrt(t)^p |z|^r)
  std::string worst_case;
};

/// On extended families at their site, ||^_r D Pi(z)|| >= d'/sqrt(t)^p |z|^r
/// for sphere-sampled z in W, r = l + 1 + p.
inline KeyInequalityStats key_inequality(std::uint64_t seed = 0x6E7, int sphere_points = 64) {
  struct Case {
    int n, m, k, l;
  };
  const std::vector<Case> panel{{4, 2, 3, 1}, {5, 2, 4, 1}, {5, 3, 4, 1}, {4, 2, 2, 0}, {5, 2, 5, 1}};
  KeyInequalityStats out;
  Engine rng = make_engine(seed, 0);
  for (std::size_t c = 0; c < panel.size(); ++c) {
    const auto [n, m, k, l] = panel[c];
    // Redraw until the random schedule is non-degenerate.
    std::shared_ptr<RotationFamily> base;
    for (int attempt = 0; attempt < 50 && !base; ++attempt) {
      auto candidate = std::make_shared<RotationFamily>(random_family(rng, n, m, k));
      if (nondegeneracy_check(*candidate, candidate->domain_center()).pass) base = std::move(candidate);
    }
    if (!base) continue;
    WitnessOptions options;
    options.trials = 40;
    options.sphere_samples = 128;
    options.seed = derive_seed(seed, c);
    options.threads = 1;
    const ExtensionResult ext = extend_family(base, base->domain_center(), l, options);
    if (!ext.extended) continue;
    ++out.families;
    const int r = ext.target_order;
    const double bound = ext.witness.d_prime / std::pow(std::sqrt(static_cast<double>(ext.t)), ext.p);
    const Matrix w_basis = ext.family->hat_basis().leftCols(ext.t);
    const Matrix sphere = sphere_sample(ext.t, sphere_points);
    for (Eigen::Index s = 0; s < sphere.cols(); ++s) {
      const double scale = 0.5 + uniform01(rng);
      const Vector z = scale * (w_basis * sphere.col(s));
      const Matrix d = projection_jacobian(*ext.family, ext.extended_site(), z);
      const double lhs = wedge_operator_norm(d, r);
      const double ratio = lhs / (bound * std::pow(z.norm(), r));
      if (ratio < out.worst_ratio) {
        out.worst_ratio = ratio;
        out.worst_case = tuple_text(n, m, k, l);
      }
      ++out.points;
    }
  }
  return out;
}

struct BoundCurveStats {
  long samples = 0;
  long monotone_breaks = 0;
  long band_breaks = 0;
};

/// theorem_lower_bound is nondecreasing in d and inside [max(0, d-(n-m)), min(d, m)].
inline BoundCurveStats bound_curve(int max_n = 8, int steps_per_unit = 20) {
  BoundCurveStats out;
  for (int n = 2; n <= max_n; ++n)
    for (int m = 1; m < n; ++m)
      for (int k = 1; k < m * (n - m); ++k) {
        double previous = -1.0;
        for (int s = 0; s <= n * steps_per_unit; ++s) {
          const double d = static_cast<double>(s) / steps_per_unit;
          const double b = theorem_lower_bound(n, m, k, d);
          if (b < previous - 1e-12) ++out.monotone_breaks;
          if (b < std::max(0.0, d - (n - m)) - 1e-12 || b > std::min(d, static_cast<double>(m)) + 1e-12)
            ++out.band_breaks;
          previous = b;
          ++out.samples;
        }
      }
  return out;
}

struct CalibrationStats {
  double four_corner_box = 0.0;   // box_counting_dim(four_corner_cantor(8))
  double cantor_corr = 0.0;       // correlation_dim(line_cantor(log2/log3, 10))
  double square_box = 0.0;        // box_counting_dim(uniform square, 1e5 points)
};

inline SampledMeasure uniform_square(std::size_t count, std::uint64_t seed) {
  SampledMeasure mu;
  mu.points.resize(static_cast<Eigen::Index>(count), 2);
  Engine rng = make_engine(seed, 0);
  for (Eigen::Index i = 0; i < mu.points.rows(); ++i) {
    mu.points(i, 0) = uniform01(rng);
    mu.points(i, 1) = uniform01(rng);
  }
  mu.weights = Vector::Constant(static_cast<Eigen::Index>(count), 1.0 / static_cast<double>(count));
  mu.nominal_dim = 2.0;
  mu.provenance = "uniform_square";
  return mu;
}

inline CalibrationStats calibration(int threads = 0, std::uint64_t seed = 0xCA1) {
  CalibrationStats out;
  BoxCountingOptions box;
  box.threads = threads;
  CorrelationOptions corr;
  corr.threads = threads;
  corr.seed = seed;
  out.four_corner_box = box_counting_dim(four_corner_cantor(8), box).value;
  out.cantor_corr = correlation_dim(line_cantor(std::log(2.0) / std::log(3.0), 10), corr).value;
  out.square_box = box_counting_dim(uniform_square(100000, seed), box).value;
  return out;
}

// ---------------------------------------------------------------------------

struct CheckRow {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SuiteOptions {
  std::string filter;  // substring of the row name; empty runs everything
  PFunction p = default_p;
  int threads = 0;
};

namespace detail {
inline Matrix gaussian_matrix(Engine& rng, int rows, int cols) {
  Matrix out(rows, cols);
  for (int c = 0; c < cols; ++c) out.col(c) = gaussian_vector(rng, rows);
  return out;
}

inline std::string num(double x) {
  std::ostringstream s;
  s.precision(4);
  s << x;
  return s.str();
}
}  // namespace detail

/// Runs every suite whose name contains options.filter.
inline std::vector<CheckRow> run_suite(const SuiteOptions& options = {}) {
  std::vector<CheckRow> rows;
  auto wanted = [&](const std::string& name) {
    return options.filter.empty() || name.find(options.filter) != std::string::npos;
  };
  auto add = [&](const std::string& name, auto&& body) {
    if (!wanted(name)) return;
    try {
      rows.push_back(body());
    } catch (const std::exception& e) {
      rows.push_back({name, false, std::string("error: ") + e.what()});
    }
    rows.back().name = name;
  };
  using detail::num;

  add("multivec.cauchy_binet", [] {
    const MultivecStats s = multivec_oracle();
    return CheckRow{"", s.worst_gram_vs_minors <= 1e-9, std::to_string(s.cases) + " cases, worst rel diff " + num(s.worst_gram_vs_minors)};
  });
  add("multivec.det_identity", [] {
    const MultivecStats s = multivec_oracle();
    return CheckRow{"", s.worst_det <= 1e-9 && s.worst_wedge_bound <= 1e-9,
                    "worst rel |det| diff " + num(s.worst_det) + ", wedge bound excess " + num(s.worst_wedge_bound)};
  });
  add("multivec.perp_factor", [] {
    Engine rng = make_engine(0x9E49, 0);
    int failures = 0;
    for (int c = 0; c < 200; ++c) {
      const int n = std::uniform_int_distribution<int>(2, 6)(rng);
      const int a = std::uniform_int_distribution<int>(1, n - 1)(rng);
      const int b = std::uniform_int_distribution<int>(1, n - a)(rng);
      const Matrix q = random_orthonormal(rng, n, n);
      const Matrix left = q.leftCols(a) * detail::gaussian_matrix(rng, a, a);
      const Matrix right = q.middleCols(a, b) * detail::gaussian_matrix(rng, b, b);
      std::vector<Vector> v;
      std::vector<Vector> u;
      for (int i = 0; i < a; ++i) v.emplace_back(left.col(i));
      for (int i = 0; i < b; ++i) u.emplace_back(right.col(i));
      if (!perp_factor_check(v, u)) ++failures;
    }
    return CheckRow{"", failures == 0, "200 random perpendicular pairs, " + std::to_string(failures) + " failures"};
  });
  add("grassmann.tangent_order", [] {
    const OrderStats s = tangent_fd_order();
    return CheckRow{"", s.min_order >= 1.9, std::to_string(s.cases) + " cases, min order " + num(s.min_order) +
                                                (s.exact ? ", " + std::to_string(s.exact) + " exact" : "")};
  });
  add("grassmann.complement_projector", [] {
    Engine rng = make_engine(0xC0B, 0);
    double worst = 0.0;
    for (int c = 0; c < 100; ++c) {
      const int n = std::uniform_int_distribution<int>(2, 8)(rng);
      const int m = std::uniform_int_distribution<int>(1, n - 1)(rng);
      const Frame f = Frame::from_basis(random_orthonormal(rng, n, m));
      const Matrix diff = projector(complement(f)) - (Matrix::Identity(n, n) - projector(f));
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    return CheckRow{"", worst <= 1e-10, "worst entry " + num(worst)};
  });
  add("family.p_enumeration", [&] {
    const PEnumerationStats s = p_enumeration(options.p);
    return CheckRow{"", s.mismatches == 0, std::to_string(s.tuples) + " tuples, " + std::to_string(s.mismatches) +
                                               " mismatches" + (s.mismatches ? " first " + s.first_mismatch : "")};
  });
  add("family.p_monotone", [&] {
    const PEnumerationStats s = p_enumeration(options.p);
    return CheckRow{"", s.monotone_breaks == 0, std::to_string(s.monotone_breaks) + " decreasing steps"};
  });
  add("family.klimits", [&] {
    const KLimitsStats s = k_limits_scan(true, options.p);
    return CheckRow{"", s.failures == 0, std::to_string(s.tuples) + " tuples with p < n-m, " +
                                             std::to_string(s.failures) + " failures" +
                                             (s.failures ? " first " + s.first_failure : "")};
  });
  add("family.bound_curve", [] {
    const BoundCurveStats s = bound_curve();
    return CheckRow{"", s.monotone_breaks == 0 && s.band_breaks == 0,
                    std::to_string(s.samples) + " samples, " + std::to_string(s.monotone_breaks) + " decreasing, " +
                        std::to_string(s.band_breaks) + " outside the natural band"};
  });
  add("family.jacobian_fd", [] {
    const JacobianFdStats s = jacobian_fd();
    return CheckRow{"", s.worst_error <= 1e-7, std::to_string(s.cases) + " families, worst entry " + num(s.worst_error)};
  });
  add("family.projbound", [] {
    const ProjboundStats s = projbound();
    return CheckRow{"", s.worst_shortfall <= 1e-9,
                    std::to_string(s.comparisons) + " comparisons, worst shortfall " + num(s.worst_shortfall)};
  });
  add("family.extendedder", [] {
    const OrderStats s = extended_derivative_paths();
    return CheckRow{"", s.min_order >= 1.9, std::to_string(s.cases) + " paths, min order " + num(s.min_order)};
  });
  add("family.key_inequality", [] {
    const KeyInequalityStats s = key_inequality();
    return CheckRow{"", s.points > 0 && s.worst_ratio >= 1.0 - 1e-9,
                    std::to_string(s.families) + " extended families, " + std::to_string(s.points) +
                        " points, worst ratio " + num(s.worst_ratio)};
  });
  add("dimest.calibration", [&] {
    const CalibrationStats s = calibration(options.threads);
    const bool pass = s.four_corner_box >= 0.9 && s.four_corner_box <= 1.1 && s.cantor_corr >= 0.58 &&
                      s.cantor_corr <= 0.68 && s.square_box >= 1.9 && s.square_box <= 2.1;
    return CheckRow{"", pass, "four-corner box " + num(s.four_corner_box) + ", middle-thirds corr " + num(s.cantor_corr) +
                                  ", square box " + num(s.square_box)};
  });
  return rows;
}

inline std::string suite_tsv(const std::vector<CheckRow>& rows) {
  std::string out = "check\tresult\tdetail\n";
  for (const auto& r : rows) out += r.name + "\t" + (r.pass ? "pass" : "FAIL") + "\t" + r.detail + "\n";
  return out;
}

}  // namespace projlab::checks
