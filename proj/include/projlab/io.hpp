#pragma once

// JSON and CSV interchange: family specs, measure specs, sampled measures,
// dimension estimates and their fit data.
//
// JSON indices (param, i, j) are 1-based, matching the usual e_1..e_n
// naming; the C++ API is 0-based.

#include <Eigen/Dense>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"
#include "projlab/dimest.hpp"
#include "projlab/errors.hpp"
#include "projlab/family.hpp"
#include "projlab/fractal.hpp"
#include "projlab/grassmann.hpp"

namespace projlab {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw InputError(where + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T get_as(const Json& j, const char* key, const std::string& where) {
  try {
    return field(j, key, where).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(where + ": field '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

template <class T>
T get_or(const Json& j, const char* key, T fallback, const std::string& where) {
  return j.is_object() && j.contains(key) ? get_as<T>(j, key, where) : fallback;
}

inline Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InputError(where + ": expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InputError(where + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

/// A list of vectors in R^n becomes the columns of an n x count matrix.
inline Matrix columns_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw InputError(where + ": expected a non-empty list of vectors");
  std::vector<Vector> cols;
  for (const auto& v : j) cols.push_back(vector_from_json(v, where));
  const auto n = cols.front().size();
  Matrix out(n, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (cols[c].size() != n) throw InputError(where + ": vectors of different lengths");
    out.col(static_cast<Eigen::Index>(c)) = cols[c];
  }
  return out;
}

inline Json columns_to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index c = 0; c < m.cols(); ++c) out.push_back(vector_to_json(m.col(c)));
  return out;
}

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

/// Shortest text that reads back to exactly x.
inline std::string format_double(double x) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace detail

inline Json parse_json(const std::string& text, const std::string& where) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(where + ": invalid JSON (" + e.what() + ")");
  }
}

inline Json read_json_file(const std::string& path) { return parse_json(detail::read_text(path), path); }

// ---------------------------------------------------------------------------
// Family specifications.

inline Json to_json(const FamilySpec& spec) {
  Json j;
  j["n"] = spec.n;
  j["m"] = spec.m;
  j["k"] = spec.k;
  const Chart standard = Chart::standard(spec.n, spec.m);
  if (spec.chart.coordinates() == standard.coordinates()) {
    j["base"] = "standard";
  } else {
    j["base"] = detail::columns_to_json(spec.chart.base().basis());
    j["complement"] = detail::columns_to_json(spec.chart.base_complement().basis());
  }
  Json schedule = Json::array();
  for (const auto& e : spec.schedule)
    schedule.push_back({{"param", e.param + 1}, {"i", e.i + 1}, {"j", e.j + 1}, {"weight", e.weight}});
  j["schedule"] = schedule;
  j["radii"] = spec.radii;
  return j;
}

inline FamilySpec family_from_json(const Json& j) {
  const std::string where = "family";
  FamilySpec spec;
  spec.n = detail::get_as<int>(j, "n", where);
  spec.m = detail::get_as<int>(j, "m", where);
  spec.k = detail::get_as<int>(j, "k", where);
  check_family_dims(spec.n, spec.m, spec.k);
  const Json& base = detail::field(j, "base", where);
  if (base.is_string()) {
    if (base.get<std::string>() != "standard") throw InputError(where + ": base must be \"standard\" or a list of vectors");
    spec.chart = Chart::standard(spec.n, spec.m);
  } else {
    const Frame b = Frame::from_basis(detail::columns_from_json(base, where + ".base"), 1e-10);
    detail::require(b.ambient_dim() == spec.n && b.plane_dim() == spec.m, where + ": base must hold m vectors in R^n");
    if (j.contains("complement")) {
      spec.chart = Chart(b, Frame::from_basis(detail::columns_from_json(j.at("complement"), where + ".complement"), 1e-10));
    } else {
      spec.chart = Chart(b);
    }
  }
  const Json& schedule = detail::field(j, "schedule", where);
  if (!schedule.is_array()) throw InputError(where + ": schedule must be a list");
  for (const auto& e : schedule) {
    ScheduleEntry entry;
    entry.param = detail::get_as<int>(e, "param", where + ".schedule") - 1;
    entry.i = detail::get_as<int>(e, "i", where + ".schedule") - 1;
    entry.j = detail::get_as<int>(e, "j", where + ".schedule") - 1;
    entry.weight = detail::get_or<double>(e, "weight", 1.0, where + ".schedule");
    spec.schedule.push_back(entry);
  }
  if (j.contains("radii")) {
    spec.radii = detail::get_as<std::vector<double>>(j, "radii", where);
  } else {
    spec.radii.assign(static_cast<std::size_t>(spec.k), detail::get_as<double>(j, "radius", where));
  }
  spec.validate();
  return spec;
}

// ---------------------------------------------------------------------------
// Measure specifications.

inline Json to_json(const MeasureSpec& spec);

namespace detail {
inline Json embedded_to_json(const EmbeddedSpec& e) {
  Json j;
  j["inner"] = to_json(*e.inner);
  j["basis"] = columns_to_json(e.basis);
  j["offset"] = vector_to_json(e.offset);
  return j;
}
}  // namespace detail

inline Json to_json(const MeasureSpec& spec) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, FourCornerCantorSpec>) {
          return {{"type", "four_corner_cantor"}, {"level", v.level}};
        } else if constexpr (std::is_same_v<T, LineCantorSpec>) {
          return {{"type", "line_cantor"}, {"s", v.s}, {"level", v.level}};
        } else if constexpr (std::is_same_v<T, LebesgueBallSpec>) {
          return {{"type", "lebesgue_ball"}, {"dim", v.dim}, {"points", v.points}};
        } else if constexpr (std::is_same_v<T, AtomSpec>) {
          return {{"type", "atom"}, {"dim", v.dim}};
        } else if constexpr (std::is_same_v<T, EmbeddedSpec>) {
          Json j = detail::embedded_to_json(v);
          j["type"] = "embedded";
          return j;
        } else {
          Json parts = Json::array();
          for (const auto& p : v.parts) parts.push_back(detail::embedded_to_json(p));
          return {{"type", "product"}, {"points", v.points}, {"parts", parts}};
        }
      },
      spec.variant);
}

inline MeasureSpec measure_from_json(const Json& j);

namespace detail {
inline EmbeddedSpec embedded_from_json(const Json& j, const std::string& where) {
  EmbeddedSpec e;
  e.inner = std::make_shared<MeasureSpec>(measure_from_json(field(j, "inner", where)));
  e.basis = columns_from_json(field(j, "basis", where), where + ".basis");
  e.offset = j.contains("offset") ? vector_from_json(j.at("offset"), where + ".offset") : Vector::Zero(e.basis.rows());
  require(e.basis.cols() == e.inner->ambient_dim(), where + ": basis needs one vector per inner dimension");
  require(e.offset.size() == e.basis.rows(), where + ": offset must live in the ambient space");
  return e;
}
}  // namespace detail

inline MeasureSpec measure_from_json(const Json& j) {
  const std::string where = "measure";
  const auto type = detail::get_as<std::string>(j, "type", where);
  MeasureSpec spec;
  if (type == "four_corner_cantor") {
    spec.variant = FourCornerCantorSpec{detail::get_or<int>(j, "level", 8, where)};
  } else if (type == "line_cantor") {
    spec.variant = LineCantorSpec{detail::get_as<double>(j, "s", where), detail::get_or<int>(j, "level", 10, where)};
  } else if (type == "lebesgue_ball") {
    spec.variant = LebesgueBallSpec{detail::get_as<int>(j, "dim", where),
                                    detail::get_or<std::size_t>(j, "points", 100000, where)};
  } else if (type == "atom") {
    spec.variant = AtomSpec{detail::get_or<int>(j, "dim", 1, where)};
  } else if (type == "embedded") {
    spec.variant = detail::embedded_from_json(j, where);
  } else if (type == "product") {
    ProductSpec p;
    p.points = detail::get_or<std::size_t>(j, "points", 100000, where);
    for (const auto& part : detail::field(j, "parts", where)) p.parts.push_back(detail::embedded_from_json(part, where + ".parts"));
    detail::require(!p.parts.empty(), where + ": product needs at least one part");
    spec.variant = std::move(p);
  } else {
    throw InputError(where + ": unknown measure type '" + type + "'");
  }
  return spec;
}

// ---------------------------------------------------------------------------
// Sampled measures: CSV (canonical) and float64 binary with a JSON sidecar.

inline std::string measure_to_csv(const SampledMeasure& mu) {
  std::string out;
  for (int d = 0; d < mu.ambient_dim(); ++d) out += "x_" + std::to_string(d + 1) + ",";
  out += "weight\n";
  for (Eigen::Index i = 0; i < mu.points.rows(); ++i) {
    for (int d = 0; d < mu.ambient_dim(); ++d) out += detail::format_double(mu.points(i, d)) + ",";
    out += detail::format_double(mu.weights[i]) + "\n";
  }
  return out;
}

inline SampledMeasure measure_from_csv(const std::string& text, double nominal_dim = 0.0) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw InputError("measure CSV: missing header");
  const auto columns = static_cast<int>(std::count(line.begin(), line.end(), ',')) + 1;
  detail::require(columns >= 2 && line.rfind("weight") != std::string::npos, "measure CSV: header must be x_1..x_n,weight");
  std::vector<double> values;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    int count = 0;
    while (std::getline(fields, cell, ',')) {
      try {
        std::size_t used = 0;
        values.push_back(std::stod(cell, &used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw InputError("measure CSV: bad number '" + cell + "' on data row " + std::to_string(rows + 1));
      }
      ++count;
    }
    detail::require(count == columns, "measure CSV: wrong column count on data row " + std::to_string(rows + 1));
    ++rows;
  }
  detail::require(rows >= 1, "measure CSV: no data rows");
  SampledMeasure mu;
  mu.points.resize(static_cast<Eigen::Index>(rows), columns - 1);
  mu.weights.resize(static_cast<Eigen::Index>(rows));
  for (std::size_t r = 0; r < rows; ++r) {
    for (int d = 0; d < columns - 1; ++d)
      mu.points(static_cast<Eigen::Index>(r), d) = values[r * static_cast<std::size_t>(columns) + static_cast<std::size_t>(d)];
    mu.weights[static_cast<Eigen::Index>(r)] = values[r * static_cast<std::size_t>(columns) + static_cast<std::size_t>(columns - 1)];
  }
  mu.nominal_dim = nominal_dim;
  mu.provenance = "csv";
  return mu;
}

/// Writes `path` (N rows of n coordinates then the weight, little-endian
/// float64) and `path.json` describing it.
inline void write_measure_binary(const SampledMeasure& mu, const std::string& path, const Json& spec = nullptr,
                                 std::uint64_t seed = 0) {
  static_assert(std::endian::native == std::endian::little, "binary measure files are little-endian");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  for (Eigen::Index i = 0; i < mu.points.rows(); ++i) {
    for (int d = 0; d < mu.ambient_dim(); ++d) {
      const double x = mu.points(i, d);
      out.write(reinterpret_cast<const char*>(&x), sizeof x);
    }
    const double w = mu.weights[i];
    out.write(reinterpret_cast<const char*>(&w), sizeof w);
  }
  Json side;
  side["N"] = mu.size();
  side["n"] = mu.ambient_dim();
  side["layout"] = "row-major float64, n coordinates then weight per point, little-endian";
  side["nominal_dim"] = mu.nominal_dim;
  side["provenance"] = mu.provenance;
  side["spec"] = spec;
  side["seed"] = seed;
  detail::write_text(path + ".json", side.dump(2) + "\n");
}

inline SampledMeasure read_measure_binary(const std::string& path) {
  const Json side = read_json_file(path + ".json");
  const auto count = detail::get_as<std::size_t>(side, "N", "sidecar");
  const auto n = detail::get_as<int>(side, "n", "sidecar");
  detail::require(n >= 1, "sidecar: n must be positive");
  const std::string blob = detail::read_text(path);
  const std::size_t stride = static_cast<std::size_t>(n) + 1;
  detail::require(blob.size() == count * stride * sizeof(double), "binary measure: size does not match the sidecar");
  std::vector<double> values(count * stride);
  std::memcpy(values.data(), blob.data(), blob.size());
  SampledMeasure mu;
  mu.points.resize(static_cast<Eigen::Index>(count), n);
  mu.weights.resize(static_cast<Eigen::Index>(count));
  for (std::size_t r = 0; r < count; ++r) {
    for (int d = 0; d < n; ++d) mu.points(static_cast<Eigen::Index>(r), d) = values[r * stride + static_cast<std::size_t>(d)];
    mu.weights[static_cast<Eigen::Index>(r)] = values[r * stride + static_cast<std::size_t>(n)];
  }
  mu.nominal_dim = detail::get_or<double>(side, "nominal_dim", 0.0, "sidecar");
  mu.provenance = detail::get_or<std::string>(side, "provenance", "binary", "sidecar");
  return mu;
}

// ---------------------------------------------------------------------------
// Dimension estimates.

inline Json to_json(const DimensionEstimate& e) {
  return {{"value", e.value},
          {"method", to_string(e.method)},
          {"window", {e.scale_min, e.scale_max}},
          {"slope_stderr", e.slope_stderr},
          {"r_squared", e.r_squared},
          {"N", e.point_count},
          {"scales_used", e.scales_used},
          {"warning", e.warning}};
}

/// Log-log fit data: scale, count, used (1 when inside the fit window).
inline std::string fit_data_csv(const DimensionEstimate& e) {
  std::string out = "scale,count,used\n";
  for (const auto& p : e.fit_data)
    out += detail::format_double(p.scale) + "," + detail::format_double(p.count) + "," + (p.used ? "1" : "0") + "\n";
  return out;
}

}  // namespace projlab
