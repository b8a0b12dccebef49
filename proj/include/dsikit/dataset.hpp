#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "dsikit/types.hpp"

namespace dsikit {

/// Which CSV column holds class labels.
struct LabelColumn {
  enum class Kind { none, last, index };
  Kind kind = Kind::last;
  std::size_t index = 0;

  static LabelColumn none() { return {Kind::none, 0}; }
  static LabelColumn last() { return {Kind::last, 0}; }
  static LabelColumn at(std::size_t i) { return {Kind::index, i}; }

  /// Accepts "none", "last", or a 0-based column number.
  static LabelColumn parse(std::string_view text) {
    if (text == "none") return none();
    if (text == "last") return last();
    std::size_t i = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), i);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
      throw InputError("label column must be 'none', 'last' or a column index, got '" +
                       std::string(text) + "'");
    }
    return at(i);
  }
};

struct CsvOptions {
  bool has_header = false;
  LabelColumn label_column = LabelColumn::last();
  char delimiter = ',';
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split(std::string_view line, char delim) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delim, start);
    if (pos == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

inline bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return ec == std::errc{} && ptr == cell.data() + cell.size() && !cell.empty();
}

/// Shortest decimal text that parses back to exactly `v`.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

/// Parses CSV text. Labels (if any) are canonicalized by first appearance;
/// every other column must be numeric and finite.
inline Dataset parse_csv(std::istream& in, const CsvOptions& options, std::string name = {}) {
  std::vector<double> values;
  std::vector<std::string> raw_labels;
  std::size_t width = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  bool header_pending = options.has_header;
  std::string line;

  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    const auto cells = detail::split(line, options.delimiter);
    if (width == 0) {
      width = cells.size();
    } else if (cells.size() != width) {
      throw InputError("line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                       " fields, found " + std::to_string(cells.size()) + " (ragged row)");
    }

    std::size_t label_idx = width;  // sentinel: no label column
    switch (options.label_column.kind) {
      case LabelColumn::Kind::none:
        break;
      case LabelColumn::Kind::last:
        label_idx = width - 1;
        break;
      case LabelColumn::Kind::index:
        label_idx = options.label_column.index;
        if (label_idx >= width) {
          throw InputError("line " + std::to_string(line_no) + ": label column " +
                           std::to_string(label_idx) + " out of range");
        }
        break;
    }
    if (label_idx != width && width < 2) {
      throw InputError("line " + std::to_string(line_no) +
                       ": a labeled row needs at least one feature column");
    }

    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (c == label_idx) {
        if (cells[c].empty()) {
          throw InputError("line " + std::to_string(line_no) + ": empty label cell");
        }
        raw_labels.emplace_back(cells[c]);
        continue;
      }
      double v = 0.0;
      if (!detail::parse_double(cells[c], v) || !std::isfinite(v)) {
        throw InputError("line " + std::to_string(line_no) + ", column " + std::to_string(c + 1) +
                         ": non-numeric feature '" + std::string(cells[c]) + "'");
      }
      values.push_back(v);
    }
    ++rows;
  }

  if (rows == 0) throw InputError("empty CSV input" + (name.empty() ? "" : " '" + name + "'"));

  const std::size_t cols = values.size() / rows;
  Dataset out{std::move(name), PointMatrix(rows, cols, std::move(values)), std::nullopt};
  if (options.label_column.kind != LabelColumn::Kind::none) {
    out.truth = LabelVector::canonicalize(raw_labels);
  }
  return out;
}

/// Loads a CSV file; the dataset is named after the file stem.
inline Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {}) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  return parse_csv(in, options, path.stem().string());
}

/// Writes points with labels (if present) as the last column. Values use the
/// shortest round-trip representation, so parse_csv recovers them exactly.
inline void write_csv(std::ostream& out, const PointMatrix& data, const LabelVector* labels,
                      char delimiter = ',') {
  for (std::size_t i = 0; i < data.rows(); ++i) {
    for (std::size_t j = 0; j < data.cols(); ++j) {
      if (j) out << delimiter;
      out << detail::format_double(data(i, j));
    }
    if (labels) out << delimiter << (*labels)[i];
    out << '\n';
  }
}

inline void write_csv(std::ostream& out, const Dataset& ds, char delimiter = ',') {
  write_csv(out, ds.data, ds.truth ? &*ds.truth : nullptr, delimiter);
}

/// Per-column z-scores. Constant columns become all zeros.
inline PointMatrix standardize(const PointMatrix& data) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  std::vector<double> mean(d, 0.0);
  std::vector<double> sd(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) mean[j] += data(i, j);
  for (auto& m : mean) m /= static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j) sd[j] += (data(i, j) - mean[j]) * (data(i, j) - mean[j]);
  for (auto& s : sd) s = std::sqrt(s / static_cast<double>(n));

  std::vector<double> out(n * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < d; ++j)
      out[i * d + j] = sd[j] > 0.0 ? (data(i, j) - mean[j]) / sd[j] : 0.0;
  return PointMatrix(n, d, std::move(out));
}

// ---------------------------------------------------------------------------
// Synthetic shapes

enum class Shape { blobs, rings, spirals, moons };

inline Shape parse_shape(std::string_view name) {
  if (name == "blobs") return Shape::blobs;
  if (name == "rings") return Shape::rings;
  if (name == "spirals") return Shape::spirals;
  if (name == "moons") return Shape::moons;
  throw InputError("unknown shape '" + std::string(name) +
                   "' (expected blobs, rings, spirals or moons)");
}

inline std::string_view shape_name(Shape s) {
  switch (s) {
    case Shape::blobs: return "blobs";
    case Shape::rings: return "rings";
    case Shape::spirals: return "spirals";
    case Shape::moons: return "moons";
  }
  return "?";
}

/// Radii of the two concentric rings (label 0 inner, label 1 outer).
inline constexpr double kInnerRingRadius = 1.0;
inline constexpr double kOuterRingRadius = 3.0;

/// Standard deviation of each blob around its center, before added noise.
inline constexpr double kBlobSpread = 1.0;

inline std::size_t default_cluster_count(Shape s) {
  return (s == Shape::rings || s == Shape::moons) ? 2 : 3;
}

/// Seeded 2-D dataset. Point i belongs to cluster i % k, so every cluster is
/// non-empty. `k == 0` picks the shape's default; rings and moons only accept 2.
/// Noise is isotropic Gaussian displacement with standard deviation `noise`.
///
///  - blobs: k Gaussian blobs (spread kBlobSpread) centered on a circle whose
///    adjacent centers are 8 units apart.
///  - rings: concentric circles of radius kInnerRingRadius / kOuterRingRadius.
///  - spirals: k interleaved Archimedean arms.
///  - moons: two interleaving half circles.
inline Dataset generate_synthetic(Shape shape, std::size_t n, std::size_t k, double noise,
                                  std::uint64_t seed) {
  constexpr double pi = std::numbers::pi;
  if (k == 0) k = default_cluster_count(shape);
  if ((shape == Shape::rings || shape == Shape::moons) && k != 2) {
    throw DomainError(std::string(shape_name(shape)) + " always has 2 clusters");
  }
  if (n < k) throw DomainError("n must be at least k");
  if (!(noise >= 0.0) || !std::isfinite(noise)) throw DomainError("noise must be nonnegative");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  std::vector<double> values;
  values.reserve(2 * n);
  std::vector<int> labels;
  labels.reserve(n);

  const double kd = static_cast<double>(k);
  const double center_radius = k > 1 ? 4.0 / std::sin(pi / kd) : 0.0;

  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % k;
    const double cd = static_cast<double>(c);
    double x = 0.0;
    double y = 0.0;
    switch (shape) {
      case Shape::blobs: {
        const double a = 2.0 * pi * cd / kd;
        x = center_radius * std::cos(a) + kBlobSpread * gauss(rng);
        y = center_radius * std::sin(a) + kBlobSpread * gauss(rng);
        break;
      }
      case Shape::rings: {
        const double r = c == 0 ? kInnerRingRadius : kOuterRingRadius;
        const double a = 2.0 * pi * unit(rng);
        x = r * std::cos(a);
        y = r * std::sin(a);
        break;
      }
      case Shape::spirals: {
        const double t = unit(rng);
        const double r = 0.5 + 4.5 * t;
        const double a = 2.0 * pi * cd / kd + 2.5 * pi * t;
        x = r * std::cos(a);
        y = r * std::sin(a);
        break;
      }
      case Shape::moons: {
        const double t = pi * unit(rng);
        if (c == 0) {
          x = std::cos(t);
          y = std::sin(t);
        } else {
          x = 1.0 - std::cos(t);
          y = 0.5 - std::sin(t);
        }
        break;
      }
    }
    if (noise > 0.0) {
      x += noise * gauss(rng);
      y += noise * gauss(rng);
    }
    values.push_back(x);
    values.push_back(y);
    labels.push_back(static_cast<int>(c));
  }

  std::ostringstream name;
  name << shape_name(shape) << "_n" << n << "_k" << k << "_s" << seed;
  return Dataset{name.str(), PointMatrix(n, 2, std::move(values)), LabelVector(std::move(labels))};
}

}  // namespace dsikit
