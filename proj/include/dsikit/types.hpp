#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace dsikit {

/// Malformed input: unreadable files, bad CSV, bad flags. The CLI maps this to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A well-formed input that violates a mathematical precondition. CLI exit code 3.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Dense row-major n x d matrix of finite reals.
class PointMatrix {
 public:
  PointMatrix() = default;

  PointMatrix(std::size_t rows, std::size_t cols, std::vector<double> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (rows_ == 0 || cols_ == 0) {
      throw DomainError("point matrix needs at least one row and one column");
    }
    if (values_.size() != rows_ * cols_) {
      throw DomainError("point matrix storage does not match its shape");
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw DomainError("point matrix entries must be finite");
    }
  }

  static PointMatrix from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw DomainError("point matrix needs at least one row");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw DomainError("all rows must have the same dimensionality");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return PointMatrix(rows.size(), d, std::move(flat));
  }

  [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
  [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
  [[nodiscard]] std::span<const double> row(std::size_t i) const noexcept {
    return {values_.data() + i * cols_, cols_};
  }
  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept {
    return values_[i * cols_ + j];
  }
  [[nodiscard]] const std::vector<double>& values() const noexcept { return values_; }

  /// Rows selected by index, in the given order.
  [[nodiscard]] PointMatrix select(std::span<const std::size_t> indices) const {
    std::vector<double> out;
    out.reserve(indices.size() * cols_);
    for (std::size_t i : indices) {
      auto r = row(i);
      out.insert(out.end(), r.begin(), r.end());
    }
    return PointMatrix(indices.size(), cols_, std::move(out));
  }

  friend bool operator==(const PointMatrix&, const PointMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

/// Cluster/class ids, always contiguous 0..class_count-1.
class LabelVector {
 public:
  LabelVector() = default;

  /// Takes already-contiguous ids; use canonicalize() for arbitrary ones.
  explicit LabelVector(std::vector<int> labels) : labels_(std::move(labels)) {
    int max_id = -1;
    for (int l : labels_) {
      if (l < 0) throw DomainError("labels must be nonnegative");
      max_id = std::max(max_id, l);
    }
    std::vector<bool> seen(static_cast<std::size_t>(max_id + 1), false);
    for (int l : labels_) seen[static_cast<std::size_t>(l)] = true;
    for (bool s : seen) {
      if (!s) throw DomainError("labels must form a contiguous range starting at 0");
    }
    class_count_ = static_cast<std::size_t>(max_id + 1);
  }

  /// Maps arbitrary keys to 0-based ids by order of first appearance.
  template <typename Key>
  static LabelVector canonicalize(std::span<const Key> raw) {
    std::unordered_map<Key, int> ids;
    std::vector<int> out;
    out.reserve(raw.size());
    for (const auto& key : raw) {
      auto [it, inserted] = ids.try_emplace(key, static_cast<int>(ids.size()));
      out.push_back(it->second);
    }
    return LabelVector(std::move(out));
  }

  template <typename Key>
  static LabelVector canonicalize(const std::vector<Key>& raw) {
    return canonicalize(std::span<const Key>(raw));
  }

  [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }
  [[nodiscard]] std::size_t class_count() const noexcept { return class_count_; }
  [[nodiscard]] int operator[](std::size_t i) const noexcept { return labels_[i]; }
  [[nodiscard]] const std::vector<int>& values() const noexcept { return labels_; }
  [[nodiscard]] auto begin() const noexcept { return labels_.begin(); }
  [[nodiscard]] auto end() const noexcept { return labels_.end(); }

  /// Row indices of each class, ascending.
  [[nodiscard]] std::vector<std::vector<std::size_t>> members() const {
    std::vector<std::vector<std::size_t>> out(class_count_);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      out[static_cast<std::size_t>(labels_[i])].push_back(i);
    }
    return out;
  }

  [[nodiscard]] std::vector<std::size_t> class_sizes() const {
    std::vector<std::size_t> out(class_count_, 0);
    for (int l : labels_) ++out[static_cast<std::size_t>(l)];
    return out;
  }

  friend bool operator==(const LabelVector&, const LabelVector&) = default;

 private:
  std::vector<int> labels_;
  std::size_t class_count_ = 0;
};

/// Points plus optional ground-truth labels.
struct Dataset {
  std::string name;
  PointMatrix data;
  std::optional<LabelVector> truth;
};

inline void require_matching(const PointMatrix& data, const LabelVector& labels) {
  if (data.rows() != labels.size()) {
    throw DomainError("label count " + std::to_string(labels.size()) +
                      " does not match point count " + std::to_string(data.rows()));
  }
}

}  // namespace dsikit
