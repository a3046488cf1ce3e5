#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace stabsel {

// Sorted, duplicate-free collection of feature indices.
class IndexSet {
 public:
  IndexSet() = default;

  // Sorts the input and rejects duplicates.
  static IndexSet of(std::vector<std::size_t> indices);

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  std::size_t operator[](std::size_t i) const { return values_[i]; }
  bool contains(std::size_t value) const;
  std::size_t max_index() const;  // throws when empty

  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }
  const std::vector<std::size_t>& values() const { return values_; }

  bool operator==(const IndexSet&) const = default;

 private:
  std::vector<std::size_t> values_;
};

IndexSet all_features(std::size_t p);

// Dense observation matrix with binary labels. Immutable after construction;
// all operations on it are pure functions, so instances can be shared freely
// across threads.
class Dataset {
 public:
  // Validates: n >= 2, p >= 1, labels in {0,1}, all entries finite. Feature
  // identifiers default to "f0".."f{p-1}".
  Dataset(Eigen::MatrixXd x, Eigen::VectorXd y, std::vector<std::string> feature_ids = {});

  const Eigen::MatrixXd& x() const { return x_; }
  const Eigen::VectorXd& y() const { return y_; }
  const std::vector<std::string>& feature_ids() const { return feature_ids_; }
  Eigen::Index n() const { return x_.rows(); }
  Eigen::Index p() const { return x_.cols(); }

  bool both_classes_present() const;
  // Supervised operations call this before consuming the labels.
  void require_both_classes(const std::string& op) const;

 private:
  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  std::vector<std::string> feature_ids_;
};

struct ColumnStats {
  Eigen::VectorXd means;
  Eigen::VectorXd stds;  // population standard deviation; 0 is recorded as-is
};

// Transforms each column to mean 0, std 1. Columns with zero variance are
// centered to all-zeros and keep std 0 in the returned stats; they are not
// dropped, so feature indices stay stable.
std::pair<Dataset, ColumnStats> standardize(const Dataset& d);

// Submatrix x[rows, cols] with y[rows]. Feature identifiers follow the
// selected columns, so selections on the result map back to the original
// feature space.
Dataset slice(const Dataset& d, std::span<const std::size_t> rows, const IndexSet& cols);

enum class MatrixFormat { csv, binary_f64 };

// ".csv" -> csv, anything else -> binary_f64.
MatrixFormat format_from_path(const std::filesystem::path& path);

Dataset load_matrix(const std::filesystem::path& path, MatrixFormat format);
void save_matrix(const Dataset& d, const std::filesystem::path& path, MatrixFormat format);

}  // namespace stabsel
