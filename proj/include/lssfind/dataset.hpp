#pragma once

#include <string>
#include <vector>

namespace lssfind {

// Row-major feature matrix with continuous labels.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::size_t n_rows, std::size_t n_features);

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_features() const { return n_features_; }

  double& at(std::size_t row, std::size_t col) { return features_[row * n_features_ + col]; }
  double at(std::size_t row, std::size_t col) const { return features_[row * n_features_ + col]; }

  std::vector<double>& labels() { return labels_; }
  const std::vector<double>& labels() const { return labels_; }

  std::vector<std::string>& feature_names() { return feature_names_; }
  const std::vector<std::string>& feature_names() const { return feature_names_; }

  std::string& label_name() { return label_name_; }
  const std::string& label_name() const { return label_name_; }

  // Throws std::invalid_argument on empty data, dimension mismatch, or
  // non-finite values.
  void validate() const;

 private:
  std::size_t n_rows_ = 0;
  std::size_t n_features_ = 0;
  std::vector<double> features_;
  std::vector<double> labels_;
  std::vector<std::string> feature_names_;
  std::string label_name_ = "y";
};

// CSV with a header row; one column is the label, all others are numeric
// features. `label_column` is a column name, or a 0-based column index when
// it parses as an integer. Errors carry the offending row/column.
Dataset read_csv(const std::string& path, const std::string& label_column);

void write_csv(const Dataset& data, const std::string& path);

}  // namespace lssfind
