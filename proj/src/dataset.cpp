#include "lssfind/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lssfind {

Dataset::Dataset(std::size_t n_rows, std::size_t n_features)
    : n_rows_(n_rows),
      n_features_(n_features),
      features_(n_rows * n_features, 0.0),
      labels_(n_rows, 0.0) {
  feature_names_.reserve(n_features);
  for (std::size_t j = 0; j < n_features; ++j) feature_names_.push_back("x" + std::to_string(j + 1));
}

void Dataset::validate() const {
  if (n_rows_ < 1) throw std::invalid_argument("dataset has no rows");
  if (n_features_ < 1) throw std::invalid_argument("dataset has no features");
  if (labels_.size() != n_rows_) throw std::invalid_argument("label count != row count");
  for (double v : features_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature value");
  }
  for (double v : labels_) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite label value");
  }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

Dataset read_csv(const std::string& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open CSV file: " + path);

  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty CSV file: " + path);
  const std::vector<std::string> header = split_csv_line(line);
  const std::size_t n_cols = header.size();
  if (n_cols < 2) throw std::invalid_argument("CSV needs a label column and at least one feature");

  // Resolve the label column by name first, then as a 0-based index.
  std::size_t label_idx = n_cols;
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (trim(header[j]) == trim(label_column)) {
      label_idx = j;
      break;
    }
  }
  if (label_idx == n_cols) {
    try {
      std::size_t consumed = 0;
      const long idx = std::stol(trim(label_column), &consumed);
      if (consumed == trim(label_column).size() && idx >= 0 &&
          static_cast<std::size_t>(idx) < n_cols) {
        label_idx = static_cast<std::size_t>(idx);
      }
    } catch (const std::exception&) {
    }
  }
  if (label_idx == n_cols) {
    throw std::invalid_argument("label column '" + label_column + "' not found in " + path);
  }

  std::vector<double> values;
  std::size_t n_rows = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != n_cols) {
      throw std::invalid_argument("row " + std::to_string(line_no) + " has " +
                                  std::to_string(fields.size()) + " fields, expected " +
                                  std::to_string(n_cols));
    }
    for (std::size_t j = 0; j < n_cols; ++j) {
      const std::string cell = trim(fields[j]);
      std::size_t consumed = 0;
      double v = 0.0;
      bool ok = !cell.empty();
      if (ok) {
        try {
          v = std::stod(cell, &consumed);
          ok = consumed == cell.size() && std::isfinite(v);
        } catch (const std::exception&) {
          ok = false;
        }
      }
      if (!ok) {
        throw std::invalid_argument("non-numeric cell at row " + std::to_string(line_no) +
                                    ", column '" + header[j] + "': '" + cell + "'");
      }
      values.push_back(v);
    }
    ++n_rows;
  }
  if (n_rows == 0) throw std::invalid_argument("CSV has no data rows: " + path);

  Dataset data(n_rows, n_cols - 1);
  data.feature_names().clear();
  for (std::size_t j = 0; j < n_cols; ++j) {
    if (j != label_idx) data.feature_names().push_back(trim(header[j]));
  }
  data.label_name() = trim(header[label_idx]);
  for (std::size_t i = 0; i < n_rows; ++i) {
    std::size_t col = 0;
    for (std::size_t j = 0; j < n_cols; ++j) {
      const double v = values[i * n_cols + j];
      if (j == label_idx) {
        data.labels()[i] = v;
      } else {
        data.at(i, col++) = v;
      }
    }
  }
  data.validate();
  return data;
}

void write_csv(const Dataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  for (std::size_t j = 0; j < data.n_features(); ++j) out << data.feature_names()[j] << ',';
  out << data.label_name() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < data.n_rows(); ++i) {
    for (std::size_t j = 0; j < data.n_features(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.17g", data.at(i, j));
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", data.labels()[i]);
    out << buf << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace lssfind
