#include "clobench/dataset.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace clobench {

void Dataset::validate() const {
  if (xs.rows() != ys.rows()) {
    throw std::invalid_argument("dataset xs and ys must have the same number of rows");
  }
  if (xs.rows() < 1) throw std::invalid_argument("dataset is empty");
  if (!xs.allFinite() || !ys.allFinite()) {
    throw std::invalid_argument("dataset has non-finite entries");
  }
}

namespace {
std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace

void save_dataset_csv(const Dataset& data, const std::string& path) {
  data.validate();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open dataset file for writing: " + path);
  for (int j = 0; j < data.feature_dim(); ++j) out << (j ? "," : "") << "x_" << (j + 1);
  for (int j = 0; j < data.target_dim(); ++j) out << ",y_" << (j + 1);
  out << "\n";
  for (Eigen::Index i = 0; i < data.size(); ++i) {
    for (int j = 0; j < data.feature_dim(); ++j) {
      out << (j ? "," : "") << format_double(data.xs(i, j));
    }
    for (int j = 0; j < data.target_dim(); ++j) out << "," << format_double(data.ys(i, j));
    out << "\n";
  }
}

Dataset load_dataset_csv(const std::string& path, int feature_dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("dataset file is empty: " + path);
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    if (width == 0) width = row.size();
    if (row.size() != width) throw std::invalid_argument("ragged dataset row in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("dataset has no observations: " + path);
  if (width <= static_cast<std::size_t>(feature_dim)) {
    throw std::invalid_argument("dataset rows too short for feature dimension");
  }
  Dataset data;
  data.xs.resize(rows.size(), feature_dim);
  data.ys.resize(rows.size(), width - feature_dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      if (j < static_cast<std::size_t>(feature_dim)) {
        data.xs(i, j) = rows[i][j];
      } else {
        data.ys(i, j - feature_dim) = rows[i][j];
      }
    }
  }
  data.validate();
  return data;
}

}  // namespace clobench
