#include "circs/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace circs::csv {

std::string vector_to_csv(const Eigen::VectorXd& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += fmt(v[i]);
  }
  out += '\n';
  return out;
}

std::string matrix_to_csv(const Eigen::MatrixXd& m) {
  std::string out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out += ',';
      out += fmt(m(i, j));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::vector<double>> parse_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream ss(text);
  std::string line;
  while (std::getline(ss, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Eigen::VectorXd vector_from_csv(const std::string& text) {
  auto rows = parse_rows(text);
  if (rows.size() == 1) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(rows[0].size()));
    for (size_t j = 0; j < rows[0].size(); ++j) v[static_cast<Eigen::Index>(j)] = rows[0][j];
    return v;
  }
  // column layout: one value per line
  Eigen::VectorXd v(static_cast<Eigen::Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != 1) throw std::invalid_argument("csv: not a vector");
    v[static_cast<Eigen::Index>(i)] = rows[i][0];
  }
  return v;
}

Eigen::MatrixXd matrix_from_csv(const std::string& text) {
  auto rows = parse_rows(text);
  if (rows.empty()) throw std::invalid_argument("csv: empty matrix");
  const size_t ncols = rows[0].size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(ncols));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != ncols) throw std::invalid_argument("csv: ragged matrix");
    for (size_t j = 0; j < ncols; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << content;
}

}  // namespace circs::csv
