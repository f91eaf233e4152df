#pragma once

#include <Eigen/Dense>
#include <cstdio>
#include <string>
#include <vector>

namespace circs::csv {

// Decimal with 17 significant digits, enough to round-trip a double.
inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string vector_to_csv(const Eigen::VectorXd& v);
std::string matrix_to_csv(const Eigen::MatrixXd& m);
Eigen::VectorXd vector_from_csv(const std::string& text);
Eigen::MatrixXd matrix_from_csv(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace circs::csv
