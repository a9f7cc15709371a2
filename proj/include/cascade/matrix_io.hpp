#pragma once

// Plain-text matrix grids: one row per line, entries separated by a single
// space, 17 significant digits.

#include <Eigen/Dense>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "cascade/errors.hpp"

namespace cascade {

inline std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename Derived>
void write_grid(std::ostream& os, const Eigen::MatrixBase<Derived>& M) {
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      if (c) os << ' ';
      os << format_g17(M(r, c));
    }
    os << '\n';
  }
}

/// Reads `rows` lines of whitespace-separated numbers.
inline Eigen::MatrixXd read_grid(std::istream& is, int rows, int cols) {
  Eigen::MatrixXd M(rows, cols);
  std::string line;
  for (int r = 0; r < rows; ++r) {
    if (!std::getline(is, line)) throw IoError("read_grid: unexpected end of input");
    std::istringstream ls(line);
    for (int c = 0; c < cols; ++c)
      if (!(ls >> M(r, c))) throw IoError("read_grid: malformed row " + std::to_string(r));
  }
  return M;
}

}  // namespace cascade
