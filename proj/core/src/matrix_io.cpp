#include "l1codec/matrix_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace l1codec {

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  Index rows = 0;
  Index cols = 0;
  if (!(in >> rows >> cols) || rows < 1 || cols < 1) {
    throw IoError("bad matrix header in " + path.string());
  }
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) {
      if (!(in >> m(i, j))) {
        throw IoError("truncated matrix data in " + path.string());
      }
    }
  }
  if (!m.allFinite()) {
    throw IoError("non-finite entries in " + path.string());
  }
  return m;
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) {
        out << ' ';
      }
      out << format_real(m(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

Vector read_vector(const std::filesystem::path& path) {
  Matrix m = read_matrix(path);
  if (m.cols() != 1 && m.rows() != 1) {
    throw IoError("expected a vector in " + path.string() + ", got " +
                  std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (m.cols() == 1) {
    return m.col(0);
  }
  return m.row(0).transpose();
}

void write_vector(const std::filesystem::path& path, const Vector& v) {
  write_matrix(path, v);
}

}  // namespace l1codec
