#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "fspace/dense.hpp"
#include "fspace/errors.hpp"
#include "fspace/io_util.hpp"

namespace fspace {

enum class MmFormat { array, coordinate };

namespace detail {

inline std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

inline bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    std::size_t pos = line.find_first_not_of(" \t\r\n");
    if (pos == std::string::npos) continue;  // blank
    if (line[pos] == '%') continue;          // comment
    return true;
  }
  return false;
}

}  // namespace detail

inline void write_matrix_market(std::ostream& out, const DenseMatrix& m,
                                MmFormat fmt = MmFormat::array) {
  if (fmt == MmFormat::array) {
    out << "%%MatrixMarket matrix array real general\n";
    out << m.rows() << " " << m.cols() << "\n";
    for (std::size_t j = 0; j < m.cols(); ++j)
      for (std::size_t i = 0; i < m.rows(); ++i) out << detail::format_real(m(i, j)) << "\n";
  } else {
    std::size_t nnz = 0;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << " " << m.cols() << " " << nnz << "\n";
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != 0.0)
          out << (i + 1) << " " << (j + 1) << " " << detail::format_real(m(i, j)) << "\n";
  }
}

// symmetric matrices store the lower triangle only, column-major
inline void write_matrix_market(std::ostream& out, const DenseSymMatrix& m,
                                MmFormat fmt = MmFormat::array) {
  const std::size_t n = m.dim();
  if (fmt == MmFormat::array) {
    out << "%%MatrixMarket matrix array real symmetric\n";
    out << n << " " << n << "\n";
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i) out << detail::format_real(m(i, j)) << "\n";
  } else {
    std::size_t nnz = 0;
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i)
        if (m(i, j) != 0.0) ++nnz;
    out << "%%MatrixMarket matrix coordinate real symmetric\n";
    out << n << " " << n << " " << nnz << "\n";
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j; i < n; ++i)
        if (m(i, j) != 0.0)
          out << (i + 1) << " " << (j + 1) << " " << detail::format_real(m(i, j)) << "\n";
  }
}

template <typename M>
inline void write_matrix_market_file(const std::string& path, const M& m,
                                     MmFormat fmt = MmFormat::array) {
  std::ostringstream buf;
  write_matrix_market(buf, m, fmt);
  detail::atomic_write_text(path, buf.str());
}

// Reads array or coordinate, real or integer, general or symmetric.
// Symmetric input is mirrored into a full dense matrix.
inline DenseMatrix read_matrix_market(std::istream& in) {
  std::string banner;
  if (!std::getline(in, banner)) throw IoError("matrix market: empty input");
  std::istringstream head(detail::lower(banner));
  std::string tag, object, format, field, symmetry;
  head >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix")
    throw IoError("matrix market: bad banner: " + banner);
  if (format != "array" && format != "coordinate")
    throw IoError("matrix market: unsupported format: " + format);
  if (field != "real" && field != "integer")
    throw IoError("matrix market: unsupported field: " + field);
  if (symmetry != "general" && symmetry != "symmetric")
    throw IoError("matrix market: unsupported symmetry: " + symmetry);
  const bool symmetric = symmetry == "symmetric";

  std::string line;
  if (!detail::next_data_line(in, line)) throw IoError("matrix market: missing size line");
  std::istringstream sizes(line);

  if (format == "array") {
    long long rows = -1, cols = -1;
    sizes >> rows >> cols;
    if (!sizes || rows < 0 || cols < 0) throw IoError("matrix market: bad size line: " + line);
    if (symmetric && rows != cols) throw IoError("matrix market: symmetric must be square");
    DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
    const std::size_t expected =
        symmetric ? static_cast<std::size_t>(rows) * (rows + 1) / 2
                  : static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
    std::size_t count = 0;
    std::size_t i = 0, j = 0;
    if (symmetric) i = j = 0;
    while (count < expected) {
      if (!detail::next_data_line(in, line)) throw IoError("matrix market: truncated data");
      std::istringstream vals(line);
      double v;
      while (vals >> v) {
        if (count >= expected) throw IoError("matrix market: extra data");
        if (!std::isfinite(v)) throw IoError("matrix market: non-finite value");
        m(i, j) = v;
        if (symmetric) m(j, i) = v;
        ++count;
        ++i;
        if (i == static_cast<std::size_t>(rows)) {
          ++j;
          i = symmetric ? j : 0;
        }
      }
    }
    return m;
  }

  long long rows = -1, cols = -1, nnz = -1;
  sizes >> rows >> cols >> nnz;
  if (!sizes || rows < 0 || cols < 0 || nnz < 0)
    throw IoError("matrix market: bad size line: " + line);
  if (symmetric && rows != cols) throw IoError("matrix market: symmetric must be square");
  DenseMatrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols));
  for (long long k = 0; k < nnz; ++k) {
    if (!detail::next_data_line(in, line)) throw IoError("matrix market: truncated data");
    std::istringstream entry(line);
    long long i = 0, j = 0;
    double v = 0.0;
    entry >> i >> j >> v;
    if (!entry || i < 1 || j < 1 || i > rows || j > cols)
      throw IoError("matrix market: bad entry: " + line);
    if (!std::isfinite(v)) throw IoError("matrix market: non-finite value");
    m(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = v;
    if (symmetric) m(static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1)) = v;
  }
  return m;
}

inline DenseMatrix read_matrix_market_file(const std::string& path) {
  std::istringstream in(detail::read_text_file(path));
  return read_matrix_market(in);
}

inline DenseSymMatrix read_sym_matrix_market_file(const std::string& path) {
  return DenseSymMatrix(read_matrix_market_file(path));
}

}  // namespace fspace
