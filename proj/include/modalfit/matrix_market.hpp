#pragma once

#include <filesystem>
#include <iosfwd>

#include "modalfit/sparse_matrix.hpp"

namespace modalfit {

/// Writes `%%MatrixMarket matrix coordinate real symmetric` with the lower triangle,
/// 1-based indices, and 17 significant digits.
void write_matrix_market(std::ostream& out, const SparseSymMatrix& a);
void write_matrix_market(const std::filesystem::path& path, const SparseSymMatrix& a);

/// Writes a dense matrix in `array real general` format (column-major).
void write_matrix_market(std::ostream& out, const Matrix& a);
void write_matrix_market(const std::filesystem::path& path, const Matrix& a);

/// Reads a square coordinate real matrix. `symmetric` files may store either
/// triangle; `general` files must be numerically symmetric.
SparseSymMatrix read_matrix_market(std::istream& in);
SparseSymMatrix read_matrix_market(const std::filesystem::path& path);

}  // namespace modalfit
