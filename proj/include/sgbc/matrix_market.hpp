#pragma once

#include <string>

#include "sgbc/common.hpp"

// Matrix Market writers for cross-checking with external tools.

namespace sgbc {

/// "coordinate real general" (or "symmetric" with only the lower triangle
/// written when `symmetric` is set).
void write_matrix_market(const std::string& path, const SparseMatrix& m, bool symmetric = false);
void write_matrix_market(const std::string& path, const DenseMatrix& m);

/// "array real general" column vector.
void write_matrix_market(const std::string& path, const Vector& v);

/// Reads a coordinate file written by write_matrix_market (symmetric files
/// are expanded). Used by the round-trip tests.
SparseMatrix read_matrix_market(const std::string& path);

}  // namespace sgbc
