#pragma once

#include <string>
#include <vector>

#include "rwsolv/sparse.hpp"

namespace rwsolv {

/// Reads a coordinate-format Matrix Market file (real, general or symmetric).
/// Symmetric files store the lower triangle; off-diagonal entries are
/// mirrored on read. Indices are 1-based on disk, 0-based in memory.
/// Throws std::runtime_error with the offending line number on parse errors.
SparseMatrix read_matrix_market(const std::string& path);

/// Writes coordinate format. A matrix flagged symmetric_hint (and actually
/// symmetric) is stored as its lower triangle with the symmetric qualifier.
void write_matrix_market(const std::string& path, const SparseMatrix& a);

/// Dense vectors use array format (n rows, 1 column).
std::vector<double> read_vector_market(const std::string& path);
void write_vector_market(const std::string& path, const std::vector<double>& x);

}  // namespace rwsolv
