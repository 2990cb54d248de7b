#pragma once

#include <filesystem>
#include <iosfwd>

#include "fovexp/linalg.hpp"

namespace fovexp::io {

/// Reads a `%%MatrixMarket matrix coordinate real|integer general|symmetric`
/// file. Symmetric files store the lower triangle; the mirror entries are
/// expanded on read. Duplicate coordinates are summed.
SparseMatrixd read_matrix_market(std::istream& in);
SparseMatrixd read_matrix_market(const std::filesystem::path& path);

/// Writes `coordinate real general` with 1-based indices and 17 significant
/// digits, so a write/read cycle reproduces every stored double exactly.
void write_matrix_market(std::ostream& out, const SparseMatrixd& a);
void write_matrix_market(const std::filesystem::path& path, const SparseMatrixd& a);

/// Vector files: one value per line; complex vectors are written as
/// "re im" pairs. Blank lines and lines starting with '#' or '%' are skipped.
VectorXd read_vector(std::istream& in);
VectorXd read_vector(const std::filesystem::path& path);
VectorXcd read_complex_vector(const std::filesystem::path& path);
void write_vector(std::ostream& out, const VectorXd& v);
void write_vector(const std::filesystem::path& path, const VectorXd& v);
void write_vector(const std::filesystem::path& path, const VectorXcd& v);

}  // namespace fovexp::io
