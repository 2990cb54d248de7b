#include "fovexp/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace fovexp::io {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(in.good(), ErrorKind::Io, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  require(out.good(), ErrorKind::Io, "cannot write " + path.string());
  return out;
}

bool skippable(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '%' || line[pos] == '#';
}

}  // namespace

SparseMatrixd read_matrix_market(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), ErrorKind::Io, "matrix market: empty input");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  require(banner == "%%MatrixMarket", ErrorKind::Io, "matrix market: missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  require(object == "matrix" && format == "coordinate", ErrorKind::Io,
          "matrix market: only 'matrix coordinate' is supported");
  require(field == "real" || field == "integer" || field == "double", ErrorKind::Io,
          "matrix market: unsupported field '" + field + "'");
  require(symmetry == "general" || symmetry == "symmetric", ErrorKind::Io,
          "matrix market: unsupported symmetry '" + symmetry + "'");
  const bool symmetric = symmetry == "symmetric";

  while (std::getline(in, line) && skippable(line)) {
  }
  std::istringstream size_line(line);
  long rows = -1, cols = -1, nnz = -1;
  size_line >> rows >> cols >> nnz;
  require(rows >= 0 && cols >= 0 && nnz >= 0, ErrorKind::Io, "matrix market: bad size line");
  require(!symmetric || rows == cols, ErrorKind::Io, "matrix market: symmetric matrix must be square");

  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  long read = 0;
  while (read < nnz && std::getline(in, line)) {
    if (skippable(line)) continue;
    std::istringstream entry(line);
    long i = 0, j = 0;
    double v = 0.0;
    entry >> i >> j >> v;
    require(!entry.fail(), ErrorKind::Io, "matrix market: malformed entry '" + line + "'");
    require(i >= 1 && i <= rows && j >= 1 && j <= cols, ErrorKind::Io,
            "matrix market: index out of range");
    triplets.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j) triplets.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
    ++read;
  }
  require(read == nnz, ErrorKind::Io, "matrix market: fewer entries than declared");
  SparseMatrixd a(rows, cols);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

SparseMatrixd read_matrix_market(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_matrix_market(in);
}

void write_matrix_market(std::ostream& out, const SparseMatrixd& a) {
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  out << std::setprecision(17);
  for (Index r = 0; r < a.outerSize(); ++r)
    for (SparseMatrixd::InnerIterator it(a, r); it; ++it)
      out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

void write_matrix_market(const std::filesystem::path& path, const SparseMatrixd& a) {
  auto out = open_out(path);
  write_matrix_market(out, a);
}

VectorXd read_vector(std::istream& in) {
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    std::istringstream s(line);
    double v = 0.0;
    s >> v;
    require(!s.fail(), ErrorKind::Io, "vector file: malformed line '" + line + "'");
    values.push_back(v);
  }
  return Eigen::Map<VectorXd>(values.data(), static_cast<Index>(values.size()));
}

VectorXd read_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_vector(in);
}

VectorXcd read_complex_vector(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<Complex> values;
  std::string line;
  while (std::getline(in, line)) {
    if (skippable(line)) continue;
    std::istringstream s(line);
    double re = 0.0, im = 0.0;
    s >> re;
    require(!s.fail(), ErrorKind::Io, "vector file: malformed line '" + line + "'");
    if (!(s >> im)) im = 0.0;
    values.emplace_back(re, im);
  }
  return Eigen::Map<VectorXcd>(values.data(), static_cast<Index>(values.size()));
}

void write_vector(std::ostream& out, const VectorXd& v) {
  out << std::setprecision(17);
  for (Index i = 0; i < v.size(); ++i) out << v[i] << '\n';
}

void write_vector(const std::filesystem::path& path, const VectorXd& v) {
  auto out = open_out(path);
  write_vector(out, v);
}

void write_vector(const std::filesystem::path& path, const VectorXcd& v) {
  auto out = open_out(path);
  out << std::setprecision(17);
  for (Index i = 0; i < v.size(); ++i) out << v[i].real() << ' ' << v[i].imag() << '\n';
}

}  // namespace fovexp::io
