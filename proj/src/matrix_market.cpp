#include "sgbc/matrix_market.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace sgbc {

namespace {

std::ofstream open_for_write(const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot write " + path);
  os.precision(17);
  return os;
}

}  // namespace

void write_matrix_market(const std::string& path, const SparseMatrix& m, bool symmetric) {
  auto os = open_for_write(path);
  std::vector<Triplet> entries;
  for (int r = 0; r < m.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(m, r); it; ++it)
      if (!symmetric || it.col() <= it.row()) entries.emplace_back(r, static_cast<int>(it.col()), it.value());
  os << "%%MatrixMarket matrix coordinate real " << (symmetric ? "symmetric" : "general") << '\n';
  os << m.rows() << ' ' << m.cols() << ' ' << entries.size() << '\n';
  for (const auto& t : entries) os << t.row() + 1 << ' ' << t.col() + 1 << ' ' << t.value() << '\n';
}

void write_matrix_market(const std::string& path, const DenseMatrix& m) {
  auto os = open_for_write(path);
  Index nnz = 0;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (m(i, j) != 0.0) ++nnz;
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << m.rows() << ' ' << m.cols() << ' ' << nnz << '\n';
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0.0) os << i + 1 << ' ' << j + 1 << ' ' << m(i, j) << '\n';
}

void write_matrix_market(const std::string& path, const Vector& v) {
  auto os = open_for_write(path);
  os << "%%MatrixMarket matrix array real general\n";
  os << v.size() << " 1\n";
  for (Index i = 0; i < v.size(); ++i) os << v[i] << '\n';
}

SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line.rfind("%%MatrixMarket matrix coordinate real", 0) != 0)
    throw Error(path + ": only coordinate real Matrix Market files are supported");
  const bool symmetric = line.find("symmetric") != std::string::npos;
  while (std::getline(in, line) && !line.empty() && line[0] == '%') {
  }
  std::istringstream head(line);
  Index rows = 0, cols = 0, nnz = 0;
  if (!(head >> rows >> cols >> nnz)) throw Error(path + ": malformed size line");
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (Index k = 0; k < nnz; ++k) {
    int i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw Error(path + ": truncated entry list");
    t.emplace_back(i - 1, j - 1, v);
    if (symmetric && i != j) t.emplace_back(j - 1, i - 1, v);
  }
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

}  // namespace sgbc
