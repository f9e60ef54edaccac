// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_SPARSE_HPP
#define PPG_SPARSE_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "ppg/core.hpp"

namespace ppg {

// Square real matrix in compressed-row storage.  Column indices within a row
// are kept ascending so the matvec traversal order is deterministic and op
// counts are reproducible.
struct SparseMatrix {
  int n = 0;
  std::vector<int> row_ptr;  // size n+1, nondecreasing
  std::vector<int> col_idx;
  std::vector<double> val;
  bool symmetric_input = false;  // file header said "symmetric"

  std::int64_t nnz() const { return static_cast<std::int64_t>(col_idx.size()); }

  double inf_norm() const {
    double m = 0.0;
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += std::abs(val[k]);
      m = std::max(m, s);
    }
    return m;
  }
};

// Assembles CSR from triplets; duplicate (row,col) entries are summed.
inline SparseMatrix assemble(
    int n, std::vector<std::tuple<int, int, double>> entries,
    bool symmetric_input = false) {
  if (n < 1) throw std::invalid_argument("assemble: n < 1");
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) {
              return std::tie(std::get<0>(a), std::get<1>(a)) <
                     std::tie(std::get<0>(b), std::get<1>(b));
            });
  SparseMatrix A;
  A.n = n;
  A.symmetric_input = symmetric_input;
  A.row_ptr.assign(n + 1, 0);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    auto [i, j, v] = entries[k];
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw std::invalid_argument("assemble: index out of range");
    if (!A.col_idx.empty() && i == std::get<0>(entries[k - 1]) &&
        j == std::get<1>(entries[k - 1])) {
      A.val.back() += v;  // duplicates summed
      continue;
    }
    A.col_idx.push_back(j);
    A.val.push_back(v);
    ++A.row_ptr[i + 1];
  }
  for (int i = 0; i < n; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
  return A;
}

inline void matvec(const SparseMatrix& A, const Vec& v, Vec& out,
                   OpCounter& ctr) {
  if (static_cast<int>(v.size()) != A.n)
    throw std::invalid_argument("matvec: dimension mismatch");
  out.assign(A.n, 0.0);
  for (int i = 0; i < A.n; ++i) {
    double s = 0.0;
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      s += A.val[k] * v[A.col_idx[k]];
    out[i] = s;
  }
  ++ctr.mvps;
}

inline Vec matvec(const SparseMatrix& A, const Vec& v, OpCounter& ctr) {
  Vec out;
  matvec(A, v, out, ctr);
  return out;
}

class MatrixOperator final : public LinearOperator {
 public:
  explicit MatrixOperator(const SparseMatrix& A) : A_(A) {}
  int dim() const override { return A_.n; }
  void apply(const Vec& v, Vec& out, OpCounter& ctr) const override {
    matvec(A_, v, out, ctr);
  }
  const SparseMatrix& matrix() const { return A_; }

 private:
  const SparseMatrix& A_;
};

// --- synthetic test matrices ------------------------------------------------

// Diagonal entries i^p/n, i = 1..n.
inline SparseMatrix gen_diag_power(int n, double p) {
  if (n < 1) throw std::invalid_argument("gen_diag_power: n < 1");
  std::vector<std::tuple<int, int, double>> e;
  e.reserve(n);
  for (int i = 0; i < n; ++i)
    e.emplace_back(i, i, std::pow(static_cast<double>(i + 1), p) / n);
  return assemble(n, std::move(e));
}

// Same diagonal plus a constant superdiagonal s.
inline SparseMatrix gen_bidiag_power(int n, double p, double s) {
  if (n < 1) throw std::invalid_argument("gen_bidiag_power: n < 1");
  std::vector<std::tuple<int, int, double>> e;
  for (int i = 0; i < n; ++i) {
    e.emplace_back(i, i, std::pow(static_cast<double>(i + 1), p) / n);
    if (i + 1 < n) e.emplace_back(i, i + 1, s);
  }
  return assemble(n, std::move(e));
}

// Finite differences for -u_xxxx - u_yyyy + u_xxx on the unit square with
// zero Dirichlet boundaries.  Interior grid nx-by-ny, spacing h = 1/(nx+1),
// row-major grid ordering.  Fourth differences [1,-4,6,-4,1]/h^4 per axis;
// u_xxx by the centered five-point third difference [-1,2,0,-2,1]/(2h^3).
inline SparseMatrix gen_biharmonic(int nx, int ny) {
  if (nx < 1 || ny < 1)
    throw std::invalid_argument("gen_biharmonic: grid counts must be >= 1");
  const double h = 1.0 / (nx + 1);
  const double h4 = h * h * h * h;
  const double h3 = h * h * h;
  const double c4[5] = {1.0, -4.0, 6.0, -4.0, 1.0};
  const double c3[5] = {-1.0, 2.0, 0.0, -2.0, 1.0};
  const int n = nx * ny;
  std::vector<std::tuple<int, int, double>> e;
  e.reserve(static_cast<std::size_t>(n) * 13);
  auto node = [nx](int ix, int iy) { return iy * nx + ix; };
  for (int iy = 0; iy < ny; ++iy) {
    for (int ix = 0; ix < nx; ++ix) {
      const int row = node(ix, iy);
      for (int o = -2; o <= 2; ++o) {
        double cx = -c4[o + 2] / h4 + c3[o + 2] / (2.0 * h3);
        if (ix + o >= 0 && ix + o < nx && cx != 0.0)
          e.emplace_back(row, node(ix + o, iy), cx);
        double cy = -c4[o + 2] / h4;
        if (iy + o >= 0 && iy + o < ny && cy != 0.0)
          e.emplace_back(row, node(ix, iy + o), cy);
      }
    }
  }
  return assemble(n, std::move(e));
}

// --- Matrix Market ingestion ------------------------------------------------

// Coordinate-format reader: real entries, general or symmetric.  Symmetric
// files are expanded to full storage; indices converted to 0-based;
// duplicates summed.
inline SparseMatrix read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("matrix market: empty file: " + path);
  std::istringstream hdr(line);
  std::string banner, object, format, field, symmetry;
  hdr >> banner >> object >> format >> field >> symmetry;
  for (auto* s : {&object, &format, &field, &symmetry})
    std::transform(s->begin(), s->end(), s->begin(),
                   [](unsigned char c) { return std::tolower(c); });
  if (banner != "%%MatrixMarket" || object != "matrix")
    throw std::runtime_error("matrix market: malformed header: " + line);
  if (format != "coordinate")
    throw std::runtime_error("matrix market: only coordinate format supported");
  if (field == "complex" || field == "pattern")
    throw std::runtime_error("matrix market: unsupported field: " + field);
  if (field != "real" && field != "integer")
    throw std::runtime_error("matrix market: unsupported field: " + field);
  bool symmetric;
  if (symmetry == "general")
    symmetric = false;
  else if (symmetry == "symmetric")
    symmetric = true;
  else
    throw std::runtime_error("matrix market: unsupported symmetry: " +
                             symmetry);

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream sz(line);
  long rows = 0, cols = 0, nnz = 0;
  if (!(sz >> rows >> cols >> nnz))
    throw std::runtime_error("matrix market: malformed size line");
  if (rows != cols)
    throw std::runtime_error("matrix market: matrix is not square");

  std::vector<std::tuple<int, int, double>> e;
  e.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
  for (long k = 0; k < nnz; ++k) {
    long i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v))
      throw std::runtime_error("matrix market: truncated entry list");
    if (i < 1 || i > rows || j < 1 || j > cols)
      throw std::runtime_error("matrix market: index out of range");
    e.emplace_back(static_cast<int>(i - 1), static_cast<int>(j - 1), v);
    if (symmetric && i != j)
      e.emplace_back(static_cast<int>(j - 1), static_cast<int>(i - 1), v);
  }
  return assemble(static_cast<int>(rows), std::move(e), symmetric);
}

inline void write_matrix_market(const SparseMatrix& A,
                                const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open file for write: " + path);
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << A.n << " " << A.n << " " << A.nnz() << "\n";
  out.precision(17);
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      out << i + 1 << " " << A.col_idx[k] + 1 << " " << A.val[k] << "\n";
}

// Right-hand-side file: either a plain list of reals or a Matrix Market
// dense array (single column).
inline Vec read_vector(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::string first;
  std::getline(in, first);
  Vec v;
  if (first.rfind("%%MatrixMarket", 0) == 0) {
    if (first.find("array") == std::string::npos)
      throw std::runtime_error("rhs file: expected a dense array: " + path);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty() && line[0] != '%') break;
    std::istringstream sz(line);
    long rows = 0, cols = 0;
    if (!(sz >> rows >> cols) || cols != 1)
      throw std::runtime_error("rhs file: expected a single column: " + path);
    v.reserve(rows);
    double x;
    for (long i = 0; i < rows; ++i) {
      if (!(in >> x)) throw std::runtime_error("rhs file truncated: " + path);
      v.push_back(x);
    }
  } else {
    std::istringstream head(first);
    double x;
    while (head >> x) v.push_back(x);
    while (in >> x) v.push_back(x);
  }
  return v;
}

}  // namespace ppg

#endif  // PPG_SPARSE_HPP
