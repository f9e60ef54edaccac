// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_ILU_HPP
#define PPG_ILU_HPP

#include "ppg/sparse.hpp"

namespace ppg {

// ILU(0) of A + shift*I: unit lower and upper triangular factors restricted
// to the sparsity pattern of the shifted matrix (no fill-in), stored combined
// in one CSR structure with a per-row diagonal index.
struct Ilu0Factors {
  SparseMatrix lu;            // L (strict lower, unit diag implicit) + U
  std::vector<int> diag_idx;  // position of the diagonal entry in each row
  double shift = 0.0;
};

inline Ilu0Factors ilu0_factor(const SparseMatrix& A, double shift = 0.0) {
  if (A.n < 1) throw std::invalid_argument("ilu0_factor: empty matrix");
  const double pivot_floor = 1e-14 * A.inf_norm();

  SparseMatrix M;
  if (shift != 0.0) {
    std::vector<std::tuple<int, int, double>> e;
    e.reserve(A.col_idx.size() + A.n);
    for (int i = 0; i < A.n; ++i)
      for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
        e.emplace_back(i, A.col_idx[k], A.val[k]);
    for (int i = 0; i < A.n; ++i) e.emplace_back(i, i, shift);
    M = assemble(A.n, std::move(e));
  } else {
    M = A;
  }

  const int n = M.n;
  std::vector<int> diag(n, -1);
  for (int i = 0; i < n; ++i)
    for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
      if (M.col_idx[k] == i) diag[i] = k;

  // IKJ variant with a column-position scatter map per row.
  std::vector<int> pos(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
      pos[M.col_idx[k]] = k;
    for (int kk = M.row_ptr[i]; kk < M.row_ptr[i + 1]; ++kk) {
      const int k = M.col_idx[kk];
      if (k >= i) break;  // columns ascending; only the strict lower part
      const double ukk = M.val[diag[k]];
      const double lik = M.val[kk] / ukk;
      M.val[kk] = lik;
      for (int jj = diag[k] + 1; jj < M.row_ptr[k + 1]; ++jj) {
        const int p = pos[M.col_idx[jj]];
        if (p >= 0) M.val[p] -= lik * M.val[jj];
      }
    }
    if (diag[i] < 0 || std::abs(M.val[diag[i]]) <= pivot_floor)
      throw std::runtime_error(
          "ilu0_factor: zero pivot in row " + std::to_string(i) +
          "; try a larger diagonal shift");
    for (int k = M.row_ptr[i]; k < M.row_ptr[i + 1]; ++k)
      pos[M.col_idx[k]] = -1;
  }

  Ilu0Factors f;
  f.lu = std::move(M);
  f.diag_idx = std::move(diag);
  f.shift = shift;
  return f;
}

// M^{-1} v: forward solve with unit L, back solve with U.  Each triangular
// sweep is charged as one daxpy (same whole-matrix granularity as the matvec
// counter; preconditioner solves never count as mvps).
inline Vec ilu0_apply(const Ilu0Factors& f, const Vec& v, OpCounter& ctr) {
  const SparseMatrix& M = f.lu;
  if (static_cast<int>(v.size()) != M.n)
    throw std::invalid_argument("ilu0_apply: dimension mismatch");
  Vec x = v;
  for (int i = 0; i < M.n; ++i) {
    double s = x[i];
    for (int k = M.row_ptr[i]; k < f.diag_idx[i]; ++k)
      s -= M.val[k] * x[M.col_idx[k]];
    x[i] = s;
  }
  ++ctr.daxpys;
  for (int i = M.n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = f.diag_idx[i] + 1; k < M.row_ptr[i + 1]; ++k)
      s -= M.val[k] * x[M.col_idx[k]];
    x[i] = s / M.val[f.diag_idx[i]];
  }
  ++ctr.daxpys;
  return x;
}

// v -> A M^{-1} v, the right-preconditioned operator.
class RightIluOperator final : public LinearOperator {
 public:
  RightIluOperator(const SparseMatrix& A, const Ilu0Factors& f)
      : A_(A), f_(f) {}
  int dim() const override { return A_.n; }
  void apply(const Vec& v, Vec& out, OpCounter& ctr) const override {
    Vec w = ilu0_apply(f_, v, ctr);
    matvec(A_, w, out, ctr);
  }

 private:
  const SparseMatrix& A_;
  const Ilu0Factors& f_;
};

}  // namespace ppg

#endif  // PPG_ILU_HPP
