// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_DENSE_HPP
#define PPG_DENSE_HPP

#include <algorithm>
#include <cmath>

#include "ppg/core.hpp"

namespace ppg {

// Small row-major dense matrix for Hessenberg work.  Not a general dense
// linear-algebra layer; everything length-n stays sparse.
struct DenseMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;

  DenseMatrix() = default;
  DenseMatrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, 0.0) {}

  double& operator()(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double operator()(int i, int j) const {
    return a[std::size_t(i) * cols + j];
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (double v : a) s += v * v;
    return std::sqrt(s);
  }
};

// Solves M x = b by LU with partial pivoting, in place on copies.
// Throws on a numerically singular pivot.
inline std::vector<double> lu_solve(DenseMatrix M, std::vector<double> b,
                                    double pivot_tol_rel = 1e-14) {
  const int n = M.rows;
  if (M.cols != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("lu_solve: dimension mismatch");
  const double scale = std::max(M.frobenius_norm(), 1e-300);
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(M(i, k)) > std::abs(M(p, k))) p = i;
    if (std::abs(M(p, k)) <= pivot_tol_rel * scale)
      throw std::runtime_error("lu_solve: singular matrix");
    if (p != k) {
      for (int j = 0; j < n; ++j) std::swap(M(p, j), M(k, j));
      std::swap(b[p], b[k]);
    }
    for (int i = k + 1; i < n; ++i) {
      const double l = M(i, k) / M(k, k);
      M(i, k) = l;
      for (int j = k + 1; j < n; ++j) M(i, j) -= l * M(k, j);
      b[i] -= l * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= M(i, j) * b[j];
    b[i] = s / M(i, i);
  }
  return b;
}

// Householder reduction of a general square matrix to upper Hessenberg form
// (similarity transform; eigenvalues preserved).
inline DenseMatrix hessenberg_reduce(DenseMatrix A) {
  const int n = A.rows;
  if (A.cols != n) throw std::invalid_argument("hessenberg_reduce: not square");
  std::vector<double> u(n);
  for (int k = 0; k < n - 2; ++k) {
    double sigma = 0.0;
    for (int i = k + 1; i < n; ++i) sigma += A(i, k) * A(i, k);
    sigma = std::sqrt(sigma);
    if (sigma == 0.0) continue;
    if (A(k + 1, k) < 0.0) sigma = -sigma;
    double h = sigma * (sigma + A(k + 1, k));
    if (h == 0.0) continue;
    std::fill(u.begin(), u.end(), 0.0);
    u[k + 1] = A(k + 1, k) + sigma;
    for (int i = k + 2; i < n; ++i) u[i] = A(i, k);
    // A <- (I - u u^T / h) A (I - u u^T / h)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = k + 1; i < n; ++i) s += u[i] * A(i, j);
      s /= h;
      for (int i = k + 1; i < n; ++i) A(i, j) -= s * u[i];
    }
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = k + 1; j < n; ++j) s += A(i, j) * u[j];
      s /= h;
      for (int j = k + 1; j < n; ++j) A(i, j) -= s * u[j];
    }
    A(k + 1, k) = -sigma;
    for (int i = k + 2; i < n; ++i) A(i, k) = 0.0;
  }
  return A;
}

}  // namespace ppg

#endif  // PPG_DENSE_HPP
