// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations used only to produce expected values for tests.
// Everything here is written independently of the library under test: plain
// dense arithmetic, normal equations, Durand-Kerner root finding.

#ifndef PPG_TESTS_ORACLES_HPP
#define PPG_TESTS_ORACLES_HPP

#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "ppg/sparse.hpp"

namespace oracle {

using DMat = std::vector<std::vector<double>>;
using CD = std::complex<double>;

inline DMat dense_from_sparse(const ppg::SparseMatrix& A) {
  DMat M(A.n, std::vector<double>(A.n, 0.0));
  for (int i = 0; i < A.n; ++i)
    for (int k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k)
      M[i][A.col_idx[k]] += A.val[k];
  return M;
}

inline std::vector<double> dense_matvec(const DMat& M,
                                        const std::vector<double>& v) {
  const int n = static_cast<int>(M.size());
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += M[i][j] * v[j];
  return out;
}

inline double nrm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Gaussian elimination with partial pivoting; the direct-solve reference.
inline std::vector<double> gauss_solve(DMat M, std::vector<double> b) {
  const int n = static_cast<int>(M.size());
  for (int k = 0; k < n; ++k) {
    int p = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(M[i][k]) > std::abs(M[p][k])) p = i;
    if (M[p][k] == 0.0) throw std::runtime_error("gauss_solve: singular");
    std::swap(M[p], M[k]);
    std::swap(b[p], b[k]);
    for (int i = k + 1; i < n; ++i) {
      const double l = M[i][k] / M[k][k];
      for (int j = k; j < n; ++j) M[i][j] -= l * M[k][j];
      b[i] -= l * b[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    for (int j = i + 1; j < n; ++j) b[i] -= M[i][j] * b[j];
    b[i] /= M[i][i];
  }
  return b;
}

// Monic characteristic polynomial coefficients by the Faddeev-LeVerrier
// recurrence: returns c so that det(tI - M) = t^n + c[0] t^{n-1} + ... +
// c[n-1].
inline std::vector<double> char_poly(const DMat& M) {
  const int n = static_cast<int>(M.size());
  DMat Mk(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) Mk[i][i] = 1.0;  // M^0 companion term
  std::vector<double> c(n, 0.0);
  DMat N = Mk;  // N = I
  for (int k = 1; k <= n; ++k) {
    // N <- M * N
    DMat T(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l)
        for (int j = 0; j < n; ++j) T[i][j] += M[i][l] * N[l][j];
    double tr = 0.0;
    for (int i = 0; i < n; ++i) tr += T[i][i];
    c[k - 1] = -tr / k;
    for (int i = 0; i < n; ++i) T[i][i] += c[k - 1];
    N = T;
  }
  return c;
}

inline CD horner(const std::vector<CD>& coeffs, CD z) {
  CD s(0.0, 0.0);
  for (const CD& c : coeffs) s = s * z + c;
  return s;
}

// All roots of the monic polynomial z^n + a[0] z^{n-1} + ... + a[n-1] by
// Durand-Kerner iteration.
inline std::vector<CD> durand_kerner(const std::vector<double>& a,
                                     int iters = 2000) {
  const int n = static_cast<int>(a.size());
  std::vector<CD> coeffs(n + 1);
  coeffs[0] = 1.0;
  for (int i = 0; i < n; ++i) coeffs[i + 1] = a[i];
  double radius = 1.0;
  for (int i = 0; i < n; ++i)
    radius = std::max(radius, 2.0 * std::pow(std::abs(a[i]), 1.0 / (i + 1)));
  std::vector<CD> z(n);
  for (int i = 0; i < n; ++i)
    z[i] = radius * std::polar(0.9, 0.3 + 2.0 * M_PI * i / n);
  for (int it = 0; it < iters; ++it) {
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
      CD denom(1.0, 0.0);
      for (int j = 0; j < n; ++j)
        if (j != i) denom *= (z[i] - z[j]);
      const CD dz = horner(coeffs, z[i]) / denom;
      z[i] -= dz;
      shift = std::max(shift, std::abs(dz));
    }
    if (shift < 1e-14 * radius) break;
  }
  return z;
}

// d-step GMRES iterate and residual from x0 = 0, computed densely with
// re-orthogonalized Gram-Schmidt and a normal-equations solve of the small
// least squares.
inline std::pair<std::vector<double>, std::vector<double>> gmres_iterate(
    const DMat& A, const std::vector<double>& b, int d) {
  const int n = static_cast<int>(A.size());
  const double beta = nrm(b);
  std::vector<std::vector<double>> Q;
  std::vector<double> q = b;
  for (double& x : q) x /= beta;
  Q.push_back(q);
  std::vector<std::vector<double>> Hcols;
  int deff = d;
  for (int j = 0; j < d; ++j) {
    std::vector<double> w = dense_matvec(A, Q[j]);
    std::vector<double> h(j + 2, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i <= j; ++i) {
        double s = 0.0;
        for (int t = 0; t < n; ++t) s += Q[i][t] * w[t];
        h[i] += s;
        for (int t = 0; t < n; ++t) w[t] -= s * Q[i][t];
      }
    }
    h[j + 1] = nrm(w);
    Hcols.push_back(h);
    if (h[j + 1] < 1e-13 * beta) {
      deff = j + 1;
      break;
    }
    for (double& x : w) x /= h[j + 1];
    Q.push_back(w);
  }
  // min || beta e1 - H y || by Householder QR on the (deff+1) x deff H.
  const int rows = deff + 1;
  DMat R(rows, std::vector<double>(deff, 0.0));
  for (int j = 0; j < deff; ++j)
    for (int i = 0; i < static_cast<int>(Hcols[j].size()); ++i)
      R[i][j] = Hcols[j][i];
  std::vector<double> g(rows, 0.0);
  g[0] = beta;
  for (int k = 0; k < deff; ++k) {
    double sigma = 0.0;
    for (int i = k; i < rows; ++i) sigma += R[i][k] * R[i][k];
    sigma = std::sqrt(sigma);
    if (R[k][k] > 0.0) sigma = -sigma;
    std::vector<double> u(rows, 0.0);
    u[k] = R[k][k] - sigma;
    for (int i = k + 1; i < rows; ++i) u[i] = R[i][k];
    double h = 0.0;
    for (int i = k; i < rows; ++i) h += u[i] * u[i];
    if (h == 0.0) continue;
    for (int j = k; j < deff; ++j) {
      double s = 0.0;
      for (int i = k; i < rows; ++i) s += u[i] * R[i][j];
      s = 2.0 * s / h;
      for (int i = k; i < rows; ++i) R[i][j] -= s * u[i];
    }
    double s = 0.0;
    for (int i = k; i < rows; ++i) s += u[i] * g[i];
    s = 2.0 * s / h;
    for (int i = k; i < rows; ++i) g[i] -= s * u[i];
  }
  std::vector<double> y(deff, 0.0);
  for (int i = deff - 1; i >= 0; --i) {
    double s = g[i];
    for (int j = i + 1; j < deff; ++j) s -= R[i][j] * y[j];
    y[i] = s / R[i][i];
  }
  std::vector<double> x(n, 0.0);
  for (int j = 0; j < deff; ++j)
    for (int t = 0; t < n; ++t) x[t] += y[j] * Q[j][t];
  std::vector<double> r = dense_matvec(A, x);
  for (int t = 0; t < n; ++t) r[t] = b[t] - r[t];
  return {x, r};
}

// Coefficients c minimizing || b + sum_j c[j] A^{j+1} b ||, i.e. the
// residual polynomial pi(t) = 1 + c[0] t + ... + c[d-1] t^d in the power
// basis, by normal equations.  Only reliable for small d.
inline std::vector<double> residual_poly_coeffs(const DMat& A,
                                                const std::vector<double>& b,
                                                int d) {
  const int n = static_cast<int>(A.size());
  std::vector<std::vector<double>> K;  // A^1 b .. A^d b
  std::vector<double> v = b;
  for (int j = 0; j < d; ++j) {
    v = dense_matvec(A, v);
    K.push_back(v);
  }
  DMat G(d, std::vector<double>(d, 0.0));
  std::vector<double> rhs(d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j)
      for (int t = 0; t < n; ++t) G[i][j] += K[i][t] * K[j][t];
    for (int t = 0; t < n; ++t) rhs[i] -= K[i][t] * b[t];
  }
  return gauss_solve(G, rhs);
}

// Factored-form product prod_i (I - A/theta_i) v in complex dense
// arithmetic, factor by factor in the given order.
inline std::vector<double> factored_product(const DMat& A,
                                            const std::vector<CD>& roots,
                                            const std::vector<double>& v) {
  const int n = static_cast<int>(A.size());
  std::vector<CD> w(v.begin(), v.end());
  for (const CD& th : roots) {
    std::vector<CD> Aw(n, CD(0.0, 0.0));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) Aw[i] += A[i][j] * w[j];
    for (int i = 0; i < n; ++i) w[i] -= Aw[i] / th;
  }
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) out[i] = w[i].real();
  return out;
}

// Brute-force modified Leja ordering with plain (non-log) products, for
// cross-checking on small well-scaled sets.
inline std::vector<CD> leja_order(std::vector<CD> vals) {
  const int n = static_cast<int>(vals.size());
  std::vector<bool> used(n, false);
  std::vector<CD> out;
  auto conj_index = [&](int i) {
    if (vals[i].imag() == 0.0) return -1;
    for (int j = 0; j < n; ++j)
      if (j != i && !used[j] && vals[j] == std::conj(vals[i])) return j;
    return -1;
  };
  while (static_cast<int>(out.size()) < n) {
    int best = -1;
    double bestv = -1.0;
    for (int i = 0; i < n; ++i) {
      if (used[i] || vals[i].imag() < 0.0) continue;
      double prod = out.empty() ? std::abs(vals[i]) : 1.0;
      for (const CD& p : out) prod *= std::abs(vals[i] - p);
      if (prod > bestv * (1.0 + 1e-12)) {
        bestv = prod;
        best = i;
      }
    }
    used[best] = true;
    out.push_back(vals[best]);
    const int c = conj_index(best);
    if (c >= 0) {
      used[c] = true;
      out.push_back(vals[c]);
    }
  }
  return out;
}

// Chebyshev polynomial of the first kind by the three-term recurrence.
inline double cheb_t(int m, double x) {
  double tkm1 = 1.0, tk = x;
  if (m == 0) return tkm1;
  for (int k = 1; k < m; ++k) {
    const double tnext = 2.0 * x * tk - tkm1;
    tkm1 = tk;
    tk = tnext;
  }
  return tk;
}

}  // namespace oracle

#endif  // PPG_TESTS_ORACLES_HPP
