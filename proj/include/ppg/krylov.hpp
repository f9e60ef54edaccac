// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_KRYLOV_HPP
#define PPG_KRYLOV_HPP

#include <limits>
#include <utility>

#include "ppg/dense.hpp"

namespace ppg {

// One Arnoldi decomposition A V_d = V_{d+1} H_{d+1,d} from modified
// Gram-Schmidt with no reorthogonalization.  d_eff < d after a happy
// breakdown (h_{j+1,j} ~ 0, Krylov space invariant).
struct ArnoldiData {
  std::vector<Vec> V;  // d_eff+1 basis vectors
  DenseMatrix H;       // (d_eff+1) x d_eff upper Hessenberg
  double beta = 0.0;   // norm of the starting vector
  int d_eff = 0;
};

inline ArnoldiData arnoldi_cycle(const LinearOperator& op, const Vec& b,
                                 int d, OpCounter& ctr) {
  if (d < 1) throw std::invalid_argument("arnoldi_cycle: degree < 1");
  if (static_cast<int>(b.size()) != op.dim())
    throw std::invalid_argument("arnoldi_cycle: dimension mismatch");
  ArnoldiData ad;
  ad.beta = norm2(b, ctr);
  if (ad.beta == 0.0)
    throw std::invalid_argument("arnoldi_cycle: zero starting vector");
  ad.V.reserve(d + 1);
  ad.V.push_back(b);
  scal(1.0 / ad.beta, ad.V[0], ctr);
  DenseMatrix H(d + 1, d);
  double hnorm2 = 0.0;  // squared Frobenius norm of entries built so far
  int deff = d;
  bool breakdown = false;
  for (int j = 0; j < d; ++j) {
    Vec w = op.apply(ad.V[j], ctr);
    for (int i = 0; i <= j; ++i) {
      const double h = dot(ad.V[i], w, ctr);
      H(i, j) = h;
      hnorm2 += h * h;
      axpy(-h, ad.V[i], w, ctr);
    }
    const double hnext = norm2(w, ctr);
    H(j + 1, j) = hnext;
    hnorm2 += hnext * hnext;
    if (hnext <= 1e-14 * std::sqrt(hnorm2)) {
      deff = j + 1;
      breakdown = true;
      ad.V.push_back(Vec(b.size(), 0.0));
      break;
    }
    scal(1.0 / hnext, w, ctr);
    ad.V.push_back(std::move(w));
  }
  ad.d_eff = deff;
  if (deff == d && !breakdown) {
    ad.H = std::move(H);
  } else {
    ad.H = DenseMatrix(deff + 1, deff);
    for (int j = 0; j < deff; ++j)
      for (int i = 0; i <= j + 1; ++i) ad.H(i, j) = H(i, j);
    ad.V.resize(deff + 1);
  }
  return ad;
}

// Incremental plane-rotation solve of min ||beta e1 - H y||.  Columns are
// added one at a time so the per-iteration residual norm is available (the
// GMRES shortcut residual).
class HessLstsq {
 public:
  explicit HessLstsq(double beta) : g_{beta} {}

  // h holds H(0..j+1, j) for the new column j; returns the updated residual.
  double add_column(std::vector<double> h) {
    const int j = static_cast<int>(cs_.size());
    if (static_cast<int>(h.size()) != j + 2)
      throw std::invalid_argument("HessLstsq: bad column length");
    for (int i = 0; i < j; ++i) {
      const double t = cs_[i] * h[i] + sn_[i] * h[i + 1];
      h[i + 1] = -sn_[i] * h[i] + cs_[i] * h[i + 1];
      h[i] = t;
    }
    const double r = std::hypot(h[j], h[j + 1]);
    double c = 1.0, s = 0.0;
    if (r > 0.0) {
      c = h[j] / r;
      s = h[j + 1] / r;
    }
    h[j] = r;
    h.pop_back();
    R_.push_back(std::move(h));
    cs_.push_back(c);
    sn_.push_back(s);
    const double gj = g_.back();
    g_.back() = c * gj;
    g_.push_back(-s * gj);
    return std::abs(g_.back());
  }

  int size() const { return static_cast<int>(cs_.size()); }
  double residual() const { return std::abs(g_.back()); }

  std::vector<double> solve() const {
    const int j = size();
    std::vector<double> y(j, 0.0);
    for (int i = j - 1; i >= 0; --i) {
      double s = g_[i];
      for (int k = i + 1; k < j; ++k) s -= R_[k][i] * y[k];
      if (R_[i][i] == 0.0)
        throw std::runtime_error("HessLstsq: singular triangular factor");
      y[i] = s / R_[i][i];
    }
    return y;
  }

 private:
  std::vector<std::vector<double>> R_;  // column i of the triangular factor
  std::vector<double> cs_, sn_, g_;
};

// y minimizing ||beta e1 - H y|| for a (j+1) x j Hessenberg, plus the
// minimum value itself.
inline std::pair<std::vector<double>, double> hessenberg_lstsq(
    const DenseMatrix& H, double beta) {
  const int j = H.cols;
  if (H.rows != j + 1)
    throw std::invalid_argument("hessenberg_lstsq: H must be (j+1) x j");
  HessLstsq ls(beta);
  for (int k = 0; k < j; ++k) {
    std::vector<double> col(k + 2);
    for (int i = 0; i <= k + 1; ++i) col[i] = H(i, k);
    ls.add_column(std::move(col));
  }
  return {ls.solve(), ls.residual()};
}

// All eigenvalues of a real upper-Hessenberg matrix by the implicit
// double-shift QR iteration with 2x2 deflation, so complex eigenvalues come
// out in exact conjugate pairs.  Throws if the sweep cap is exceeded.
inline std::vector<Complex> hessenberg_eigenvalues(DenseMatrix a,
                                                   int max_sweeps = -1) {
  const int n = a.rows;
  if (a.cols != n)
    throw std::invalid_argument("hessenberg_eigenvalues: not square");
  if (max_sweeps < 0) max_sweeps = 100 * n;
  const double EPS = std::numeric_limits<double>::epsilon();
  std::vector<Complex> wri(n);
  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));
  if (anorm == 0.0) return wri;
  int nn = n - 1;
  double t = 0.0;
  int sweeps = 0;
  while (nn >= 0) {
    int its = 0;
    int l;
    do {
      for (l = nn; l > 0; l--) {
        double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(a(l, l - 1)) <= EPS * s) {
          a(l, l - 1) = 0.0;
          break;
        }
      }
      double x = a(nn, nn);
      if (l == nn) {
        wri[nn--] = Complex(x + t, 0.0);
      } else {
        double y = a(nn - 1, nn - 1);
        double w = a(nn, nn - 1) * a(nn - 1, nn);
        if (l == nn - 1) {
          double p = 0.5 * (y - x);
          double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + (p >= 0.0 ? z : -z);
            wri[nn - 1] = wri[nn] = Complex(x + z, 0.0);
            if (z != 0.0) wri[nn] = Complex(x - w / z, 0.0);
          } else {
            wri[nn] = Complex(x + p, -z);
            wri[nn - 1] = std::conj(wri[nn]);
          }
          nn -= 2;
        } else {
          if (++sweeps > max_sweeps)
            throw std::runtime_error(
                "hessenberg_eigenvalues: QR iteration did not converge");
          if (its == 10 || its == 20) {
            t += x;
            for (int i = 0; i < nn + 1; ++i) a(i, i) -= x;
            double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m;
          double p = 0.0, q = 0.0, r = 0.0;
          for (m = nn - 2; m >= l; m--) {
            double z = a(m, m);
            double rr = x - z;
            double ss = y - z;
            p = (rr * ss - w) / a(m + 1, m) + a(m, m + 1);
            q = a(m + 1, m + 1) - z - rr - ss;
            r = a(m + 2, m + 1);
            double sc = std::abs(p) + std::abs(q) + std::abs(r);
            p /= sc;
            q /= sc;
            r /= sc;
            if (m == l) break;
            const double u =
                std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v =
                std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) +
                               std::abs(a(m + 1, m + 1)));
            if (u <= EPS * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            a(i + 2, i) = 0.0;
            if (i != m) a(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = a(k, k - 1);
              q = a(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = a(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            double s = std::sqrt(p * p + q * q + r * r);
            if (p < 0.0) s = -s;
            if (s != 0.0) {
              if (k == m) {
                if (l != m) a(k, k - 1) = -a(k, k - 1);
              } else {
                a(k, k - 1) = -s * x;
              }
              p += s;
              x = p / s;
              y = q / s;
              double z = r / s;
              q /= p;
              r /= p;
              for (int j = k; j < nn + 1; ++j) {
                p = a(k, j) + q * a(k + 1, j);
                if (k + 1 != nn) {
                  p += r * a(k + 2, j);
                  a(k + 2, j) -= p * z;
                }
                a(k + 1, j) -= p * y;
                a(k, j) -= p * x;
              }
              const int mmin = nn < k + 3 ? nn : k + 3;
              for (int i = l; i < mmin + 1; ++i) {
                p = x * a(i, k) + y * a(i, k + 1);
                if (k + 1 != nn) {
                  p += z * a(i, k + 2);
                  a(i, k + 2) -= p * r;
                }
                a(i, k + 1) -= p * q;
                a(i, k) -= p;
              }
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return wri;
}

// Roots of the GMRES residual polynomial: eigenvalues of
// H_d + h_{d+1,d}^2 f e_d^T with f solving H_d^* f = e_d.
inline std::vector<Complex> harmonic_ritz_values(const ArnoldiData& ad) {
  const int d = ad.d_eff;
  if (d < 1) throw std::invalid_argument("harmonic_ritz_values: empty data");
  DenseMatrix Hd(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Hd(i, j) = ad.H(i, j);
  const double h = ad.H(d, d - 1);
  DenseMatrix M = Hd;
  if (h != 0.0) {
    DenseMatrix Ht(d, d);  // adjoint system; H is real
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) Ht(i, j) = Hd(j, i);
    std::vector<double> ed(d, 0.0);
    ed[d - 1] = 1.0;
    std::vector<double> f;
    try {
      f = lu_solve(std::move(Ht), std::move(ed));
    } catch (const std::runtime_error&) {
      throw std::runtime_error(
          "harmonic Ritz values undefined; lower the degree");
    }
    for (int i = 0; i < d; ++i) M(i, d - 1) += h * h * f[i];
  }
  auto vals = hessenberg_eigenvalues(std::move(M));
  const double scale = Hd.frobenius_norm();
  for (const Complex& v : vals)
    if (std::abs(v) <= 1e-12 * scale)
      throw std::runtime_error(
          "zero harmonic Ritz value: polynomial breakdown; lower the degree");
  return vals;
}

}  // namespace ppg

#endif  // PPG_KRYLOV_HPP
