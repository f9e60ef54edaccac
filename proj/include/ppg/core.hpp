// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_CORE_HPP
#define PPG_CORE_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace ppg {

using Vec = std::vector<double>;
using Complex = std::complex<double>;

// Running tallies in the cost model of the benchmark tables: matrix-vector
// products, daxpys (any length-n scaled add or scale), and dot products
// (projections and norms).  vops = daxpys + dots.
struct OpCounter {
  std::int64_t mvps = 0;
  std::int64_t daxpys = 0;
  std::int64_t dots = 0;

  std::int64_t vops() const { return daxpys + dots; }

  OpCounter& operator+=(const OpCounter& o) {
    mvps += o.mvps;
    daxpys += o.daxpys;
    dots += o.dots;
    return *this;
  }
};

inline double dot(const Vec& x, const Vec& y, OpCounter& ctr) {
  if (x.size() != y.size())
    throw std::invalid_argument("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  ++ctr.dots;
  return s;
}

inline double norm2(const Vec& x, OpCounter& ctr) {
  double s = 0.0;
  for (double v : x) s += v * v;
  ++ctr.dots;
  return std::sqrt(s);
}

// Uncounted norm, for reporting only.
inline double norm2(const Vec& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

// y += a*x
inline void axpy(double a, const Vec& x, Vec& y, OpCounter& ctr) {
  if (x.size() != y.size())
    throw std::invalid_argument("axpy: dimension mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
  ++ctr.daxpys;
}

// x *= a
inline void scal(double a, Vec& x, OpCounter& ctr) {
  for (double& v : x) v *= a;
  ++ctr.daxpys;
}

// z = x + a*y, one fused update line
inline void add_scaled(const Vec& x, double a, const Vec& y, Vec& z,
                       OpCounter& ctr) {
  if (x.size() != y.size())
    throw std::invalid_argument("add_scaled: dimension mismatch");
  z.resize(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] + a * y[i];
  ++ctr.daxpys;
}

// Abstract operator v -> Op*v.  Concrete instances: the bare matrix, the
// matrix composed with a right preconditioner, a phi polynomial operator, or
// a composition of two phi operators.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual int dim() const = 0;
  virtual void apply(const Vec& v, Vec& out, OpCounter& ctr) const = 0;

  Vec apply(const Vec& v, OpCounter& ctr) const {
    Vec out;
    apply(v, out, ctr);
    return out;
  }
};

}  // namespace ppg

#endif  // PPG_CORE_HPP
