// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_POLY_HPP
#define PPG_POLY_HPP

#include <memory>
#include <random>

#include "ppg/krylov.hpp"

namespace ppg {

struct Root {
  Complex value;
  bool added = false;  // inserted by stability control
};

// Factored GMRES residual polynomial pi(alpha) = prod(1 - alpha/theta_i) and
// the derived phi = 1 - pi, p = phi(alpha)/alpha.  Roots are harmonic Ritz
// values in modified Leja order, conjugate pairs adjacent, added roots in
// place.  The base operator is what the polynomial was generated from
// (A, A M^{-1}, or an inner phi when composing).
struct PolyPreconditioner {
  std::vector<Root> roots;
  int degree_original = 0;
  int degree_added = 0;
  std::shared_ptr<const LinearOperator> base;

  int degree_total() const { return static_cast<int>(roots.size()); }
  std::string degree_label() const {
    std::string s = std::to_string(degree_original);
    if (degree_added > 0) s += "+" + std::to_string(degree_added);
    return s;
  }
};

// pof and placement data from the root-adding pass, plus the StCh residual
// comparison once it has been run.
struct StabilityReport {
  std::vector<double> pof;        // per original (ordered) root
  std::vector<int> added_count;   // extra copies per original root entry
  double max_pof = 0.0;
  int total_added = 0;
  double stch = std::numeric_limits<double>::quiet_NaN();
  OpCounter construction_cost;
  std::uint64_t seed = 0;
};

namespace detail {

// A root whose imaginary part is at rounding-noise scale is treated as real.
inline Complex snap_real(Complex z) {
  if (std::abs(z.imag()) <= 1e-13 * std::abs(z)) return Complex(z.real(), 0.0);
  return z;
}

inline bool is_real(const Complex& z) { return z.imag() == 0.0; }

}  // namespace detail

// Greedy modified Leja ordering: start from the maximum-modulus value, then
// repeatedly take the value maximizing the sum of log-distances to everything
// already placed; a chosen non-real value drags its conjugate in right after
// it.  Products are kept in log space so high degrees do not overflow.
// Ties (log sums within 1e-12) resolve to the lower original index.
inline std::vector<Complex> modified_leja_order(std::vector<Complex> vals) {
  if (vals.empty())
    throw std::invalid_argument("modified_leja_order: empty input");
  for (Complex& v : vals) v = detail::snap_real(v);
  const int n = static_cast<int>(vals.size());

  // Pair each non-real value with its conjugate; track pair representatives.
  std::vector<int> partner(n, -1);
  for (int i = 0; i < n; ++i) {
    if (detail::is_real(vals[i]) || partner[i] >= 0) continue;
    int best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (int j = i + 1; j < n; ++j) {
      if (detail::is_real(vals[j]) || partner[j] >= 0) continue;
      const double dist = std::abs(vals[j] - std::conj(vals[i]));
      if (dist < bestd) {
        bestd = dist;
        best = j;
      }
    }
    if (best < 0)
      throw std::invalid_argument(
          "modified_leja_order: input not conjugate-closed");
    partner[i] = best;
    partner[best] = i;
  }

  std::vector<bool> used(n, false);
  std::vector<Complex> out;
  out.reserve(n);
  std::vector<double> logsum(n, 0.0);
  auto place = [&](int i) {
    used[i] = true;
    out.push_back(vals[i]);
    for (int j = 0; j < n; ++j)
      if (!used[j])
        logsum[j] += std::log(std::max(std::abs(vals[j] - vals[i]), 1e-300));
  };
  // Candidates are real values plus one representative per conjugate pair
  // (the member with positive imaginary part).
  auto is_candidate = [&](int i) {
    return !used[i] && (detail::is_real(vals[i]) || vals[i].imag() > 0.0);
  };

  // First element: maximum modulus; ties go to the lower original index.
  {
    int best = -1;
    double bestmod = -1.0;
    for (int i = 0; i < n; ++i) {
      if (!is_candidate(i)) continue;
      const double m = std::abs(vals[i]);
      if (m > bestmod + 1e-12) {
        bestmod = m;
        best = i;
      }
    }
    place(best);
    if (partner[best] >= 0) place(partner[best]);
  }
  while (static_cast<int>(out.size()) < n) {
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (!is_candidate(i)) continue;
      if (best < 0 || logsum[i] > logsum[best] + 1e-12) best = i;
    }
    place(best);
    if (partner[best] >= 0) place(partner[best]);
  }
  return out;
}

// pof(k) = prod_{i != k} |1 - theta_k/theta_i|, evaluated as exp of a log sum.
inline double compute_pof(const std::vector<Complex>& roots, int k) {
  const int d = static_cast<int>(roots.size());
  if (k < 0 || k >= d) throw std::invalid_argument("compute_pof: bad index");
  for (const Complex& r : roots)
    if (std::abs(r) == 0.0)
      throw std::invalid_argument("compute_pof: zero root");
  double s = 0.0;
  for (int i = 0; i < d; ++i) {
    if (i == k) continue;
    s += std::log(std::max(std::abs(1.0 - roots[k] / roots[i]), 1e-300));
  }
  return std::exp(s);
}

namespace detail {

// Least integer strictly greater than (log10(pof)-4)/14, floored at zero.
inline int extra_root_count(double pof) {
  const double v = (std::log10(std::max(pof, 1e-300)) - 4.0) / 14.0;
  if (v <= 0.0) return 0;
  return static_cast<int>(std::floor(v)) + 1;
}

}  // namespace detail

// Stability control: extra copies of outstanding roots.  For c extra copies
// of the root at (1-based) position q in a list of current length L, copy
// j < c goes to position round(q + j*(L-q)/c) and copy c to the end, each
// with its conjugate immediately after when non-real.
inline std::pair<std::vector<Root>, StabilityReport> add_stability_roots(
    const std::vector<Complex>& ordered) {
  const int d = static_cast<int>(ordered.size());
  StabilityReport rep;
  rep.pof.resize(d);
  rep.added_count.assign(d, 0);
  for (int k = 0; k < d; ++k) {
    rep.pof[k] = compute_pof(ordered, k);
    rep.max_pof = std::max(rep.max_pof, rep.pof[k]);
    rep.added_count[k] = detail::extra_root_count(rep.pof[k]);
  }

  std::vector<Root> out;
  out.reserve(d);
  for (const Complex& v : ordered) out.push_back({v, false});

  for (int k = 0; k < d; ++k) {
    const Complex theta = ordered[k];
    const bool pair = !detail::is_real(theta);
    if (pair && k > 0 && ordered[k - 1] == std::conj(theta))
      continue;  // second member; handled with its partner
    const int c = rep.added_count[k];
    if (c == 0) continue;
    auto insert_copy = [&](int pos) {  // 0-based insertion position
      pos = std::min(pos, static_cast<int>(out.size()));
      out.insert(out.begin() + pos, {theta, true});
      if (pair) out.insert(out.begin() + pos + 1, {std::conj(theta), true});
      rep.total_added += pair ? 2 : 1;
    };
    // Current position of the root occurrence this pass is anchored to.
    int q = 0;
    for (int i = 0; i < static_cast<int>(out.size()); ++i)
      if (out[i].value == theta && !out[i].added) {
        q = i + 1;  // 1-based
        break;
      }
    const int L = static_cast<int>(out.size());
    for (int j = c - 1; j >= 1; --j) {
      const int pos1 = static_cast<int>(
          std::lround(q + static_cast<double>(j) * (L - q) / c));
      insert_copy(std::max(pos1 - 1, q));  // 1-based position pos1
    }
    insert_copy(static_cast<int>(out.size()));  // final copy at the end
  }
  return {std::move(out), std::move(rep)};
}

namespace detail {

// Shared body of the pi / phi application: walks the
// ordered roots, one product per real root and a combined three-term update
// per conjugate pair, all in real arithmetic.  Returns pi(Op) v.
inline Vec pi_times(const LinearOperator& op, const std::vector<Root>& roots,
                    const Vec& v, OpCounter& ctr) {
  Vec poly = v;
  Vec product, temp;
  std::size_t i = 0;
  while (i < roots.size()) {
    const Complex th = roots[i].value;
    if (is_real(th)) {
      op.apply(poly, product, ctr);
      axpy(-1.0 / th.real(), product, poly, ctr);
      i += 1;
    } else {
      if (i + 1 >= roots.size() || roots[i + 1].value != std::conj(th))
        throw std::logic_error("pi_times: conjugate pair not adjacent");
      const double a = th.real(), b = th.imag();
      const double mod = a * a + b * b;
      op.apply(poly, product, ctr);
      op.apply(product, temp, ctr);
      // temp = A*product - 2a*product
      axpy(-2.0 * a, product, temp, ctr);
      axpy(1.0 / mod, temp, poly, ctr);
      i += 2;
    }
  }
  return poly;
}

}  // namespace detail

// pi(Op) v = prod (I - Op/theta_i) v over the ordered root list.
inline Vec apply_pi(const PolyPreconditioner& pp, const Vec& v,
                    OpCounter& ctr) {
  return detail::pi_times(*pp.base, pp.roots, v, ctr);
}

// phi(Op) v = v - pi(Op) v.
inline Vec apply_phi(const PolyPreconditioner& pp, const Vec& v,
                     OpCounter& ctr) {
  Vec poly = detail::pi_times(*pp.base, pp.roots, v, ctr);
  Vec phi;
  add_scaled(v, -1.0, poly, phi, ctr);
  return phi;
}

// p(Op) v by the telescoped sum: alternates between adding the next u_k term
// into the result and extending the running product, with the conjugate-pair
// combination, skipping the product update when a pair ends the list.
inline Vec apply_p(const PolyPreconditioner& pp, const Vec& v,
                   OpCounter& ctr) {
  const auto& roots = pp.roots;
  const int d = static_cast<int>(roots.size());
  if (d == 0) throw std::logic_error("apply_p: empty root list");
  Vec product = v;
  Vec poly(v.size(), 0.0);
  Vec t, temp;
  int i = 0;
  while (i < d - 1) {
    const Complex th = roots[i].value;
    if (detail::is_real(th)) {
      axpy(1.0 / th.real(), product, poly, ctr);
      pp.base->apply(product, t, ctr);
      axpy(-1.0 / th.real(), t, product, ctr);
      i += 1;
    } else {
      if (i + 1 >= d || roots[i + 1].value != std::conj(th))
        throw std::logic_error("apply_p: conjugate pair not adjacent");
      const double a = th.real(), b = th.imag();
      const double mod = a * a + b * b;
      pp.base->apply(product, t, ctr);
      // temp = 2a*product - A*product
      temp.resize(v.size());
      for (std::size_t j = 0; j < v.size(); ++j)
        temp[j] = 2.0 * a * product[j] - t[j];
      ++ctr.daxpys;
      axpy(1.0 / mod, temp, poly, ctr);
      if (i <= d - 3) {
        pp.base->apply(temp, t, ctr);
        axpy(-1.0 / mod, t, product, ctr);
      }
      i += 2;
    }
  }
  if (i == d - 1 && detail::is_real(roots[d - 1].value))
    axpy(1.0 / roots[d - 1].value.real(), product, poly, ctr);
  return poly;
}

// Scalar evaluations through the same factored forms (for graphs and
// spectrum mapping).
inline Complex eval_pi(const PolyPreconditioner& pp, Complex alpha) {
  Complex prod(1.0, 0.0);
  for (const Root& r : pp.roots) prod *= (1.0 - alpha / r.value);
  return prod;
}

inline Complex eval_phi(const PolyPreconditioner& pp, Complex alpha) {
  return 1.0 - eval_pi(pp, alpha);
}

inline double eval_phi_real(const PolyPreconditioner& pp, double alpha) {
  // Real arithmetic with pair combining, mirroring the vector path.
  double prod = 1.0;
  std::size_t i = 0;
  while (i < pp.roots.size()) {
    const Complex th = pp.roots[i].value;
    if (detail::is_real(th)) {
      prod *= (1.0 - alpha / th.real());
      i += 1;
    } else {
      const double a = th.real(), mod = std::norm(th);
      prod *= (1.0 + (alpha * alpha - 2.0 * alpha * a) / mod);
      i += 2;
    }
  }
  return 1.0 - prod;
}

struct BuildOptions {
  bool stability_control = true;
};

// Polynomial construction from one GMRES(d) cycle on a caller-supplied start
// vector.  The construction op counts land in the report so totals include
// the cost of creating the preconditioner.
inline std::pair<PolyPreconditioner, StabilityReport>
build_polynomial_from_vector(std::shared_ptr<const LinearOperator> op,
                             const Vec& start, int d,
                             const BuildOptions& opts = {}) {
  if (d < 1) throw std::invalid_argument("build_polynomial: degree < 1");
  OpCounter ctr;
  ArnoldiData ad = arnoldi_cycle(*op, start, d, ctr);
  auto theta = harmonic_ritz_values(ad);
  auto ordered = modified_leja_order(std::move(theta));

  PolyPreconditioner pp;
  pp.base = std::move(op);
  pp.degree_original = static_cast<int>(ordered.size());
  StabilityReport rep;
  if (opts.stability_control) {
    auto [roots, r] = add_stability_roots(ordered);
    pp.roots = std::move(roots);
    rep = std::move(r);
    pp.degree_added = rep.total_added;
  } else {
    rep.pof.resize(ordered.size());
    rep.added_count.assign(ordered.size(), 0);
    for (std::size_t k = 0; k < ordered.size(); ++k) {
      rep.pof[k] = compute_pof(ordered, static_cast<int>(k));
      rep.max_pof = std::max(rep.max_pof, rep.pof[k]);
    }
    for (const Complex& v : ordered) pp.roots.push_back({v, false});
  }
  rep.construction_cost = ctr;
  return {std::move(pp), std::move(rep)};
}

inline Vec random_unit_vector(int n, std::uint64_t seed, OpCounter& ctr) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Vec v(n);
  for (double& x : v) x = normal(rng);
  const double nrm = norm2(v, ctr);
  scal(1.0 / nrm, v, ctr);
  return v;
}

// Standard entry point: random Normal(0,1) start vector, seeded.
inline std::pair<PolyPreconditioner, StabilityReport> build_polynomial(
    std::shared_ptr<const LinearOperator> op, int d, std::uint64_t seed,
    const BuildOptions& opts = {}) {
  OpCounter ctr;
  Vec start = random_unit_vector(op->dim(), seed, ctr);
  auto [pp, rep] = build_polynomial_from_vector(std::move(op), start, d, opts);
  rep.construction_cost += ctr;
  rep.seed = seed;
  return {std::move(pp), std::move(rep)};
}

// StCh = ||r1 - r2|| with r1 = b - Op p(Op) b (factored one-pass path) and
// r2 = pi(Op) b (direct product path).  Estimates the attainable residual floor.
inline double stability_check(const PolyPreconditioner& pp, const Vec& b,
                              OpCounter& ctr) {
  Vec xhat = apply_p(pp, b, ctr);
  Vec ax;
  pp.base->apply(xhat, ax, ctr);
  Vec r1;
  add_scaled(b, -1.0, ax, r1, ctr);
  Vec r2 = apply_pi(pp, b, ctr);
  axpy(-1.0, r2, r1, ctr);
  return norm2(r1, ctr);
}

// phi operator view over a polynomial, usable as the matrix of an outer
// GMRES run or as the base of another polynomial.
class PhiOperator final : public LinearOperator {
 public:
  explicit PhiOperator(std::shared_ptr<const PolyPreconditioner> pp)
      : pp_(std::move(pp)) {}
  int dim() const override { return pp_->base->dim(); }
  void apply(const Vec& v, Vec& out, OpCounter& ctr) const override {
    out = apply_phi(*pp_, v, ctr);
  }
  const PolyPreconditioner& poly() const { return *pp_; }

 private:
  std::shared_ptr<const PolyPreconditioner> pp_;
};

// Double polynomial preconditioning: phi_2(phi_1(A)) forward, solution map
// x = p_1(A) p_2(phi_1(A)) z.
struct DoublePolyPreconditioner {
  std::shared_ptr<const PolyPreconditioner> inner;  // over A
  std::shared_ptr<const PolyPreconditioner> outer;  // over phi_1(A)
  StabilityReport inner_report, outer_report;

  std::shared_ptr<const LinearOperator> forward() const {
    return std::make_shared<PhiOperator>(outer);
  }

  Vec apply_solution_map(const Vec& z, OpCounter& ctr) const {
    Vec w = apply_p(*outer, z, ctr);
    return apply_p(*inner, w, ctr);
  }
};

inline DoublePolyPreconditioner compose_double(
    std::shared_ptr<const LinearOperator> op, int d1, int d2,
    std::uint64_t seed, const BuildOptions& opts = {}) {
  if (d1 < 1 || d2 < 1)
    throw std::invalid_argument("compose_double: degrees must be >= 1");
  DoublePolyPreconditioner dp;
  auto [pp1, rep1] = build_polynomial(std::move(op), d1, seed, opts);
  dp.inner = std::make_shared<const PolyPreconditioner>(std::move(pp1));
  dp.inner_report = std::move(rep1);
  auto phi1 = std::make_shared<PhiOperator>(dp.inner);
  auto [pp2, rep2] = build_polynomial(std::move(phi1), d2, seed + 1, opts);
  dp.outer = std::make_shared<const PolyPreconditioner>(std::move(pp2));
  dp.outer_report = std::move(rep2);
  return dp;
}

}  // namespace ppg

#endif  // PPG_POLY_HPP
