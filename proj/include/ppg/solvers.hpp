// SPDX-License-Identifier: Apache-2.0

#ifndef PPG_SOLVERS_HPP
#define PPG_SOLVERS_HPP

#include <chrono>
#include <string>

#include "ppg/ilu.hpp"
#include "ppg/poly.hpp"

namespace ppg {

struct SolveReport {
  bool converged = false;
  int cycles = 0;
  OpCounter ops;
  double final_relres = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> history;  // shortcut relative residual per iteration
  double stch = std::numeric_limits<double>::quiet_NaN();
  double wall_ms = 0.0;
  std::string degree_label = "1";
  std::string note;
};

namespace detail {

struct CycleResult {
  Vec x;            // correction computed this cycle (from x0 = 0)
  double resnorm;   // shortcut residual norm at cycle end
  int iters = 0;
  bool hit_tol = false;
  bool breakdown = false;
};

// One GMRES cycle for op*x = r0 with x0 = 0, modified Gram-Schmidt, plane
// rotations for the running least squares.  Stops at abs_tol on the shortcut
// residual, at max_iters, or on breakdown.
inline CycleResult gmres_cycle(const LinearOperator& op, const Vec& r0,
                               int max_iters, double abs_tol, OpCounter& ctr,
                               std::vector<double>* history = nullptr,
                               double history_scale = 1.0) {
  CycleResult out;
  const double beta = norm2(r0, ctr);
  if (beta == 0.0) {
    out.x.assign(r0.size(), 0.0);
    out.resnorm = 0.0;
    out.hit_tol = true;
    return out;
  }
  std::vector<Vec> V;
  V.push_back(r0);
  scal(1.0 / beta, V[0], ctr);
  HessLstsq ls(beta);
  double hnorm2 = 0.0;
  for (int j = 0; j < max_iters; ++j) {
    Vec w = op.apply(V[j], ctr);
    std::vector<double> col(j + 2);
    for (int i = 0; i <= j; ++i) {
      col[i] = dot(V[i], w, ctr);
      hnorm2 += col[i] * col[i];
      axpy(-col[i], V[i], w, ctr);
    }
    const double hnext = norm2(w, ctr);
    col[j + 1] = hnext;
    hnorm2 += hnext * hnext;
    const double res = ls.add_column(std::move(col));
    ++out.iters;
    if (history) history->push_back(res * history_scale);
    if (res <= abs_tol) {
      out.hit_tol = true;
      break;
    }
    if (hnext <= 1e-14 * std::sqrt(hnorm2)) {
      out.breakdown = true;  // cycle ends early, equivalent to a restart
      break;
    }
    scal(1.0 / hnext, w, ctr);
    V.push_back(std::move(w));
  }
  out.resnorm = ls.residual();
  const auto y = ls.solve();
  out.x.assign(r0.size(), 0.0);
  for (int i = 0; i < ls.size(); ++i) axpy(y[i], V[i], out.x, ctr);
  return out;
}

}  // namespace detail

// Restarted GMRES; m <= 0 selects GMRES(inf), capped at max_basis with an
// error if the cap is reached before convergence.  The final true residual
// is always recomputed with one extra (counted) operator application.
inline std::pair<Vec, SolveReport> gmres_restarted(const LinearOperator& op,
                                                   const Vec& b, int m,
                                                   double tol, int max_cycles,
                                                   OpCounter& ctr,
                                                   int max_basis = 20000) {
  if (tol <= 0.0) throw std::invalid_argument("gmres_restarted: tol <= 0");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const double bnorm = norm2(b, ctr);
  Vec x(b.size(), 0.0);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.final_relres = 0.0;
    return {std::move(x), std::move(rep)};
  }
  const double abs_tol = tol * bnorm;
  const int iters_per_cycle = m > 0 ? m : max_basis;
  Vec r = b, t;
  while (rep.cycles < max_cycles) {
    ++rep.cycles;
    if (rep.cycles > 1) {
      op.apply(x, t, ctr);
      add_scaled(b, -1.0, t, r, ctr);
      if (norm2(r, ctr) <= abs_tol) {
        rep.converged = true;
        --rep.cycles;
        break;
      }
    }
    auto cyc = detail::gmres_cycle(op, r, iters_per_cycle, abs_tol, ctr,
                                   &rep.history, 1.0 / bnorm);
    axpy(1.0, cyc.x, x, ctr);
    if (cyc.hit_tol) {
      rep.converged = true;
      break;
    }
    if (m <= 0)
      throw std::runtime_error(
          "gmres_restarted: GMRES(inf) basis cap exceeded without "
          "convergence");
  }
  op.apply(x, t, ctr);
  add_scaled(b, -1.0, t, r, ctr);
  rep.final_relres = norm2(r, ctr) / bnorm;
  rep.ops = ctr;
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return {std::move(x), std::move(rep)};
}

struct PpgOptions {
  int degree = 10;
  int restart = 50;     // <= 0 for GMRES(inf)
  double tol = 1e-10;
  int max_cycles = 100000;
  std::uint64_t seed = 0;
  bool stability_control = true;
  bool reduce_degree_on_stch = false;  // opt-in remedy when StCh is large
  double stch_threshold = 1e-8;
  int max_basis = 20000;
};

struct PpgResult {
  Vec x;
  SolveReport report;
  PolyPreconditioner poly;
  StabilityReport stability;
};

// Polynomial preconditioned GMRES (optionally on top of ILU(0)): build the
// polynomial from a random start vector over A (or A M^{-1}), run the
// stability check, solve the phi system with restarted GMRES, recover
// x = p y (then M^{-1} on the outside when ILU is present).  All op totals
// include the construction cycle.
inline PpgResult pp_gmres(const SparseMatrix& A, const Ilu0Factors* ilu,
                          const Vec& b, const PpgOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  OpCounter ctr;
  std::shared_ptr<const LinearOperator> base;
  if (ilu)
    base = std::make_shared<RightIluOperator>(A, *ilu);
  else
    base = std::make_shared<MatrixOperator>(A);

  BuildOptions bopts{opts.stability_control};
  int degree = opts.degree;
  Vec start = random_unit_vector(A.n, opts.seed, ctr);
  auto [pp, stab] = build_polynomial_from_vector(base, start, degree, bopts);
  stab.seed = opts.seed;
  ctr += stab.construction_cost;
  double stch = stability_check(pp, start, ctr);
  stab.stch = stch;
  std::string note;
  while (opts.reduce_degree_on_stch && stch > opts.stch_threshold &&
         degree > 1) {
    degree /= 2;
    auto [pp2, stab2] = build_polynomial_from_vector(base, start, degree,
                                                     bopts);
    ctr += stab2.construction_cost;
    stch = stability_check(pp2, start, ctr);
    stab2.stch = stch;
    stab2.seed = opts.seed;
    pp = std::move(pp2);
    stab = std::move(stab2);
    note = "degree lowered to " + std::to_string(degree) +
           " by stability check";
  }

  auto pp_shared = std::make_shared<const PolyPreconditioner>(std::move(pp));
  PhiOperator phi(pp_shared);
  auto [y, rep] = gmres_restarted(phi, b, opts.restart, opts.tol,
                                  opts.max_cycles, ctr, opts.max_basis);
  Vec x = apply_p(*pp_shared, y, ctr);
  if (ilu) x = ilu0_apply(*ilu, x, ctr);

  // True residual of the original system.
  Vec t, r;
  matvec(A, x, t, ctr);
  add_scaled(b, -1.0, t, r, ctr);
  rep.final_relres = norm2(r, ctr) / norm2(b, ctr);
  rep.ops = ctr;
  rep.stch = stch;
  rep.degree_label = pp_shared->degree_label();
  rep.note = note;
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  PpgResult out;
  out.x = std::move(x);
  out.report = std::move(rep);
  out.poly = *pp_shared;
  out.stability = std::move(stab);
  return out;
}

// Double polynomial preconditioned GMRES: phi_2(phi_1(A)) z = b, then
// x = p_1(A) p_2(phi_1(A)) z.
inline PpgResult pp_gmres_double(const SparseMatrix& A, const Vec& b, int d1,
                                 int d2, const PpgOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  OpCounter ctr;
  auto base = std::make_shared<MatrixOperator>(A);
  auto dp = compose_double(base, d1, d2, opts.seed,
                           BuildOptions{opts.stability_control});
  ctr += dp.inner_report.construction_cost;
  ctr += dp.outer_report.construction_cost;
  auto forward = dp.forward();
  auto [z, rep] = gmres_restarted(*forward, b, opts.restart, opts.tol,
                                  opts.max_cycles, ctr, opts.max_basis);
  Vec x = dp.apply_solution_map(z, ctr);
  Vec t, r;
  matvec(A, x, t, ctr);
  add_scaled(b, -1.0, t, r, ctr);
  rep.final_relres = norm2(r, ctr) / norm2(b, ctr);
  rep.ops = ctr;
  rep.degree_label = dp.inner->degree_label() + "x" + dp.outer->degree_label();
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  PpgResult out;
  out.x = std::move(x);
  out.report = std::move(rep);
  out.poly = *dp.outer;
  out.stability = dp.outer_report;
  return out;
}

// Flexible GMRES whose per-iteration preconditioner is one cycle of
// GMRES(inner_d) on the bare matrix (fixed iteration count, no tolerance),
// costing inner_d + 1 mvps per outer iteration.
inline std::pair<Vec, SolveReport> fgmres(const SparseMatrix& A, const Vec& b,
                                          int inner_d, int m, double tol,
                                          int max_cycles, OpCounter& ctr) {
  if (tol <= 0.0) throw std::invalid_argument("fgmres: tol <= 0");
  if (inner_d < 1) throw std::invalid_argument("fgmres: inner degree < 1");
  const auto t0 = std::chrono::steady_clock::now();
  MatrixOperator op(A);
  SolveReport rep;
  const double bnorm = norm2(b, ctr);
  Vec x(b.size(), 0.0);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.final_relres = 0.0;
    return {std::move(x), std::move(rep)};
  }
  const double abs_tol = tol * bnorm;
  Vec r = b, t;
  while (rep.cycles < max_cycles && !rep.converged) {
    ++rep.cycles;
    if (rep.cycles > 1) {
      op.apply(x, t, ctr);
      add_scaled(b, -1.0, t, r, ctr);
    }
    const double beta = norm2(r, ctr);
    if (beta <= abs_tol) {
      rep.converged = true;
      --rep.cycles;
      break;
    }
    std::vector<Vec> V, Z;
    V.push_back(r);
    scal(1.0 / beta, V[0], ctr);
    HessLstsq ls(beta);
    for (int j = 0; j < m; ++j) {
      auto inner = detail::gmres_cycle(op, V[j], inner_d, 0.0, ctr);
      Z.push_back(std::move(inner.x));
      Vec w;
      op.apply(Z[j], w, ctr);
      std::vector<double> col(j + 2);
      for (int i = 0; i <= j; ++i) {
        col[i] = dot(V[i], w, ctr);
        axpy(-col[i], V[i], w, ctr);
      }
      const double hnext = norm2(w, ctr);
      col[j + 1] = hnext;
      const double res = ls.add_column(std::move(col));
      rep.history.push_back(res / bnorm);
      if (res <= abs_tol) {
        rep.converged = true;
        break;
      }
      if (hnext <= 1e-14 * beta) break;
      scal(1.0 / hnext, w, ctr);
      V.push_back(std::move(w));
    }
    const auto y = ls.solve();
    for (int i = 0; i < ls.size(); ++i) axpy(y[i], Z[i], x, ctr);
  }
  op.apply(x, t, ctr);
  add_scaled(b, -1.0, t, r, ctr);
  rep.final_relres = norm2(r, ctr) / bnorm;
  rep.ops = ctr;
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return {std::move(x), std::move(rep)};
}

// PP-GMRES with the polynomial rebuilt at every restart from the current
// residual vector (the one case where a non-random start vector is used).
// Construction costs are charged every cycle; a failed construction falls
// back to the previous cycle's polynomial.
inline PpgResult pp_gmres_changing(const SparseMatrix& A, const Vec& b,
                                   const PpgOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  OpCounter ctr;
  auto base = std::make_shared<MatrixOperator>(A);
  SolveReport rep;
  const double bnorm = norm2(b, ctr);
  Vec x(b.size(), 0.0);
  const double abs_tol = opts.tol * bnorm;
  std::shared_ptr<const PolyPreconditioner> pp;
  StabilityReport stab;
  Vec r = b, t;
  while (rep.cycles < opts.max_cycles) {
    ++rep.cycles;
    if (rep.cycles > 1) {
      matvec(A, x, t, ctr);
      add_scaled(b, -1.0, t, r, ctr);
      if (norm2(r, ctr) <= abs_tol) {
        rep.converged = true;
        --rep.cycles;
        break;
      }
    }
    try {
      auto [p, s] = build_polynomial_from_vector(
          base, r, opts.degree, BuildOptions{opts.stability_control});
      ctr += s.construction_cost;
      pp = std::make_shared<const PolyPreconditioner>(std::move(p));
      stab = std::move(s);
    } catch (const std::runtime_error& e) {
      if (!pp) throw;
      rep.note = std::string("kept previous polynomial after: ") + e.what();
    }
    PhiOperator phi(pp);
    auto cyc = detail::gmres_cycle(phi, r, opts.restart, abs_tol, ctr,
                                   &rep.history, 1.0 / bnorm);
    Vec dx = apply_p(*pp, cyc.x, ctr);
    axpy(1.0, dx, x, ctr);
    if (cyc.hit_tol) {
      rep.converged = true;
      break;
    }
  }
  matvec(A, x, t, ctr);
  add_scaled(b, -1.0, t, r, ctr);
  rep.final_relres = norm2(r, ctr) / bnorm;
  rep.ops = ctr;
  rep.degree_label = pp ? pp->degree_label() : std::to_string(opts.degree);
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  PpgResult out;
  out.x = std::move(x);
  out.report = std::move(rep);
  if (pp) out.poly = *pp;
  out.stability = std::move(stab);
  return out;
}

// Standard BiCGStab; two mvps per iteration.  Breakdown is reported, not
// thrown.
inline std::pair<Vec, SolveReport> bicgstab(const LinearOperator& op,
                                            const Vec& b, double tol,
                                            int max_iter, OpCounter& ctr) {
  if (tol <= 0.0) throw std::invalid_argument("bicgstab: tol <= 0");
  const auto t0 = std::chrono::steady_clock::now();
  SolveReport rep;
  const double bnorm = norm2(b, ctr);
  Vec x(b.size(), 0.0);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.final_relres = 0.0;
    return {std::move(x), std::move(rep)};
  }
  const double abs_tol = tol * bnorm;
  Vec r = b;
  const Vec r0 = r;
  Vec p = r, v, s, tt;
  double rho = dot(r0, r, ctr);
  for (int it = 0; it < max_iter; ++it) {
    op.apply(p, v, ctr);
    const double denom = dot(r0, v, ctr);
    if (std::abs(denom) < 1e-300) {
      rep.note = "breakdown: (r0, v) ~ 0";
      break;
    }
    const double alpha = rho / denom;
    add_scaled(r, -alpha, v, s, ctr);
    op.apply(s, tt, ctr);
    const double tts = dot(tt, s, ctr);
    const double ttt = dot(tt, tt, ctr);
    if (ttt < 1e-300) {
      axpy(alpha, p, x, ctr);
      rep.note = "breakdown: ||t|| ~ 0";
      break;
    }
    const double omega = tts / ttt;
    axpy(alpha, p, x, ctr);
    axpy(omega, s, x, ctr);
    add_scaled(s, -omega, tt, r, ctr);
    const double rnorm = norm2(r, ctr);
    rep.history.push_back(rnorm / bnorm);
    ++rep.cycles;
    if (rnorm <= abs_tol) {
      rep.converged = true;
      break;
    }
    const double rho_new = dot(r0, r, ctr);
    if (std::abs(rho_new) < 1e-30 || std::abs(omega) < 1e-30) {
      rep.note = "breakdown: rho or omega ~ 0";
      break;
    }
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    // p = r + beta*(p - omega*v)
    axpy(-omega, v, p, ctr);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = r[i] + beta * p[i];
    ++ctr.daxpys;
  }
  Vec t2, rr;
  op.apply(x, t2, ctr);
  add_scaled(b, -1.0, t2, rr, ctr);
  rep.final_relres = norm2(rr, ctr) / bnorm;
  rep.ops = ctr;
  rep.wall_ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  return {std::move(x), std::move(rep)};
}

struct ChebyEstimate {
  double per_cycle_plain;  // residual improvement for one GMRES(m) cycle
  double per_cycle_pp;     // one cycle of PP(d)-GMRES(m)
  double speedup;          // predicted mvp ratio: exactly d
};

// Idealized Chebyshev-based speedup estimate for a real positive spectrum
// in [a, b_], valid when b_ >> a.
inline ChebyEstimate cheby_estimate(double a, double b_, int m, int d) {
  if (a <= 0.0 || b_ <= a)
    throw std::invalid_argument("cheby_estimate: need 0 < a < b");
  if (m < 1 || d < 1)
    throw std::invalid_argument("cheby_estimate: need m, d >= 1");
  ChebyEstimate e;
  const double mm = static_cast<double>(m) * m;
  const double dd = static_cast<double>(d) * d;
  e.per_cycle_plain = 1.0 - 2.0 * mm * a / b_;
  e.per_cycle_pp = 1.0 - 2.0 * dd * mm * a / b_;
  e.speedup = static_cast<double>(d);
  return e;
}

}  // namespace ppg

#endif  // PPG_SOLVERS_HPP
