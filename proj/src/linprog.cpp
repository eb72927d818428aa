#include "bellpoly/linprog.hpp"

#include <stdexcept>

namespace bellpoly {

namespace {

// Standard-form solver state: minimize cost over  T x = rhs, x >= 0.
// The tableau keeps every column (including artificials) so that dual
// multipliers can be read off after termination.
struct Tableau {
  int m = 0, ncols = 0;
  std::vector<RatVec> row;   // m rows, each ncols entries
  RatVec rhs;                // m entries, kept >= 0
  RatVec obj;                // reduced-cost row, ncols entries
  Rat objval;                // current -cost (we maintain cost value separately)
  std::vector<int> basis;    // basis[i] = column basic in row i

  void pivot(int r, int e) {
    Rat p = row[r][e];
    Rat inv = 1 / p;
    for (int j = 0; j < ncols; ++j) row[r][j] *= inv;
    rhs[r] *= inv;
    row[r][e] = 1;
    for (int i = 0; i < m; ++i) {
      if (i == r) continue;
      Rat factor = row[i][e];
      if (factor == 0) continue;
      for (int j = 0; j < ncols; ++j) row[i][j] -= factor * row[r][j];
      row[i][e] = 0;
      rhs[i] -= factor * rhs[r];
    }
    Rat factor = obj[e];
    if (factor != 0) {
      for (int j = 0; j < ncols; ++j) obj[j] -= factor * row[r][j];
      obj[e] = 0;
      objval -= factor * rhs[r];
    }
    basis[r] = e;
  }

  // Bland's rule; enterable() filters columns allowed to enter.
  // Returns: 0 optimal, 1 pivoted, -1 unbounded (sets *unb_col).
  template <class F>
  int step(const F& enterable, int* unb_col) {
    int e = -1;
    for (int j = 0; j < ncols; ++j) {
      if (!enterable(j)) continue;
      if (obj[j] < 0) {
        e = j;
        break;
      }
    }
    if (e < 0) return 0;
    int r = -1;
    Rat best;
    for (int i = 0; i < m; ++i) {
      if (row[i][e] <= 0) continue;
      Rat ratio = rhs[i] / row[i][e];
      if (r < 0 || ratio < best || (ratio == best && basis[i] < basis[r])) {
        r = i;
        best = ratio;
      }
    }
    if (r < 0) {
      if (unb_col) *unb_col = e;
      return -1;
    }
    pivot(r, e);
    return 1;
  }
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  const int n = lp.nvars;
  if ((int)lp.c.size() != n) throw std::invalid_argument("lp: objective size mismatch");
  const int mi = (int)lp.A.size(), me = (int)lp.E.size();
  if ((int)lp.b.size() != mi || (int)lp.f.size() != me)
    throw std::invalid_argument("lp: rhs size mismatch");

  // Column layout: x (n cols, or 2n when free vars are split), slacks (mi),
  // artificials (m). Row layout: inequalities then equalities.
  const int nx = lp.nonneg ? n : 2 * n;
  const int m = mi + me;
  Tableau t;
  t.m = m;
  t.ncols = nx + mi + m;
  t.row.assign(m, RatVec(t.ncols, Rat(0)));
  t.rhs.assign(m, Rat(0));
  t.basis.assign(m, -1);

  std::vector<int> rowsign(m, 1);  // -1 when the row was negated to make rhs >= 0
  auto fill_row = [&](int i, const RatVec& a, const Rat& rhs_in, bool is_eq) {
    if ((int)a.size() != n) throw std::invalid_argument("lp: row size mismatch");
    int sgn = rhs_in < 0 ? -1 : 1;
    rowsign[i] = sgn;
    for (int j = 0; j < n; ++j) {
      Rat v = a[j] * sgn;
      if (lp.nonneg) {
        t.row[i][j] = v;
      } else {
        t.row[i][2 * j] = v;
        t.row[i][2 * j + 1] = -v;
      }
    }
    if (!is_eq) t.row[i][nx + i] = sgn;  // slack (+1 normally, -1 on negated rows)
    t.row[i][nx + mi + i] = 1;           // artificial
    t.rhs[i] = rhs_in * sgn;
    t.basis[i] = nx + mi + i;
  };
  for (int i = 0; i < mi; ++i) fill_row(i, lp.A[i], lp.b[i], false);
  for (int i = 0; i < me; ++i) fill_row(mi + i, lp.E[i], lp.f[i], true);

  // Where a non-negated inequality row exists, its slack can start basic and
  // the artificial is redundant; keep the artificial column anyway (harmless,
  // never enters) but start from the cheaper basis.
  for (int i = 0; i < mi; ++i)
    if (rowsign[i] == 1) t.basis[i] = nx + i;

  // --- phase I: minimize the sum of artificials actually in the basis ----
  t.obj.assign(t.ncols, Rat(0));
  t.objval = 0;
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < nx + mi) continue;  // slack basic, artificial unused
    // cost 1 on that artificial: subtract its row from the objective
    for (int j = 0; j < t.ncols; ++j) t.obj[j] -= t.row[i][j];
    t.obj[nx + mi + (t.basis[i] - nx - mi)] += 1;
    t.objval -= t.rhs[i];
  }
  // note: obj currently holds reduced costs c - y^T T for phase-I cost c
  // (1 on artificials), and objval = -cost(current basis).
  auto phase1_enterable = [&](int j) { return j < nx + mi; };
  while (true) {
    int st = t.step(phase1_enterable, nullptr);
    if (st == 0) break;
    if (st == -1) throw std::logic_error("phase I cannot be unbounded");
  }

  LpResult res;
  if (t.objval != 0) {
    // Infeasible. Dual multipliers: y_i = -(reduced cost of artificial i)
    // + its cost 1 ... with our bookkeeping  y_i = 1 - obj[art_i]  for rows
    // whose artificial held cost 1 and  y_i = -obj[art_i]  otherwise; both
    // collapse to reading the certificate off the artificial columns:
    RatVec y(m);
    for (int i = 0; i < m; ++i) {
      // obj[art_i] = cost(art_i) - y_i where cost(art_i) is 1 if row i's
      // artificial carried phase-I cost (it did iff it started basic).
      Rat cost_i = 0;
      // artificial i started basic iff rowsign forced it (equality row or
      // negated inequality row)
      bool art_basic0 = (i >= mi) || (rowsign[i] == -1);
      if (art_basic0) cost_i = 1;
      y[i] = cost_i - t.obj[nx + mi + i];
      y[i] *= rowsign[i];  // undo the row negation
    }
    res.status = LpStatus::Infeasible;
    res.farkas_u.assign(mi, Rat(0));
    res.farkas_w.assign(me, Rat(0));
    for (int i = 0; i < mi; ++i) res.farkas_u[i] = -y[i];
    for (int i = 0; i < me; ++i) res.farkas_w[i] = -y[mi + i];
    return res;
  }

  // Drive leftover artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (t.basis[i] < nx + mi) continue;
    int e = -1;
    for (int j = 0; j < nx + mi; ++j)
      if (t.row[i][j] != 0) {
        e = j;
        break;
      }
    if (e >= 0) t.pivot(i, e);
    // else: redundant row, artificial stays basic at value 0
  }

  // --- phase II ----------------------------------------------------------
  RatVec cost(t.ncols, Rat(0));
  for (int j = 0; j < n; ++j) {
    Rat cj = lp.maximize ? -lp.c[j] : lp.c[j];
    if (lp.nonneg) {
      cost[j] = cj;
    } else {
      cost[2 * j] = cj;
      cost[2 * j + 1] = -cj;
    }
  }
  t.obj = cost;
  t.objval = 0;
  for (int i = 0; i < m; ++i) {
    Rat cb = cost[t.basis[i]];
    if (cb == 0) continue;
    for (int j = 0; j < t.ncols; ++j) t.obj[j] -= cb * t.row[i][j];
    t.objval -= cb * t.rhs[i];
  }
  auto phase2_enterable = [&](int j) {
    if (j >= nx + mi) return false;  // artificials stay out
    return true;
  };
  while (true) {
    int unb = -1;
    int st = t.step(phase2_enterable, &unb);
    if (st == 0) break;
    if (st == -1) {
      res.status = LpStatus::Unbounded;
      return res;
    }
  }

  res.status = LpStatus::Optimal;
  // objval = -cost(basis); recover the user-facing objective value
  Rat minval = -t.objval;
  res.value = lp.maximize ? -minval : minval;
  res.x.assign(n, Rat(0));
  RatVec z(t.ncols, Rat(0));
  for (int i = 0; i < m; ++i) z[t.basis[i]] = t.rhs[i];
  for (int j = 0; j < n; ++j)
    res.x[j] = lp.nonneg ? z[j] : z[2 * j] - z[2 * j + 1];
  return res;
}

}  // namespace bellpoly
