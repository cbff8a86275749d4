#include "lmdp/lp.hpp"

#include <algorithm>
#include <stdexcept>

namespace lmdp {

int LinearProgram::add_var(const std::string& name) {
  names.push_back(name.empty() ? "x" + std::to_string(names.size()) : name);
  return static_cast<int>(names.size()) - 1;
}

void LinearProgram::add_row(std::vector<Rat> coeff, Rel rel, Rat rhs) {
  coeff.resize(names.size());
  rows.push_back(LinRow{std::move(coeff), rel, std::move(rhs)});
}

namespace {

// Full-tableau simplex state.  Columns: for each program variable two
// nonnegative parts (x = pos - neg), then one slack/surplus per inequality
// row, then one artificial per Ge/Eq row.  Last column is the rhs.
struct Tableau {
  int ncols = 0;                       // without rhs
  int first_artificial = 0;            // columns >= this are artificial
  std::vector<std::vector<Rat>> t;     // rows x (ncols + 1)
  std::vector<int> basis;              // basic column per row
  long pivots = 0;

  Rat& rhs(int r) { return t[r][ncols]; }

  void pivot(int row, int col) {
    auto& pr = t[row];
    Rat d = pr[col];
    for (auto& x : pr)
      if (!x.is_zero()) x /= d;
    for (std::size_t r = 0; r < t.size(); ++r) {
      if (static_cast<int>(r) == row) continue;
      Rat f = t[r][col];
      if (f.is_zero()) continue;
      auto& tr = t[r];
      for (int c = 0; c <= ncols; ++c)
        if (!pr[c].is_zero()) tr[c] -= f * pr[c];
    }
    basis[row] = col;
    ++pivots;
  }

  // Maximizes cost (dense over columns) from the current basic feasible
  // point with Bland's rule; cols >= col_limit are never entered.
  // Returns false when unbounded.
  bool run(const std::vector<Rat>& cost, int col_limit) {
    const int m = static_cast<int>(t.size());
    for (;;) {
      // Reduced cost of column j: cost[j] - cost_B . T[.][j]
      int entering = -1;
      for (int j = 0; j < col_limit && entering < 0; ++j) {
        bool basic = false;
        for (int r = 0; r < m && !basic; ++r) basic = basis[r] == j;
        if (basic) continue;
        Rat rc = cost[j];
        for (int r = 0; r < m; ++r) {
          const Rat& cb = cost[basis[r]];
          if (!cb.is_zero() && !t[r][j].is_zero()) rc -= cb * t[r][j];
        }
        if (rc.sgn() > 0) entering = j;
      }
      if (entering < 0) return true;
      int leave = -1;
      Rat best;
      for (int r = 0; r < m; ++r) {
        if (t[r][entering].sgn() <= 0) continue;
        Rat ratio = rhs(r) / t[r][entering];
        if (leave < 0 || ratio < best || (ratio == best && basis[r] < basis[leave])) {
          leave = r;
          best = ratio;
        }
      }
      if (leave < 0) return false;
      pivot(leave, entering);
    }
  }
};

}  // namespace

LpResult lp_solve(const LinearProgram& lp) {
  const int n = lp.num_vars();
  const int m = static_cast<int>(lp.rows.size());
  int nslack = 0, nart = 0;
  for (const auto& row : lp.rows) {
    // Row orientation after rhs normalization decides slack vs artificial,
    // so count conservatively: every inequality gets a slack column and
    // every row gets an artificial column; unused ones stay zero.
    if (row.rel != Rel::Eq) ++nslack;
    ++nart;
  }
  Tableau tb;
  tb.first_artificial = 2 * n + nslack;
  tb.ncols = tb.first_artificial + nart;
  tb.t.assign(m, std::vector<Rat>(tb.ncols + 1));
  tb.basis.assign(m, -1);

  int slack_at = 2 * n;
  int art_at = tb.first_artificial;
  for (int r = 0; r < m; ++r) {
    const auto& row = lp.rows[r];
    bool flip = row.rhs.sgn() < 0;
    auto put = [&](int c, Rat v) { tb.t[r][c] = flip ? -v : v; };
    const int rn = std::min(n, static_cast<int>(row.coeff.size()));
    for (int j = 0; j < rn; ++j) {
      if (row.coeff[j].is_zero()) continue;
      put(2 * j, row.coeff[j]);
      put(2 * j + 1, -row.coeff[j]);
    }
    tb.rhs(r) = flip ? -row.rhs : row.rhs;
    Rel rel = row.rel;
    if (flip) rel = rel == Rel::Le ? Rel::Ge : rel == Rel::Ge ? Rel::Le : Rel::Eq;
    if (rel == Rel::Le) {
      tb.t[r][slack_at] = 1;
      tb.basis[r] = slack_at++;
    } else {
      if (rel == Rel::Ge) tb.t[r][slack_at++] = -1;
      tb.t[r][art_at] = 1;
      tb.basis[r] = art_at++;
    }
  }

  LpResult res;
  res.status = LpStatus::Feasible;

  // Phase 1: maximize minus the sum of artificials.
  bool any_art = false;
  for (int r = 0; r < m; ++r) any_art = any_art || tb.basis[r] >= tb.first_artificial;
  if (any_art) {
    std::vector<Rat> cost(tb.ncols);
    for (int c = tb.first_artificial; c < tb.ncols; ++c) cost[c] = Rat(-1);
    tb.run(cost, tb.ncols);  // bounded below by construction, never unbounded
    Rat infeas;
    for (int r = 0; r < m; ++r)
      if (tb.basis[r] >= tb.first_artificial) infeas += tb.rhs(r);
    if (!infeas.is_zero()) {
      res.status = LpStatus::Infeasible;
      res.pivots = tb.pivots;
      return res;
    }
    // Drive leftover artificials (basic at zero) out of the basis.
    for (int r = 0; r < m; ++r) {
      if (tb.basis[r] < tb.first_artificial) continue;
      int col = -1;
      for (int c = 0; c < tb.first_artificial && col < 0; ++c)
        if (!tb.t[r][c].is_zero()) col = c;
      if (col >= 0) tb.pivot(r, col);
      // else: redundant row; its artificial stays basic at zero, harmless
      // because artificial columns are never entered again.
    }
  }

  if (lp.objective) {
    std::vector<Rat> cost(tb.ncols);
    for (int j = 0; j < n && j < static_cast<int>(lp.objective->size()); ++j) {
      cost[2 * j] = (*lp.objective)[j];
      cost[2 * j + 1] = -(*lp.objective)[j];
    }
    if (!tb.run(cost, tb.first_artificial)) {
      res.status = LpStatus::Unbounded;
      res.pivots = tb.pivots;
      return res;
    }
  }

  std::vector<Rat> col_val(tb.ncols);
  for (int r = 0; r < m; ++r) col_val[tb.basis[r]] = tb.rhs(r);
  res.point.resize(n);
  for (int j = 0; j < n; ++j) res.point[j] = col_val[2 * j] - col_val[2 * j + 1];
  if (lp.objective) {
    Rat opt;
    for (int j = 0; j < n && j < static_cast<int>(lp.objective->size()); ++j)
      if (!(*lp.objective)[j].is_zero()) opt += (*lp.objective)[j] * res.point[j];
    res.optimum = opt;
  }
  res.pivots = tb.pivots;
  return res;
}

bool lp_point_satisfies(const LinearProgram& lp, const std::vector<Rat>& x) {
  if (static_cast<int>(x.size()) != lp.num_vars()) return false;
  for (const auto& row : lp.rows) {
    Rat lhs;
    const int rn = std::min(lp.num_vars(), static_cast<int>(row.coeff.size()));
    for (int j = 0; j < rn; ++j)
      if (!row.coeff[j].is_zero() && !x[j].is_zero()) lhs += row.coeff[j] * x[j];
    int cmp = (lhs - row.rhs).sgn();
    if (row.rel == Rel::Le && cmp > 0) return false;
    if (row.rel == Rel::Ge && cmp < 0) return false;
    if (row.rel == Rel::Eq && cmp != 0) return false;
  }
  return true;
}

}  // namespace lmdp
