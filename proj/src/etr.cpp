#include "lmdp/etr.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lmdp/distance.hpp"

namespace lmdp {

Term Term::num(Rat v) {
  Term t;
  t.k = K::Num;
  t.c = std::move(v);
  return t;
}

Term Term::var(int id) {
  Term t;
  t.k = K::Var;
  t.var_id = id;
  return t;
}

Term Term::add(std::vector<Term> kids) {
  Term t;
  t.k = K::Add;
  t.kids = std::move(kids);
  return t;
}

Term Term::mul(std::vector<Term> kids) {
  Term t;
  t.k = K::Mul;
  t.kids = std::move(kids);
  return t;
}

Term Term::neg(Term inner) {
  Term t;
  t.k = K::Neg;
  t.kids.push_back(std::move(inner));
  return t;
}

Rat Term::eval(const std::vector<Rat>& assignment) const {
  switch (k) {
    case K::Num:
      return c;
    case K::Var:
      return assignment.at(static_cast<std::size_t>(var_id));
    case K::Add: {
      Rat r = 0;
      for (const Term& kid : kids) r += kid.eval(assignment);
      return r;
    }
    case K::Mul: {
      Rat r = 1;
      for (const Term& kid : kids) r *= kid.eval(assignment);
      return r;
    }
    case K::Neg:
      return -kids.front().eval(assignment);
  }
  throw std::logic_error("corrupt term");
}

namespace {

// Rationals in the solver syntax: no decimal notation, negation as an
// application, non-integers as exact quotients.
std::string smt_rat(const Rat& r) {
  if (r.sgn() < 0) return "(- " + smt_rat(-r) + ")";
  if (r.is_integer()) return r.num().get_str();
  return "(/ " + r.num().get_str() + " " + r.den().get_str() + ")";
}

void smt_term(const Term& t, const std::vector<std::string>& vars, std::string& out) {
  switch (t.k) {
    case Term::K::Num:
      out += smt_rat(t.c);
      return;
    case Term::K::Var:
      out += vars.at(static_cast<std::size_t>(t.var_id));
      return;
    case Term::K::Add:
    case Term::K::Mul: {
      const bool is_add = t.k == Term::K::Add;
      if (t.kids.empty()) {
        out += is_add ? "0" : "1";
        return;
      }
      if (t.kids.size() == 1) {
        smt_term(t.kids.front(), vars, out);
        return;
      }
      out += is_add ? "(+" : "(*";
      for (const Term& kid : t.kids) {
        out += ' ';
        smt_term(kid, vars, out);
      }
      out += ')';
      return;
    }
    case Term::K::Neg:
      out += "(- ";
      smt_term(t.kids.front(), vars, out);
      out += ')';
      return;
  }
}

}  // namespace

int EtrFormula::var_index(const std::string& name) const {
  auto it = std::find(vars.begin(), vars.end(), name);
  return it == vars.end() ? -1 : static_cast<int>(it - vars.begin());
}

std::string EtrFormula::smtlib() const {
  std::string out = header;
  if (!out.empty() && out.back() != '\n') out += '\n';
  out += "(set-logic QF_NRA)\n";
  for (const std::string& v : vars) out += "(declare-fun " + v + " () Real)\n";
  for (const EtrAssertion& a : assertions) {
    out += "(assert ";
    const char* op = nullptr;
    switch (a.cmp) {
      case Cmp::Eq: op = "="; break;
      case Cmp::Ne: op = "distinct"; break;
      case Cmp::Le: op = "<="; break;
      case Cmp::Lt: op = "<"; break;
      case Cmp::Ge: op = ">="; break;
      case Cmp::Gt: op = ">"; break;
    }
    out += '(';
    out += op;
    out += ' ';
    smt_term(a.lhs, vars, out);
    out += ' ';
    smt_term(a.rhs, vars, out);
    out += "))\n";
  }
  out += "(check-sat)\n";
  return out;
}

bool EtrFormula::eval(const std::vector<Rat>& assignment) const {
  if (assignment.size() != vars.size())
    throw std::invalid_argument("assignment size does not match the declared variables");
  for (const EtrAssertion& a : assertions) {
    const Rat l = a.lhs.eval(assignment);
    const Rat r = a.rhs.eval(assignment);
    bool ok = false;
    switch (a.cmp) {
      case Cmp::Eq: ok = l == r; break;
      case Cmp::Ne: ok = l != r; break;
      case Cmp::Le: ok = l <= r; break;
      case Cmp::Lt: ok = l < r; break;
      case Cmp::Ge: ok = l >= r; break;
      case Cmp::Gt: ok = l > r; break;
    }
    if (!ok) return false;
  }
  return true;
}

namespace {

std::string num_str(int v) { return std::to_string(v); }

struct Builder {
  EtrFormula f;

  int declare(std::string name) {
    f.vars.push_back(std::move(name));
    return static_cast<int>(f.vars.size()) - 1;
  }
  void require(Term lhs, Cmp cmp, Term rhs) {
    f.assertions.push_back(EtrAssertion{std::move(lhs), cmp, std::move(rhs)});
  }
};

// Comment lines mapping the numeric indices used in variable names back to
// the model's state and label names.
std::string index_legend(const Mdp& mdp) {
  std::string out = "; states:";
  for (int s = 0; s < mdp.n(); ++s) out += ' ' + num_str(s) + '=' + mdp.state_name(s);
  out += "\n; labels:";
  for (std::size_t l = 0; l < mdp.labels().size(); ++l)
    out += ' ' + num_str(static_cast<int>(l)) + '=' + mdp.labels()[l];
  out += '\n';
  return out;
}

void check_initials(const Mdp& mdp, const Dist& mu, const Dist& nu) {
  if (mu.size() != mdp.n() || nu.size() != mdp.n())
    throw std::invalid_argument("initial distributions must be dense over the model's states");
}

// Strategy-weight variables x_<state>_<action>, one per available action, with
// the rows that make each x(s) a distribution over A(s).
std::vector<std::vector<int>> declare_strategy(Builder& b, const Mdp& mdp) {
  std::vector<std::vector<int>> x(mdp.n());
  for (int s = 0; s < mdp.n(); ++s)
    for (int m = 0; m < mdp.action_count(s); ++m)
      x[s].push_back(b.declare("x_" + num_str(s) + "_" + num_str(m)));
  return x;
}

void require_simplex(Builder& b, const Mdp& mdp, const std::vector<std::vector<int>>& x) {
  for (int s = 0; s < mdp.n(); ++s) {
    std::vector<Term> sum;
    for (int m = 0; m < mdp.action_count(s); ++m) {
      b.require(Term::var(x[s][m]), Cmp::Ge, Term::num(0));
      sum.push_back(Term::var(x[s][m]));
    }
    b.require(Term::add(std::move(sum)), Cmp::Eq, Term::num(1));
  }
}

// Row s of the one-letter transition matrix of the induced chain, applied to
// the symbolic column vector `col`: zero when state s does not carry the
// label, otherwise sum_m x_{s,m} * (phi(s,m) . col).
Term letter_row_times(const Mdp& mdp, const std::vector<std::vector<int>>& x,
                      const std::string& label, int s, const std::vector<Term>& col) {
  std::vector<Term> parts;
  if (mdp.label(s) == label) {
    for (int m = 0; m < mdp.action_count(s); ++m) {
      const std::vector<Rat>& row = mdp.action_row(s, m);
      std::vector<Term> inner;
      for (int j = 0; j < mdp.n(); ++j)
        if (!row[j].is_zero()) inner.push_back(Term::mul({Term::num(row[j]), col[j]}));
      parts.push_back(Term::mul({Term::var(x[s][m]), Term::add(std::move(inner))}));
    }
  }
  return Term::add(std::move(parts));
}

// Entry (k, j) of the induced chain's one-letter matrix as a term bilinear in
// the strategy weights and the action rows.
Term letter_entry(const Mdp& mdp, const std::vector<std::vector<int>>& x,
                  const std::string& label, int k, int j) {
  std::vector<Term> parts;
  if (mdp.label(k) == label) {
    for (int m = 0; m < mdp.action_count(k); ++m) {
      const Rat& p = mdp.action_row(k, m)[j];
      if (!p.is_zero()) parts.push_back(Term::mul({Term::num(p), Term::var(x[k][m])}));
    }
  }
  return Term::add(std::move(parts));
}

// Shared trailing block of the trace-equivalence encodings: F has zero row
// sums and its row space is closed under every one-letter matrix, with the
// closure witnessed by B(a):  F . M(a) = B(a) . F  entrywise.
struct EquivalenceCore {
  std::vector<std::vector<int>> f;               // F variable ids, n x n
  std::vector<std::vector<std::vector<int>>> b;  // per label, n x n
};

EquivalenceCore declare_equivalence_core(Builder& bld, const Mdp& mdp) {
  const int n = mdp.n();
  EquivalenceCore core;
  core.f.assign(n, std::vector<int>(n, -1));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      core.f[i][j] = bld.declare("F_" + num_str(i) + "_" + num_str(j));
  core.b.resize(mdp.labels().size());
  for (std::size_t l = 0; l < mdp.labels().size(); ++l) {
    core.b[l].assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        core.b[l][i][j] = bld.declare("B" + num_str(static_cast<int>(l)) + "_" + num_str(i) +
                                      "_" + num_str(j));
  }
  return core;
}

void require_zero_row_sums(Builder& bld, const Mdp& mdp, const EquivalenceCore& core) {
  for (int i = 0; i < mdp.n(); ++i) {
    std::vector<Term> sum;
    for (int j = 0; j < mdp.n(); ++j) sum.push_back(Term::var(core.f[i][j]));
    bld.require(Term::add(std::move(sum)), Cmp::Eq, Term::num(0));
  }
}

void require_closure(Builder& bld, const Mdp& mdp, const std::vector<std::vector<int>>& x,
                     const EquivalenceCore& core) {
  const int n = mdp.n();
  for (std::size_t l = 0; l < mdp.labels().size(); ++l) {
    const std::string& label = mdp.labels()[l];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        std::vector<Term> lhs;
        for (int k = 0; k < n; ++k) {
          if (mdp.label(k) != label) continue;
          lhs.push_back(Term::mul({Term::var(core.f[i][k]), letter_entry(mdp, x, label, k, j)}));
        }
        std::vector<Term> rhs;
        for (int k = 0; k < n; ++k)
          rhs.push_back(Term::mul({Term::var(core.b[l][i][k]), Term::var(core.f[k][j])}));
        bld.require(Term::add(std::move(lhs)), Cmp::Eq, Term::add(std::move(rhs)));
      }
  }
}

}  // namespace

EtrFormula encode_tv_eq0(const Mdp& mdp, const Dist& mu, const Dist& nu) {
  check_initials(mdp, mu, nu);
  Builder bld;
  bld.f.header = "; problem=tv_eq0 guesses=\n" + index_legend(mdp);

  std::vector<std::vector<int>> x = declare_strategy(bld, mdp);
  EquivalenceCore core = declare_equivalence_core(bld, mdp);

  require_simplex(bld, mdp, x);
  for (int j = 0; j < mdp.n(); ++j)
    bld.require(Term::var(core.f[0][j]), Cmp::Eq, Term::num(mu[j] - nu[j]));
  require_zero_row_sums(bld, mdp, core);
  require_closure(bld, mdp, x, core);
  return std::move(bld.f);
}

EtrFormula encode_tv_lt1(const Mdp& mdp, const Dist& mu, const Dist& nu, int r1,
                         const std::vector<int>& supp2) {
  check_initials(mdp, mu, nu);
  const int n = mdp.n();
  if (r1 < 0 || r1 >= n) throw std::invalid_argument("guessed state r1 is not a state index");
  std::set<int> supp(supp2.begin(), supp2.end());
  for (int u : supp)
    if (u < 0 || u >= n)
      throw std::invalid_argument("guessed support contains a non-state index");

  Builder bld;
  std::string guesses = "r1=" + mdp.state_name(r1) + ",supp2={";
  bool first = true;
  for (int u : supp) {
    if (!first) guesses += ',';
    guesses += mdp.state_name(u);
    first = false;
  }
  guesses += '}';
  bld.f.header = "; problem=tv_lt1 guesses=" + guesses + "\n" + index_legend(mdp);

  std::vector<std::vector<int>> x = declare_strategy(bld, mdp);
  EquivalenceCore core = declare_equivalence_core(bld, mdp);
  std::vector<int> m1(n, -1), m2(n, -1);
  for (int u = 0; u < n; ++u) m1[u] = bld.declare("mu1_" + num_str(u));
  for (int u = 0; u < n; ++u) m2[u] = bld.declare("mu2_" + num_str(u));

  require_simplex(bld, mdp, x);
  for (int j = 0; j < n; ++j)
    bld.require(Term::var(core.f[0][j]), Cmp::Eq,
                Term::add({Term::var(m1[j]), Term::neg(Term::var(m2[j]))}));
  require_zero_row_sums(bld, mdp, core);
  require_closure(bld, mdp, x, core);
  bld.require(Term::var(m1[r1]), Cmp::Gt, Term::num(0));
  for (int u = 0; u < n; ++u)
    if (supp.count(u) == 0) bld.require(Term::var(m2[u]), Cmp::Eq, Term::num(0));
  for (const std::vector<int>& m : {m1, m2}) {
    std::vector<Term> total;
    for (int u = 0; u < n; ++u) {
      bld.require(Term::var(m[u]), Cmp::Ge, Term::num(0));
      total.push_back(Term::var(m[u]));
    }
    bld.require(Term::add(std::move(total)), Cmp::Le, Term::num(1));
  }
  return std::move(bld.f);
}

EtrFormula encode_tv_eq1(const Mdp& mdp, const Dist& mu, const Dist& nu,
                         const std::vector<Word>& words, int r_prime) {
  check_initials(mdp, mu, nu);
  const int n = mdp.n();
  const int r = static_cast<int>(words.size()) + 1;
  if (r > n) throw std::invalid_argument("too many guessed words: need |words| + 1 <= |S|");
  if (r_prime < 0 || r + r_prime != n)
    throw std::invalid_argument("complement dimension must satisfy |words| + 1 + r_prime = |S|");
  for (const Word& w : words) {
    if (static_cast<int>(w.size()) > n)
      throw std::invalid_argument("guessed word is longer than |S|");
    for (const std::string& sym : w)
      if (!mdp.has_label(sym)) throw std::invalid_argument("guessed word uses an unknown label");
  }

  // Pairs simultaneously reachable from mu and nu, taken on the chain that
  // plays every available action with positive weight.  Any strategy's
  // reachable pairs are a subset, so the spanning constraints below can only
  // grow, keeping a satisfiable formula a sound certificate.
  const ReachablePairs meet = reachable_pairs(induce(mdp, uniform_strategy(mdp)), mu, nu);

  Builder bld;
  std::string guesses = "words=[";
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) guesses += ',';
    for (std::size_t j = 0; j < words[i].size(); ++j) {
      if (j > 0) guesses += '.';
      guesses += words[i][j];
    }
  }
  guesses += "],rprime=" + num_str(r_prime);
  bld.f.header = "; problem=tv_eq1 guesses=" + guesses + "\n" + index_legend(mdp);

  std::vector<std::vector<int>> x = declare_strategy(bld, mdp);
  auto grid = [&bld](const std::string& stem, int rows, int cols) {
    std::vector<std::vector<int>> ids(rows, std::vector<int>(cols, -1));
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < cols; ++j) ids[i][j] = bld.declare(stem + num_str(i) + "_" + num_str(j));
    return ids;
  };
  std::vector<std::vector<int>> basis = grid("B_", n, r);
  std::vector<std::vector<int>> q = grid("Q_", n, r);
  std::vector<std::vector<int>> rr(r, std::vector<int>(r, -1));
  for (int c = 0; c < r; ++c)
    for (int d = c; d < r; ++d) rr[c][d] = bld.declare("R_" + num_str(c) + "_" + num_str(d));
  std::vector<std::vector<std::vector<int>>> fa(mdp.labels().size());
  for (std::size_t l = 0; l < mdp.labels().size(); ++l)
    fa[l] = grid("F" + num_str(static_cast<int>(l)) + "_", r, r);
  std::vector<std::vector<int>> h = grid("H_", n, r_prime);
  std::vector<std::vector<int>> v = grid("v_", n, n);
  std::vector<int> off(n, -1);
  for (int s = 0; s < n; ++s) off[s] = bld.declare("b_" + num_str(s));

  require_simplex(bld, mdp, x);

  // Column 0 of the basis is the all-ones vector; column i is the guessed
  // word's matrix product applied to it.
  for (int i = 0; i < n; ++i) bld.require(Term::var(basis[i][0]), Cmp::Eq, Term::num(1));
  for (int c = 1; c < r; ++c) {
    const Word& w = words[static_cast<std::size_t>(c) - 1];
    std::vector<Term> col(n, Term::num(1));
    for (int idx = static_cast<int>(w.size()) - 1; idx >= 0; --idx) {
      std::vector<Term> next(n);
      for (int i = 0; i < n; ++i) next[i] = letter_row_times(mdp, x, w[idx], i, col);
      col = std::move(next);
    }
    for (int i = 0; i < n; ++i) bld.require(Term::var(basis[i][c]), Cmp::Eq, std::move(col[i]));
  }

  // Reduced QR factorization certifying that the basis columns are linearly
  // independent: orthonormal Q, upper-triangular R with nonzero diagonal.
  for (int c = 0; c < r; ++c)
    for (int d = c; d < r; ++d) {
      std::vector<Term> sum;
      for (int i = 0; i < n; ++i) sum.push_back(Term::mul({Term::var(q[i][c]), Term::var(q[i][d])}));
      bld.require(Term::add(std::move(sum)), Cmp::Eq, Term::num(c == d ? 1 : 0));
    }
  for (int c = 0; c < r; ++c) bld.require(Term::var(rr[c][c]), Cmp::Ne, Term::num(0));
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < r; ++d) {
      std::vector<Term> sum;
      for (int c = 0; c <= d; ++c) sum.push_back(Term::mul({Term::var(q[i][c]), Term::var(rr[c][d])}));
      bld.require(Term::var(basis[i][d]), Cmp::Eq, Term::add(std::move(sum)));
    }

  // Closure of the basis under every one-letter matrix: M(a) . B = B . F(a).
  for (std::size_t l = 0; l < mdp.labels().size(); ++l) {
    const std::string& label = mdp.labels()[l];
    for (int i = 0; i < n; ++i)
      for (int c = 0; c < r; ++c) {
        std::vector<Term> col(n);
        for (int j = 0; j < n; ++j) col[j] = Term::var(basis[j][c]);
        Term lhs = letter_row_times(mdp, x, label, i, col);
        std::vector<Term> rhs;
        for (int d = 0; d < r; ++d)
          rhs.push_back(Term::mul({Term::var(basis[i][d]), Term::var(fa[l][d][c])}));
        bld.require(std::move(lhs), Cmp::Eq, Term::add(std::move(rhs)));
      }
  }

  // H's columns form an orthonormal set orthogonal to every basis column,
  // hence a basis of the orthogonal complement (dimensions add up to |S|).
  for (int c = 0; c < r_prime; ++c)
    for (int d = c; d < r_prime; ++d) {
      std::vector<Term> sum;
      for (int i = 0; i < n; ++i) sum.push_back(Term::mul({Term::var(h[i][c]), Term::var(h[i][d])}));
      bld.require(Term::add(std::move(sum)), Cmp::Eq, Term::num(c == d ? 1 : 0));
    }
  for (int c = 0; c < r_prime; ++c)
    for (int e = 0; e < r; ++e) {
      std::vector<Term> sum;
      for (int i = 0; i < n; ++i) sum.push_back(Term::mul({Term::var(basis[i][e]), Term::var(h[i][c])}));
      bld.require(Term::add(std::move(sum)), Cmp::Eq, Term::num(0));
    }

  // Per-state strictly separating functionals: v_s vanishes on the complement
  // space, pins its own coordinate to the positive offset, and is nonnegative
  // against every spanning direction of the reachable-pair cone.
  for (int s = 0; s < n; ++s)
    for (int c = 0; c < r_prime; ++c) {
      std::vector<Term> sum;
      for (int t = 0; t < n; ++t) sum.push_back(Term::mul({Term::var(v[s][t]), Term::var(h[t][c])}));
      bld.require(Term::add(std::move(sum)), Cmp::Eq, Term::num(0));
    }
  for (int s = 0; s < n; ++s) bld.require(Term::var(v[s][s]), Cmp::Eq, Term::var(off[s]));
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) bld.require(Term::var(v[s][t]), Cmp::Ge, Term::num(0));
    for (int t : meet.proj[s]) bld.require(Term::neg(Term::var(v[s][t])), Cmp::Ge, Term::num(0));
  }
  for (int s = 0; s < n; ++s) bld.require(Term::var(off[s]), Cmp::Gt, Term::num(0));

  return std::move(bld.f);
}

}  // namespace lmdp
