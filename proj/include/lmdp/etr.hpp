#pragma once

#include <string>
#include <vector>

#include "lmdp/model.hpp"

namespace lmdp {

// Polynomial expression over the real variables of a formula.
struct Term {
  enum class K { Num, Var, Add, Mul, Neg };
  K k = K::Num;
  Rat c;             // K::Num
  int var_id = -1;   // K::Var
  std::vector<Term> kids;

  static Term num(Rat v);
  static Term var(int id);
  static Term add(std::vector<Term> kids);
  static Term mul(std::vector<Term> kids);
  static Term neg(Term t);

  Rat eval(const std::vector<Rat>& assignment) const;
};

enum class Cmp { Eq, Ne, Le, Lt, Ge, Gt };

struct EtrAssertion {
  Term lhs;
  Cmp cmp = Cmp::Eq;
  Term rhs;
};

// Existential formula over the reals with rational coefficients, serialized
// as an SMT-LIB 2 document in QF_NRA and evaluable exactly on rational
// assignments.
struct EtrFormula {
  std::string header;  // "; ..." comment block placed above the logic line
  std::vector<std::string> vars;
  std::vector<EtrAssertion> assertions;

  int var_index(const std::string& name) const;
  std::string smtlib() const;
  bool eval(const std::vector<Rat>& assignment) const;
};

// Satisfiable iff some strategy makes mu and nu trace equivalent
// (total-variation distance zero).
EtrFormula encode_tv_eq0(const Mdp& mdp, const Dist& mu, const Dist& nu);

// Satisfiable for some choice of the guessed state r1 and guessed support
// supp2 iff some strategy keeps the total-variation distance below 1.
EtrFormula encode_tv_lt1(const Mdp& mdp, const Dist& mu, const Dist& nu, int r1,
                         const std::vector<int>& supp2);

// Satisfiable for some guessed word list (basis words) and complement
// dimension r_prime iff some strategy drives the total-variation distance
// to 1.
EtrFormula encode_tv_eq1(const Mdp& mdp, const Dist& mu, const Dist& nu,
                         const std::vector<Word>& words, int r_prime);

}  // namespace lmdp
