#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lmdp/rat.hpp"

namespace lmdp {

enum class Rel { Le, Ge, Eq };

struct LinRow {
  std::vector<Rat> coeff;  // dense over the program's variables
  Rel rel;
  Rat rhs;
};

// A linear program over named free variables.  Nonnegativity is not implied;
// callers state every bound they need as an ordinary row.  The optional
// objective is maximized.
struct LinearProgram {
  std::vector<std::string> names;
  std::vector<LinRow> rows;
  std::optional<std::vector<Rat>> objective;

  int num_vars() const { return static_cast<int>(names.size()); }
  int add_var(const std::string& name);
  // coeff may be shorter than the variable count; missing entries are zero.
  void add_row(std::vector<Rat> coeff, Rel rel, Rat rhs);
};

enum class LpStatus { Feasible, Infeasible, Unbounded };

struct LpResult {
  LpStatus status;
  std::vector<Rat> point;        // a feasible (optimal, if bounded objective) point
  std::optional<Rat> optimum;    // objective value at point, when objective given
  long pivots = 0;               // simplex pivot count across both phases
};

// Exact two-phase simplex with Bland's rule; terminates on every input.
LpResult lp_solve(const LinearProgram& lp);

// Exact check that a point satisfies every row (ignores the objective).
bool lp_point_satisfies(const LinearProgram& lp, const std::vector<Rat>& x);

}  // namespace lmdp
