#pragma once

#include "oudrift/types.hpp"

namespace oudrift {

/// Inequality-form linear program: min c^T x subject to g x <= h, x >= 0.
struct LpProblem {
  Matrix g;
  Vector h;
  Vector c;
};

struct LpSolution {
  Vector x;
  double objective = 0.0;
  int pivots = 0;
  bool feasible = false;  // phase 1 reached a zero artificial objective
  bool optimal = false;   // phase 2 terminated within the pivot budget
  bool budget_exhausted = false;
  double primal_residual = 0.0;      // max violation of g x <= h, x >= 0
  double dual_infeasibility = 0.0;   // max(0, -min reduced cost) at the final basis
  double complementarity = 0.0;      // max |x_B * reduced cost_B|
};

/// Dense two-phase primal simplex with a refactorised basis each pivot.
/// Pricing is most-negative reduced cost, switching permanently to Bland's
/// rule after a run of degenerate pivots so termination is guaranteed.
LpSolution solve_lp(const LpProblem& lp, double tol = 1e-9,
                    int max_pivots = 10000);

}  // namespace oudrift
