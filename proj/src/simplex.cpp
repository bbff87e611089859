#include "oudrift/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oudrift {

namespace {

struct Work {
  Matrix cols;              // m x ncols, equality form with b >= 0
  Vector b;
  std::vector<char> barred; // columns excluded from pricing
  std::vector<int> basis;   // m column indices
  int pivots = 0;
  bool bland = false;
  int degenerate_run = 0;
};

enum class RunOutcome { Optimal, Unbounded, Budget };

// One simplex phase on the current basis; refactorises the basis every
// pivot, which is cheap at these sizes and keeps the arithmetic clean.
RunOutcome run_phase(Work& w, const Vector& cost, double tol, int max_pivots,
                     Vector& x_basic) {
  const int m = static_cast<int>(w.b.size());
  const int ncols = static_cast<int>(w.cols.cols());
  std::vector<char> is_basic(ncols, 0);
  for (int i : w.basis) is_basic[i] = 1;

  for (;;) {
    Matrix basis_mat(m, m);
    for (int i = 0; i < m; ++i) basis_mat.col(i) = w.cols.col(w.basis[i]);
    Eigen::PartialPivLU<Matrix> lu(basis_mat);
    x_basic = lu.solve(w.b);

    Vector cost_basic(m);
    for (int i = 0; i < m; ++i) cost_basic[i] = cost[w.basis[i]];
    const Vector y = lu.transpose().solve(cost_basic);

    int entering = -1;
    double best = -tol;
    for (int j = 0; j < ncols; ++j) {
      if (is_basic[j] || w.barred[j]) continue;
      const double reduced = cost[j] - y.dot(w.cols.col(j));
      if (w.bland) {
        if (reduced < -tol) {
          entering = j;
          break;
        }
      } else if (reduced < best) {
        best = reduced;
        entering = j;
      }
    }
    if (entering < 0) return RunOutcome::Optimal;

    const Vector direction = lu.solve(w.cols.col(entering));
    int leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m; ++i) {
      if (direction[i] > tol) {
        const double ratio = std::max(x_basic[i], 0.0) / direction[i];
        if (ratio < best_ratio - tol) {
          best_ratio = ratio;
          leaving = i;
        } else if (ratio <= best_ratio + tol && leaving >= 0 &&
                   w.basis[i] < w.basis[leaving]) {
          best_ratio = std::min(best_ratio, ratio);
          leaving = i;
        }
      }
    }
    if (leaving < 0) return RunOutcome::Unbounded;

    if (best_ratio <= tol) {
      if (++w.degenerate_run > m + 8) w.bland = true;
    } else {
      w.degenerate_run = 0;
    }

    is_basic[w.basis[leaving]] = 0;
    is_basic[entering] = 1;
    w.basis[leaving] = entering;
    if (++w.pivots >= max_pivots) return RunOutcome::Budget;
  }
}

}  // namespace

LpSolution solve_lp(const LpProblem& lp, double tol, int max_pivots) {
  const int m = static_cast<int>(lp.g.rows());
  const int n = static_cast<int>(lp.g.cols());
  if (m < 1 || n < 1 || lp.h.size() != m || lp.c.size() != n)
    throw std::invalid_argument("solve_lp: inconsistent problem shapes");
  if (!(tol > 0)) throw std::invalid_argument("solve_lp: tol must be > 0");

  // Equality form [sign*G | sign-slacks | artificials] z = |h|, z >= 0.
  // Rows with h < 0 get a -1 slack and need an artificial start column.
  std::vector<int> art_rows;
  for (int i = 0; i < m; ++i)
    if (lp.h[i] < 0) art_rows.push_back(i);
  const int n_art = static_cast<int>(art_rows.size());
  const int art_begin = n + m;

  Work w;
  w.cols = Matrix::Zero(m, n + m + n_art);
  w.b = Vector(m);
  for (int i = 0; i < m; ++i) {
    const double sign = lp.h[i] < 0 ? -1.0 : 1.0;
    w.cols.row(i).head(n) = sign * lp.g.row(i);
    w.cols(i, n + i) = sign;
    w.b[i] = sign * lp.h[i];
  }
  for (int k = 0; k < n_art; ++k) w.cols(art_rows[k], art_begin + k) = 1.0;

  w.barred.assign(n + m + n_art, 0);
  w.basis.resize(m);
  {
    int k = 0;
    for (int i = 0; i < m; ++i)
      w.basis[i] = lp.h[i] < 0 ? art_begin + k++ : n + i;
  }

  LpSolution sol;
  Vector x_basic = Vector::Zero(m);

  if (n_art > 0) {
    Vector phase1_cost = Vector::Zero(n + m + n_art);
    phase1_cost.tail(n_art).setOnes();
    const RunOutcome outcome =
        run_phase(w, phase1_cost, tol, max_pivots, x_basic);
    sol.pivots = w.pivots;
    if (outcome == RunOutcome::Budget) {
      sol.budget_exhausted = true;
      return sol;
    }

    double artificial_mass = 0.0;
    for (int i = 0; i < m; ++i)
      if (w.basis[i] >= art_begin) artificial_mass += std::max(x_basic[i], 0.0);
    const double feas_tol = tol * (1.0 + w.b.lpNorm<Eigen::Infinity>());
    if (artificial_mass > feas_tol) return sol;  // genuinely infeasible

    // Swap residual zero-level artificials for structural columns where a
    // pivot element exists; rows without one are redundant and harmless.
    for (int i = 0; i < m; ++i) {
      if (w.basis[i] < art_begin) continue;
      Matrix basis_mat(m, m);
      for (int r = 0; r < m; ++r) basis_mat.col(r) = w.cols.col(w.basis[r]);
      Eigen::PartialPivLU<Matrix> lu(basis_mat);
      Vector unit = Vector::Zero(m);
      unit[i] = 1.0;
      const Vector row_of_inverse = lu.transpose().solve(unit);
      for (int j = 0; j < art_begin; ++j) {
        const bool basic =
            std::find(w.basis.begin(), w.basis.end(), j) != w.basis.end();
        if (basic) continue;
        if (std::abs(row_of_inverse.dot(w.cols.col(j))) > 1e-8) {
          w.basis[i] = j;
          break;
        }
      }
    }
    for (int k = 0; k < n_art; ++k) w.barred[art_begin + k] = 1;
  }
  sol.feasible = true;

  Vector phase2_cost = Vector::Zero(n + m + n_art);
  phase2_cost.head(n) = lp.c;
  const RunOutcome outcome =
      run_phase(w, phase2_cost, tol, max_pivots, x_basic);
  sol.pivots = w.pivots;
  if (outcome == RunOutcome::Unbounded) {
    sol.objective = -std::numeric_limits<double>::infinity();
    return sol;
  }
  sol.optimal = (outcome == RunOutcome::Optimal);
  sol.budget_exhausted = (outcome == RunOutcome::Budget);

  // Refactorise the final basis: the basic solution, the certificate and
  // the reported x must all belong to the basis we ended on.
  Matrix basis_mat(m, m);
  for (int i = 0; i < m; ++i) basis_mat.col(i) = w.cols.col(w.basis[i]);
  Eigen::PartialPivLU<Matrix> lu(basis_mat);
  x_basic = lu.solve(w.b);

  Vector full = Vector::Zero(n + m + n_art);
  for (int i = 0; i < m; ++i) full[w.basis[i]] = x_basic[i];
  sol.x = full.head(n);
  sol.objective = lp.c.dot(sol.x);

  sol.primal_residual =
      std::max({0.0, (lp.g * sol.x - lp.h).maxCoeff(), (-full).maxCoeff()});
  Vector cost_basic(m);
  for (int i = 0; i < m; ++i) cost_basic[i] = phase2_cost[w.basis[i]];
  const Vector y = lu.transpose().solve(cost_basic);
  double min_reduced = 0.0;
  for (int j = 0; j < n + m; ++j) {
    if (w.barred[j]) continue;
    min_reduced = std::min(min_reduced, phase2_cost[j] - y.dot(w.cols.col(j)));
  }
  sol.dual_infeasibility = std::max(0.0, -min_reduced);
  double comp = 0.0;
  for (int i = 0; i < m; ++i) {
    const double reduced =
        phase2_cost[w.basis[i]] - y.dot(w.cols.col(w.basis[i]));
    comp = std::max(comp, std::abs(reduced * x_basic[i]));
  }
  sol.complementarity = comp;
  return sol;
}

}  // namespace oudrift
