#pragma once

#include <algorithm>
#include <cmath>

#include "oudrift/model.hpp"
#include "oudrift/norms.hpp"
#include "oudrift/simulate.hpp"
#include "oudrift/types.hpp"

namespace oudrift {

enum class Method { Mle, Lasso, Dantzig };
enum class SolveStatus { Converged, IterLimit, PivotLimit };

enum class StepRule { FixedLipschitz };  // step = 1 / lambda_max(c_hat)

struct LassoConfig {
  double lambda = 0.0;
  int max_iter = 20000;
  double tol = 1e-8;  // relative objective decrease
  StepRule step_rule = StepRule::FixedLipschitz;
  bool acceleration = true;
};

struct DantzigConfig {
  double lambda = 0.0;
  double lp_tol = 1e-9;
  int max_pivots_per_row = 0;  // 0 -> 10 d^2
};

struct EstimateResult {
  Matrix a_hat;
  Method method = Method::Mle;
  double lambda = 0.0;
  int iterations = 0;
  double objective = 0.0;
  double kkt_residual = 0.0;
  double dantzig_feasibility = 0.0;  // max-norm of a_hat c_hat + s_hat
  double l1_norm = 0.0;
  SolveStatus status = SolveStatus::Converged;

  int l0_count_at(double tau) const { return support_count(a_hat, tau); }
};

/// Proximal operator of tau |.|: sign(x) * max(|x| - tau, 0).
inline double soft_threshold(double x, double tau) {
  return x > tau ? x - tau : (x < -tau ? x + tau : 0.0);
}

/// Quadratic likelihood loss plus penalty:
/// tr(s_hat a^T + a c_hat a^T / 2) + lambda * |a|_1.
double lasso_objective(const Matrix& a, const SufficientStats& stats,
                       double lambda);

/// Gradient of the smooth part: s_hat + a c_hat.
Matrix lasso_gradient(const Matrix& a, const SufficientStats& stats);

/// Entrywise first-order optimality residual of the penalized problem:
/// on the support |grad_ij + lambda sign(a_ij)|, off it max(0, |grad_ij| - lambda).
double lasso_kkt_residual(const Matrix& a, const SufficientStats& stats,
                          double lambda);

/// Max-norm of a c_hat + s_hat (the Dantzig constraint value at a).
double dantzig_feasibility(const Matrix& a, const SufficientStats& stats);

/// Unpenalized maximum-likelihood drift: -s_hat c_hat^{-1} via a symmetric
/// linear solve. Refuses when cond(c_hat) exceeds cond_ceiling.
EstimateResult mle(const SufficientStats& stats, double cond_ceiling = 1e12);

/// Accelerated proximal gradient (monotone restart) from a_0 = 0 with fixed
/// step 1 / lambda_max(c_hat). Convergence is declared once the relative
/// objective decrease falls below tol AND the KKT residual is within
/// 10 tol (1 + lambda); otherwise the result comes back flagged IterLimit.
EstimateResult lasso(const SufficientStats& stats, const LassoConfig& cfg);

/// Smallest-l1 matrix satisfying the gradient-residual constraint
/// max-norm(a c_hat + s_hat) <= lambda. Decouples over rows; each row is a
/// 2d-variable LP (variable split a = u - v) solved by the dense simplex.
EstimateResult dantzig(const SufficientStats& stats, const DantzigConfig& cfg);

/// Tuning-parameter rule 2 sqrt((2 m + k) ln(2 d^2 / eps0) / T) with
/// m = m_small and k = k_small taken from the true constants.
double lambda_rule(int d, double t_horizon, double eps0,
                   const ErgodicConstants& constants);

/// Plug-in variant: m -> max diagonal of c_hat, k -> lambda_min(c_hat).
double lambda_rule_plugin(int d, double t_horizon, double eps0,
                          const SufficientStats& stats);

}  // namespace oudrift
