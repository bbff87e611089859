#include "oudrift/estimate.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "oudrift/simplex.hpp"

namespace oudrift {

namespace {

void require_stats(const SufficientStats& stats, const char* who) {
  const auto d = stats.c_hat.rows();
  if (d == 0 || stats.c_hat.cols() != d)
    throw std::invalid_argument(std::string(who) + ": c_hat must be square");
  if (stats.s_hat.rows() != d || stats.s_hat.cols() != d)
    throw std::invalid_argument(std::string(who) + ": s_hat shape mismatch");
  if (!stats.c_hat.allFinite() || !stats.s_hat.allFinite())
    throw std::invalid_argument(std::string(who) + ": non-finite statistics");
}

double sym_cond(const Matrix& c, double& lambda_min_out) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues().cwiseAbs().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  lambda_min_out = lmin;
  if (lmin <= 0) return std::numeric_limits<double>::infinity();
  return lmax / lmin;
}

}  // namespace

double lasso_objective(const Matrix& a, const SufficientStats& stats,
                       double lambda) {
  require_stats(stats, "lasso_objective");
  if (a.rows() != stats.c_hat.rows() || a.cols() != stats.c_hat.cols())
    throw std::invalid_argument("lasso_objective: shape mismatch");
  const double quad = 0.5 * inner_fro(a * stats.c_hat, a);
  return inner_fro(stats.s_hat, a) + quad + lambda * norm_l1(a);
}

Matrix lasso_gradient(const Matrix& a, const SufficientStats& stats) {
  require_stats(stats, "lasso_gradient");
  return stats.s_hat + a * stats.c_hat;
}

double lasso_kkt_residual(const Matrix& a, const SufficientStats& stats,
                          double lambda) {
  const Matrix grad = lasso_gradient(a, stats);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const double g = grad(i, j);
      const double v = a(i, j);
      const double viol = v != 0.0 ? std::abs(g + (v > 0 ? lambda : -lambda))
                                   : std::max(0.0, std::abs(g) - lambda);
      worst = std::max(worst, viol);
    }
  }
  return worst;
}

double dantzig_feasibility(const Matrix& a, const SufficientStats& stats) {
  require_stats(stats, "dantzig_feasibility");
  if (a.rows() != stats.c_hat.rows() || a.cols() != stats.c_hat.cols())
    throw std::invalid_argument("dantzig_feasibility: shape mismatch");
  return norm_linf(a * stats.c_hat + stats.s_hat);
}

EstimateResult mle(const SufficientStats& stats, double cond_ceiling) {
  require_stats(stats, "mle");
  double lmin = 0.0;
  const double cond = sym_cond(stats.c_hat, lmin);
  if (!(cond <= cond_ceiling))
    throw DomainError(
        "mle: empirical Gram matrix is singular or ill-conditioned (condition "
        "estimate " + std::to_string(cond) +
        "); horizon too short for this dimension");

  // a_hat = -s_hat c_hat^{-1}, via the symmetric solve c_hat x = -s_hat^T.
  Eigen::LDLT<Matrix> ldlt(stats.c_hat);
  Matrix at = ldlt.solve(-stats.s_hat.transpose());
  at += ldlt.solve(-stats.s_hat.transpose() - stats.c_hat * at);

  EstimateResult result;
  result.a_hat = at.transpose();
  result.method = Method::Mle;
  result.lambda = 0.0;
  result.iterations = 1;
  result.objective = lasso_objective(result.a_hat, stats, 0.0);
  result.kkt_residual = lasso_kkt_residual(result.a_hat, stats, 0.0);
  result.dantzig_feasibility = dantzig_feasibility(result.a_hat, stats);
  result.l1_norm = norm_l1(result.a_hat);
  result.status = SolveStatus::Converged;
  return result;
}

EstimateResult lasso(const SufficientStats& stats, const LassoConfig& cfg) {
  require_stats(stats, "lasso");
  if (!(cfg.lambda >= 0)) throw std::invalid_argument("lasso: lambda must be >= 0");
  if (!(cfg.tol > 0)) throw std::invalid_argument("lasso: tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("lasso: max_iter must be >= 1");

  const Matrix& c = stats.c_hat;
  const Matrix& s = stats.s_hat;
  const int d = stats.dim();
  const double lambda = cfg.lambda;

  Eigen::SelfAdjointEigenSolver<Matrix> es(c, Eigen::EigenvaluesOnly);
  const double lipschitz = es.eigenvalues().maxCoeff();

  EstimateResult result;
  result.method = Method::Lasso;
  result.lambda = lambda;

  if (!(lipschitz > 0)) {
    // Zero Gram matrix: the loss is linear and the problem decays to
    // min <s, a> + lambda |a|_1, bounded only when lambda dominates s.
    if (norm_linf(s) > lambda)
      throw DomainError("lasso: objective unbounded below (zero Gram matrix "
                        "and |s_hat|_inf > lambda)");
    result.a_hat = Matrix::Zero(d, d);
    result.iterations = 0;
    result.objective = 0.0;
    result.kkt_residual = lasso_kkt_residual(result.a_hat, stats, lambda);
    result.dantzig_feasibility = dantzig_feasibility(result.a_hat, stats);
    result.l1_norm = 0.0;
    result.status = SolveStatus::Converged;
    return result;
  }

  const double step = 1.0 / lipschitz;
  const double kkt_tol = 10.0 * cfg.tol * (1.0 + lambda);
  const auto prox = [&](const Matrix& z) {
    Matrix out(d, d);
    const double tau = step * lambda;
    for (Eigen::Index jj = 0; jj < z.cols(); ++jj)
      for (Eigen::Index ii = 0; ii < z.rows(); ++ii)
        out(ii, jj) = soft_threshold(z(ii, jj), tau);
    return out;
  };

  Matrix a = Matrix::Zero(d, d);
  Matrix extrapolated = a;
  double momentum = 1.0;
  double f_current = lasso_objective(a, stats, lambda);  // objective at 0
  result.status = SolveStatus::IterLimit;

  int it = 0;
  while (it < cfg.max_iter) {
    ++it;
    Matrix candidate = prox(extrapolated - step * (s + extrapolated * c));
    double f_candidate = lasso_objective(candidate, stats, lambda);
    if (f_candidate > f_current) {
      // Monotone restart: a plain proximal step from the last accepted
      // iterate cannot increase the objective at step 1/L.
      momentum = 1.0;
      candidate = prox(a - step * (s + a * c));
      f_candidate = lasso_objective(candidate, stats, lambda);
    }

    const double next_momentum =
        cfg.acceleration ? 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum))
                         : 1.0;
    extrapolated =
        candidate + ((momentum - 1.0) / next_momentum) * (candidate - a);

    const double decrease = std::abs(f_current - f_candidate);
    const double rel = decrease / std::max(1.0, std::abs(f_candidate));
    a = candidate;
    f_current = f_candidate;
    momentum = next_momentum;

    if (rel < cfg.tol &&
        lasso_kkt_residual(a, stats, lambda) <= kkt_tol) {
      result.status = SolveStatus::Converged;
      break;
    }
  }

  result.a_hat = a;
  result.iterations = it;
  result.objective = f_current;
  result.kkt_residual = lasso_kkt_residual(a, stats, lambda);
  result.dantzig_feasibility = dantzig_feasibility(a, stats);
  result.l1_norm = norm_l1(a);
  return result;
}

EstimateResult dantzig(const SufficientStats& stats, const DantzigConfig& cfg) {
  require_stats(stats, "dantzig");
  if (!(cfg.lambda >= 0)) throw std::invalid_argument("dantzig: lambda must be >= 0");
  if (!(cfg.lp_tol > 0)) throw std::invalid_argument("dantzig: lp_tol must be > 0");

  const int d = stats.dim();
  const Matrix& c = stats.c_hat;
  const int max_pivots =
      cfg.max_pivots_per_row > 0 ? cfg.max_pivots_per_row : 10 * d * d;

  // Row i solves  min |a_i|_1  s.t.  |c_hat a_i + s_i|_inf <= lambda,
  // as an LP over (u, v) >= 0 with a_i = u - v.
  Matrix g(2 * d, 2 * d);
  g.topLeftCorner(d, d) = c;
  g.topRightCorner(d, d) = -c;
  g.bottomLeftCorner(d, d) = -c;
  g.bottomRightCorner(d, d) = c;
  const Vector ones = Vector::Ones(2 * d);

  EstimateResult result;
  result.method = Method::Dantzig;
  result.lambda = cfg.lambda;
  result.a_hat = Matrix::Zero(d, d);
  result.status = SolveStatus::Converged;

  int total_pivots = 0;
  double worst_dual = 0.0;
  for (int i = 0; i < d; ++i) {
    Vector h(2 * d);
    h.head(d) = Vector::Constant(d, cfg.lambda) - stats.s_hat.row(i).transpose();
    h.tail(d) = Vector::Constant(d, cfg.lambda) + stats.s_hat.row(i).transpose();
    const LpSolution sol = solve_lp({g, h, ones}, cfg.lp_tol, max_pivots);
    if (!sol.feasible) {
      if (sol.budget_exhausted) {
        result.status = SolveStatus::PivotLimit;
        total_pivots += sol.pivots;
        continue;
      }
      throw DomainError("dantzig: row " + std::to_string(i) +
                        " has an empty feasible set; lambda too small for a "
                        "rank-deficient Gram matrix");
    }
    if (!sol.optimal) result.status = SolveStatus::PivotLimit;
    result.a_hat.row(i) =
        (sol.x.head(d) - sol.x.tail(d)).transpose();
    total_pivots += sol.pivots;
    worst_dual = std::max(worst_dual, sol.dual_infeasibility);
  }

  result.iterations = total_pivots;
  result.objective = norm_l1(result.a_hat);
  result.kkt_residual = worst_dual;
  result.dantzig_feasibility = dantzig_feasibility(result.a_hat, stats);
  result.l1_norm = result.objective;
  return result;
}

double lambda_rule(int d, double t_horizon, double eps0,
                   const ErgodicConstants& constants) {
  if (!(eps0 > 0 && eps0 < 1))
    throw std::invalid_argument("lambda_rule: eps0 must lie in (0,1)");
  if (!(t_horizon > 0))
    throw std::invalid_argument("lambda_rule: t_horizon must be > 0");
  if (d < 1) throw std::invalid_argument("lambda_rule: d must be >= 1");
  const double log_term =
      std::log(2.0 * static_cast<double>(d) * d / eps0);
  return 2.0 * std::sqrt((2.0 * constants.m_small + constants.k_small) *
                         log_term / t_horizon);
}

double lambda_rule_plugin(int d, double t_horizon, double eps0,
                          const SufficientStats& stats) {
  require_stats(stats, "lambda_rule_plugin");
  Eigen::SelfAdjointEigenSolver<Matrix> es(stats.c_hat, Eigen::EigenvaluesOnly);
  ErgodicConstants surrogate;
  surrogate.m_small = stats.c_hat.diagonal().cwiseAbs().maxCoeff();
  surrogate.k_small = es.eigenvalues().minCoeff();
  return lambda_rule(d, t_horizon, eps0, surrogate);
}

}  // namespace oudrift
