#include "oudrift/simulate.hpp"

#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "oudrift/norms.hpp"
#include "oudrift/rng.hpp"

namespace oudrift {

namespace {

std::pair<Matrix, Matrix> kernel_from_cinf(const Matrix& a, double delta,
                                           const Matrix& c_inf) {
  const Matrix phi = (-delta * a).exp();
  if (!phi.allFinite())
    throw DomainError("transition_kernel: matrix exponential overflow at delta " +
                      std::to_string(delta));
  Matrix q = c_inf - phi * c_inf * phi.transpose();
  q = 0.5 * (q + q.transpose()).eval();
  return {phi, q};
}

void validate_cfg(const SimConfig& cfg) {
  if (!(cfg.t_horizon > 0))
    throw std::invalid_argument("simulate: t_horizon must be > 0");
  if (cfg.n_steps < 1)
    throw std::invalid_argument("simulate: n_steps must be >= 1");
}

}  // namespace

std::pair<Matrix, Matrix> transition_kernel(const Matrix& a, double delta) {
  if (!(delta > 0)) throw std::invalid_argument("transition_kernel: delta must be > 0");
  return kernel_from_cinf(a, delta, solve_lyapunov(a));
}

Path simulate_path(const ModelSpec& model, const SimConfig& cfg) {
  validate_cfg(cfg);
  if (model.a0.rows() != model.d || model.a0.cols() != model.d)
    throw std::invalid_argument("simulate_path: model dimension mismatch");

  const int d = model.d;
  const int n = cfg.n_steps;
  const double dt = cfg.dt();
  const Matrix& a = model.a0;

  // Stationary start under both schemes.
  const Matrix c_inf = solve_lyapunov(a);
  Eigen::LLT<Matrix> chol_c(c_inf);
  if (chol_c.info() != Eigen::Success)
    throw DomainError(
        "simulate_path: Cholesky of the stationary covariance failed; the "
        "stability certificate is unreliable");

  Rng rng(cfg.seed);
  Path path;
  path.dt = dt;
  path.states.resize(d, n + 1);
  path.states.col(0) = chol_c.matrixL() * rng.gaussian_vector(d);

  if (cfg.scheme == Scheme::Exact) {
    const auto [phi, q] = kernel_from_cinf(a, dt, c_inf);
    Eigen::LLT<Matrix> chol_q(q);
    if (chol_q.info() != Eigen::Success)
      throw DomainError(
          "simulate_path: Cholesky of the transition covariance failed; the "
          "stability certificate is unreliable");
    const Matrix lq = chol_q.matrixL();
    for (int k = 0; k < n; ++k)
      path.states.col(k + 1) =
          phi * path.states.col(k) + lq * rng.gaussian_vector(d);
  } else {
    const double sd = std::sqrt(dt);
    const bool retain = cfg.retain_brownian;
    if (retain) path.brownian_increments.resize(d, n);
    for (int k = 0; k < n; ++k) {
      const Vector dw = sd * rng.gaussian_vector(d);
      if (retain) path.brownian_increments.col(k) = dw;
      path.states.col(k + 1) = euler_step(a, path.states.col(k), dt, dw);
    }
  }

  if (!path.states.allFinite())
    throw DomainError(
        "simulate_path: path diverged to non-finite values (step size too "
        "large for this drift)");
  return path;
}

SufficientStats sufficient_stats(const Path& path) {
  const int n = path.steps();
  if (n < 1)
    throw std::invalid_argument("sufficient_stats: path needs at least 2 states");
  if (!(path.dt > 0))
    throw std::invalid_argument("sufficient_stats: nonpositive step size");
  if (!path.states.allFinite())
    throw std::invalid_argument("sufficient_stats: path has non-finite states");

  const int d = path.dim();
  const double t_horizon = path.dt * n;
  Matrix c = Matrix::Zero(d, d);
  Matrix s = Matrix::Zero(d, d);

  constexpr int kChunk = 65536;
  for (int k0 = 0; k0 < n; k0 += kChunk) {
    const int w = std::min(kChunk, n - k0);
    const auto x_lo = path.states.middleCols(k0, w);
    const auto x_hi = path.states.middleCols(k0 + 1, w);
    c.noalias() += x_lo * x_lo.transpose();
    s.noalias() += (x_hi - x_lo) * x_lo.transpose();
  }

  SufficientStats stats;
  stats.c_hat = (path.dt / t_horizon) * (0.5 * (c + c.transpose()));
  stats.s_hat = s / t_horizon;
  stats.t_horizon = t_horizon;

  if (path.has_increments()) {
    if (path.brownian_increments.cols() != n ||
        path.brownian_increments.rows() != d)
      throw std::invalid_argument(
          "sufficient_stats: brownian increment shape does not match states");
    Matrix e = Matrix::Zero(d, d);
    for (int k0 = 0; k0 < n; k0 += kChunk) {
      const int w = std::min(kChunk, n - k0);
      e.noalias() += path.brownian_increments.middleCols(k0, w) *
                     path.states.middleCols(k0, w).transpose();
    }
    stats.eps_hat = e / t_horizon;
  }
  return stats;
}

}  // namespace oudrift
