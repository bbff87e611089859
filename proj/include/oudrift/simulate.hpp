#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "oudrift/model.hpp"
#include "oudrift/types.hpp"

namespace oudrift {

enum class Scheme { Exact, Euler };

struct SimConfig {
  double t_horizon = 1.0;
  int n_steps = 1;
  Scheme scheme = Scheme::Exact;
  std::uint64_t seed = 0;
  bool retain_brownian = false;  // Euler only; ignored under Exact

  double dt() const { return t_horizon / n_steps; }
};

/// Discretised trajectory on the uniform grid t_k = k * dt. states column k
/// is X_{t_k} (n_steps + 1 columns). brownian_increments column k is dW_k,
/// present only for Euler paths simulated with retain_brownian.
struct Path {
  Matrix states;
  double dt = 0.0;
  Matrix brownian_increments;

  int dim() const { return static_cast<int>(states.rows()); }
  int steps() const { return static_cast<int>(states.cols()) - 1; }
  bool has_increments() const { return brownian_increments.size() > 0; }
};

/// Everything the estimators consume. c_hat is the empirical Gram
/// (1/T) sum X_k X_k^T dt, s_hat the increment cross term
/// (1/T) sum (X_{k+1}-X_k) X_k^T, eps_hat the Brownian cross term
/// (1/T) sum dW_k X_k^T when increments were retained.
struct SufficientStats {
  Matrix c_hat;
  Matrix s_hat;
  std::optional<Matrix> eps_hat;
  double t_horizon = 0.0;

  int dim() const { return static_cast<int>(c_hat.rows()); }
};

/// One Euler step; also the replay rule for verifying stored paths bitwise.
inline Vector euler_step(const Matrix& a, const Vector& x, double dt,
                         const Vector& dw) {
  return x - dt * (a * x) + dw;
}

/// Exact-discretisation pair (phi, q): phi = exp(-a delta) via scaling and
/// squaring, q = C_inf - phi C_inf phi^T (the covariance of one transition).
/// Requires the stability assumption.
std::pair<Matrix, Matrix> transition_kernel(const Matrix& a, double delta);

/// Stationary start X_0 ~ N(0, C_inf) under both schemes, then
///   Exact: X_{k+1} = phi X_k + xi_k,  xi_k ~ N(0, q)
///   Euler: X_{k+1} = X_k - a X_k dt + dW_k,  dW_k ~ N(0, dt I)
/// Fully deterministic given (model, cfg).
Path simulate_path(const ModelSpec& model, const SimConfig& cfg);

/// Left-point Ito sums over the stored grid.
SufficientStats sufficient_stats(const Path& path);

}  // namespace oudrift
