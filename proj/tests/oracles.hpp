#pragma once

// Test-only reference implementations, kept independent of the library code
// paths they are used to check.

#include <optional>
#include <vector>

#include "oudrift/model.hpp"
#include "oudrift/simulate.hpp"
#include "oudrift/types.hpp"

namespace oracle {

using oudrift::Matrix;
using oudrift::Vector;

// ---- naive norms (double loops) --------------------------------------
double naive_l1(const Matrix& a);
double naive_linf(const Matrix& a);
double naive_fro(const Matrix& a);
int naive_l0(const Matrix& a);

// ---- quadrature of the matrix-exponential integrals ------------------
// integral_0^inf exp(-s a) exp(-s a^T) ds, truncated using the decay rate
// of the drift, composite Simpson.
Matrix quad_stationary_covariance(const Matrix& a, double tol = 1e-9);
// integral_0^delta exp(-s a) exp(-s a^T) ds.
Matrix quad_transition_covariance(const Matrix& a, double delta,
                                  double tol = 1e-10);

// ---- central finite differences of the smooth loss -------------------
Matrix fd_gradient(const Matrix& a, const oudrift::SufficientStats& stats,
                   double h = 1e-6);

// ---- vertex-enumeration LP oracle -------------------------------------
// min c^T x  s.t.  g x <= h, x >= 0; enumerates all basic points.
struct VertexLpResult {
  bool feasible = false;
  double objective = 0.0;
  Vector x;
};
VertexLpResult vertex_lp(const Matrix& g, const Vector& h, const Vector& c,
                         double feas_tol = 1e-9);

// Row LP of the constrained l1-minimiser, through vertex_lp on the split
// form; returns the minimal l1 norm of one row.
std::optional<double> dantzig_row_l1(const Matrix& c_hat, const Vector& s_row,
                                     double lambda);
// Whole-matrix problem posed as a single LP (all d^2 entries split), d small.
std::optional<double> dantzig_full_l1(const Matrix& c_hat, const Matrix& s_hat,
                                      double lambda);

// ---- independently hand-coded duplicates of the formula evaluators ----
// (long double arithmetic, different algebraic arrangement).
double tail_exponent_dup(double x, const oudrift::ErgodicConstants& c);
double re_prefactor_dup(double c0, const oudrift::ErgodicConstants& c);
double re_time_min_dup(double eps0, int s, double c0,
                       const oudrift::ErgodicConstants& c, int d);
double martingale_time_dup(double eps0, int s, int d,
                           const oudrift::ErgodicConstants& c);
double lambda_rule_dup(int d, double t, double eps0,
                       const oudrift::ErgodicConstants& c);
double lasso_oracle_const_dup(double gamma, const oudrift::ErgodicConstants& c);
double dantzig_oracle_const_dup(double gamma, const oudrift::ErgodicConstants& c);

// ---- cyclic Jacobi eigenvalues of a symmetric matrix ------------------
std::vector<double> jacobi_eigenvalues(Matrix a);

}  // namespace oracle
