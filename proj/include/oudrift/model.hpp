#pragma once

#include <cstdint>

#include "oudrift/types.hpp"

namespace oudrift {

/// Drift model: square matrix a0 driving dX = -a0 X dt + dW, its dimension
/// and exact nonzero count. seed/margin record how a generated model was
/// drawn (0 for hand-made models).
struct ModelSpec {
  Matrix a0;
  int d = 0;
  int s0 = 0;
  std::uint64_t seed = 0;
  double margin = 0.0;
};

/// Builds a ModelSpec from a square matrix, filling d and s0.
ModelSpec make_model(Matrix a0);

/// Eigenstructure summary of a drift matrix. The stability assumption holds
/// iff the matrix is (numerically) diagonalizable and every eigenvalue has a
/// strictly positive real part.
struct HCertificate {
  Eigen::VectorXcd eigenvalues;
  double r0 = 0.0;                 // min real part of the eigenvalues
  double p0 = 0.0;                 // op-norm condition of the unit-column eigenvector matrix
  bool diagonalizable = false;
  double condition_estimate = 0.0; // value compared against the ceiling
  bool solver_converged = false;

  bool holds() const { return solver_converged && diagonalizable && r0 > 0.0; }
};

/// Spectral constants of the stationary regime, consumed by every bound:
/// c_inf solves a0 C + C a0^T = I; k_big/k_small are its extreme eigenvalues,
/// m_small/m_big the sup-norms of its diagonal and of the full matrix.
struct ErgodicConstants {
  Matrix c_inf;
  double k_big = 0.0;
  double k_small = 0.0;
  double m_small = 0.0;
  double m_big = 0.0;
  double r0 = 0.0;
  double p0 = 0.0;
};

/// Eigendecomposition-based stability check. Diagonalizability is decided by
/// the conditioning of the unit-column eigenvector matrix against
/// cond_ceiling. Eigensolver failures are reported in the certificate, not
/// thrown.
HCertificate check_assumption_h(const Matrix& a, double cond_ceiling = 1e12);

/// Stationary covariance: the unique solution of a C + C a^T = I, computed
/// through the d^2 x d^2 Kronecker system. Requires the stability assumption
/// (otherwise the defining integral diverges and this throws DomainError).
/// Residual contract: max-norm of (a C + C a^T - I) <= 1e-10 * d.
Matrix solve_lyapunov(const Matrix& a);

/// All constants in one sweep: stability certificate + Lyapunov solve +
/// symmetric eigensolver on the stationary covariance.
ErgodicConstants ergodic_constants(const Matrix& a);

/// Random sparse stable drift: s-d off-diagonal positions drawn uniformly
/// without replacement, entries uniform on [-1,-0.1] u [0.1,1], each diagonal
/// entry set to its row's absolute off-diagonal sum plus margin. Gershgorin
/// then forces every eigenvalue real part >= margin. Deterministic in seed.
ModelSpec generate_sparse_stable(int d, int s, double margin, std::uint64_t seed);

}  // namespace oudrift
