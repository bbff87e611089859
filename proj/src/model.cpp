#include "oudrift/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "oudrift/norms.hpp"
#include "oudrift/rng.hpp"

namespace oudrift {

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

void require_square_finite(const Matrix& a, const char* who) {
  if (a.rows() == 0 || a.rows() != a.cols())
    throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty, got " +
                                std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  if (!a.allFinite())
    throw std::invalid_argument(std::string(who) + ": matrix has non-finite entries");
}

}  // namespace

ModelSpec make_model(Matrix a0) {
  require_square_finite(a0, "make_model");
  ModelSpec spec;
  spec.d = static_cast<int>(a0.rows());
  spec.s0 = norm_l0(a0);
  spec.a0 = std::move(a0);
  return spec;
}

HCertificate check_assumption_h(const Matrix& a, double cond_ceiling) {
  require_square_finite(a, "check_assumption_h");
  HCertificate cert;
  Eigen::EigenSolver<Matrix> solver(a);
  if (solver.info() != Eigen::Success) {
    cert.solver_converged = false;
    cert.diagonalizable = false;
    cert.r0 = std::numeric_limits<double>::quiet_NaN();
    cert.p0 = std::numeric_limits<double>::quiet_NaN();
    cert.condition_estimate = std::numeric_limits<double>::infinity();
    return cert;
  }
  cert.solver_converged = true;
  cert.eigenvalues = solver.eigenvalues();
  cert.r0 = cert.eigenvalues.real().minCoeff();

  // p0 is defined up to eigenvector scaling; unit columns make it canonical.
  Eigen::MatrixXcd p = solver.eigenvectors();
  for (Eigen::Index j = 0; j < p.cols(); ++j) {
    const double n = p.col(j).norm();
    if (n > 0) p.col(j) /= n;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(p);
  const auto& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  cert.condition_estimate =
      smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  cert.p0 = cert.condition_estimate;
  cert.diagonalizable = cert.condition_estimate <= cond_ceiling;
  return cert;
}

Matrix solve_lyapunov(const Matrix& a) {
  require_square_finite(a, "solve_lyapunov");
  const HCertificate cert = check_assumption_h(a);
  if (!cert.holds())
    throw DomainError(
        "solve_lyapunov: stability assumption fails (min eigenvalue real part " +
        std::to_string(cert.r0) + ", eigenvector condition " +
        std::to_string(cert.condition_estimate) +
        "); the stationary covariance integral diverges");

  const int d = static_cast<int>(a.rows());
  const Matrix eye = Matrix::Identity(d, d);
  const Matrix system = kron(eye, a) + kron(a, eye);
  Vector rhs = Vector::Zero(d * d);
  for (int i = 0; i < d; ++i) rhs[i * d + i] = 1.0;  // vec(I), column stacked

  Eigen::PartialPivLU<Matrix> lu(system);
  Vector x = lu.solve(rhs);
  x += lu.solve(rhs - system * x);  // one refinement pass

  Matrix c(d, d);
  for (int j = 0; j < d; ++j) c.col(j) = x.segment(j * d, d);
  c = 0.5 * (c + c.transpose()).eval();

  const double residual = norm_linf(a * c + c * a.transpose() - eye);
  if (!(residual <= 1e-10 * d))
    throw DomainError(
        "solve_lyapunov: singular or ill-conditioned Kronecker system "
        "(residual " + std::to_string(residual) + ", required " +
        std::to_string(1e-10 * d) + "); an eigenvalue pair may sum to zero");
  return c;
}

ErgodicConstants ergodic_constants(const Matrix& a) {
  const HCertificate cert = check_assumption_h(a);
  if (!cert.holds())
    throw DomainError("ergodic_constants: stability assumption fails (r0 = " +
                      std::to_string(cert.r0) + ")");
  ErgodicConstants out;
  out.c_inf = solve_lyapunov(a);
  Eigen::SelfAdjointEigenSolver<Matrix> es(out.c_inf, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw DomainError("ergodic_constants: eigensolver failed on the stationary covariance");
  out.k_big = es.eigenvalues().maxCoeff();
  out.k_small = es.eigenvalues().minCoeff();
  if (!(out.k_small > 0))
    throw DomainError("ergodic_constants: stationary covariance is not positive definite");
  out.m_small = out.c_inf.diagonal().cwiseAbs().maxCoeff();
  out.m_big = norm_linf(out.c_inf);
  out.r0 = cert.r0;
  out.p0 = cert.p0;
  return out;
}

ModelSpec generate_sparse_stable(int d, int s, double margin,
                                 std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("generate_sparse_stable: d must be >= 1");
  if (s < d)
    throw std::invalid_argument(
        "generate_sparse_stable: s < d cannot place the forced diagonal (s=" +
        std::to_string(s) + ", d=" + std::to_string(d) + ")");
  if (s > d * d)
    throw std::invalid_argument("generate_sparse_stable: s exceeds d^2");
  if (!(margin > 0))
    throw std::invalid_argument("generate_sparse_stable: margin must be > 0");

  Rng rng(seed);
  std::vector<int> off_diag;
  off_diag.reserve(static_cast<std::size_t>(d) * d - d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      if (r != c) off_diag.push_back(r * d + c);

  const int n_off = s - d;
  for (int k = 0; k < n_off; ++k) {
    const std::size_t j =
        k + static_cast<std::size_t>(rng.below(off_diag.size() - k));
    std::swap(off_diag[k], off_diag[j]);
  }

  Matrix a0 = Matrix::Zero(d, d);
  for (int k = 0; k < n_off; ++k) {
    const int r = off_diag[k] / d;
    const int c = off_diag[k] % d;
    const double sign = rng.below(2) == 0 ? 1.0 : -1.0;
    a0(r, c) = sign * (0.1 + 0.9 * rng.uniform());
  }
  for (int r = 0; r < d; ++r)
    a0(r, r) = a0.row(r).cwiseAbs().sum() + margin;

  ModelSpec spec = make_model(std::move(a0));
  spec.seed = seed;
  spec.margin = margin;
  if (spec.s0 != s)
    throw DomainError("generate_sparse_stable: nonzero count mismatch");
  if (!check_assumption_h(spec.a0).holds())
    throw DomainError(
        "generate_sparse_stable: generated matrix fails the stability check");
  return spec;
}

}  // namespace oudrift
