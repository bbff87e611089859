#pragma once

#include "oudrift/types.hpp"

namespace oudrift {

/// Entrywise l1 norm: sum of |a_ij|.
inline double norm_l1(const Matrix& a) { return a.cwiseAbs().sum(); }

/// Max norm: largest |a_ij|.
inline double norm_linf(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

/// Frobenius norm.
inline double norm_fro(const Matrix& a) { return a.norm(); }

/// Exact count of nonzero entries.
inline int norm_l0(const Matrix& a) {
  return static_cast<int>((a.array() != 0.0).count());
}

/// Count of entries with |a_ij| > tau.
inline int support_count(const Matrix& a, double tau) {
  return static_cast<int>((a.array().abs() > tau).count());
}

/// Frobenius scalar product tr(a^T b).
inline double inner_fro(const Matrix& a, const Matrix& b) {
  return a.cwiseProduct(b).sum();
}

}  // namespace oudrift
