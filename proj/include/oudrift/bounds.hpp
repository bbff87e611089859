#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "oudrift/model.hpp"
#include "oudrift/types.hpp"

namespace oudrift {

/// Cone parameters: matrices whose l1 mass is within a factor (1 + c0) of
/// the l1 mass of their s largest-magnitude entries.
struct ConeSpec {
  int s = 1;
  double c0 = 1.0;
};

/// Coordinates (row-major linear indices) of the s largest-magnitude entries;
/// ties broken by lowest row-major index.
std::vector<int> top_s_coordinates(const Matrix& v, int s);

/// Membership test |v|_1 <= (1 + c0) |v restricted to top-s|_1, with
/// additive slack 1e-12. Throws on the zero matrix.
bool in_cone(const Matrix& v, const ConeSpec& cone);

/// Exponent rate of the empirical-Gram deviation tail: the probability that
/// a unit quadratic form of (c_hat - c_inf) exceeds x is at most
/// 2 exp(-T * tail_exponent(x)).  Value: r0 x^2 / (8 p0 K (x + K)).
double tail_exponent(double x, const ErgodicConstants& c);

struct ReTimeThreshold {
  double t_min = 0.0;      // minimal horizon for the restricted eigenvalue event
  double prefactor = 0.0;  // dimension-free factor in front of the log bracket
  double bracket = 0.0;    // (4s+1) ln d - 2s (ln(2s/21) - 1) + ln(2/eps0)
  bool bracket_negative = false;
};

/// Horizon threshold guaranteeing the restricted eigenvalue event with
/// probability 1 - eps0. The bracket is returned verbatim and flagged when
/// negative rather than clamped.
ReTimeThreshold re_time_threshold(double eps0, int s, double c0,
                                  const ErgodicConstants& c, int d);

/// Horizon threshold for the martingale deviation event:
/// (48 p0 K / r0) ((k + 6K)/k^2) ((2s+1) ln d - s(ln s - 1) + ln(4/eps0)).
double martingale_time_threshold(double eps0, int s, int d,
                                 const ErgodicConstants& c);

struct OracleBounds {
  double lasso_oracle_const = 0.0;    // 9 (2+g)^2 / (2 k g (1+g))
  double dantzig_oracle_const = 0.0;  // (18/k) ((g+2)^2/(4g) + 48 M/k + 72)
  double l2_pred = 0.0;               // 18 s0 lambda^2 / k
  double frob = 0.0;                  // 36 s0 lambda^2 / k^2
  double l1 = 0.0;                    // 24 s0 lambda / k
  double sparsity = 0.0;              // (48 M/k + 72) s0
};

OracleBounds oracle_bounds(int s0, double lambda, double gamma,
                           const ErgodicConstants& c);

/// Monte-Carlo upper estimate (not a certified bound) of the restricted
/// eigenvalue inf over the cone of tr(v c_hat v^T) / |v|_2^2. Samples are
/// s-sparse gaussian cores plus a dense tail rescaled toward the cone
/// boundary, each verified by in_cone; the minimum sampled ratio is
/// returned. When s covers every coordinate the infimum is lambda_min and
/// is returned exactly.
double restricted_eigenvalue_empirical(const Matrix& c_hat,
                                       const ConeSpec& cone, int n_samples,
                                       std::uint64_t seed);

/// Every closed-form quantity in one audit bundle, evaluated at the lambda
/// of the tuning rule for the given (d, T, eps0).
struct BoundsReport {
  ErgodicConstants constants;
  int d = 0;
  int s = 1;
  double c0 = 1.0;
  double eps0 = 0.1;
  int s0 = 1;
  double gamma = 1.0;
  double t_horizon = 0.0;
  double lambda_min = 0.0;
  ReTimeThreshold re_threshold;
  double martingale_t_min = 0.0;
  OracleBounds oracle;
  std::vector<std::pair<double, double>> tail_exponent_curve;  // (x, value)
};

BoundsReport bounds_report(int d, int s, double c0, double eps0, int s0,
                           double gamma, double t_horizon,
                           const ErgodicConstants& constants);

}  // namespace oudrift
