#include "oudrift/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "oudrift/estimate.hpp"
#include "oudrift/norms.hpp"
#include "oudrift/rng.hpp"

namespace oudrift {

namespace {

void require_constants(const ErgodicConstants& c, const char* who) {
  if (!(c.r0 > 0 && c.p0 >= 1 && c.k_big > 0 && c.k_small > 0 &&
        c.m_small > 0 && c.m_big > 0))
    throw std::invalid_argument(std::string(who) +
                                ": constants must all be positive (p0 >= 1)");
}

// tr(v c v^T); the same code path is used for numerator and denominator so
// the isotropic case divides out exactly.
double quad_form(const Matrix& v, const Matrix& c) {
  return (v * c).cwiseProduct(v).sum();
}

}  // namespace

std::vector<int> top_s_coordinates(const Matrix& v, int s) {
  const int total = static_cast<int>(v.size());
  if (s < 1 || s > total)
    throw std::invalid_argument("top_s_coordinates: s out of range");
  std::vector<int> idx(total);
  std::iota(idx.begin(), idx.end(), 0);
  const int cols = static_cast<int>(v.cols());
  const auto value_at = [&](int linear) {
    return std::abs(v(linear / cols, linear % cols));
  };
  std::partial_sort(idx.begin(), idx.begin() + s, idx.end(),
                    [&](int a, int b) {
                      const double va = value_at(a), vb = value_at(b);
                      return va > vb || (va == vb && a < b);
                    });
  idx.resize(s);
  return idx;
}

bool in_cone(const Matrix& v, const ConeSpec& cone) {
  if (v.size() == 0 || !(v.array() != 0.0).any())
    throw std::invalid_argument("in_cone: zero matrix has no cone membership");
  if (!(cone.c0 > 0)) throw std::invalid_argument("in_cone: c0 must be > 0");
  const auto top = top_s_coordinates(v, cone.s);
  const int cols = static_cast<int>(v.cols());
  double restricted = 0.0;
  for (int linear : top) restricted += std::abs(v(linear / cols, linear % cols));
  return norm_l1(v) <= (1.0 + cone.c0) * restricted + 1e-12;
}

double tail_exponent(double x, const ErgodicConstants& c) {
  if (x < 0) throw std::invalid_argument("tail_exponent: x must be >= 0");
  require_constants(c, "tail_exponent");
  return (c.r0 / (8.0 * c.p0 * c.k_big)) * (x * x / (x + c.k_big));
}

ReTimeThreshold re_time_threshold(double eps0, int s, double c0,
                                  const ErgodicConstants& c, int d) {
  if (!(eps0 > 0 && eps0 < 1))
    throw std::invalid_argument("re_time_threshold: eps0 must lie in (0,1)");
  if (s < 1) throw std::invalid_argument("re_time_threshold: s must be >= 1");
  if (!(c0 > 0)) throw std::invalid_argument("re_time_threshold: c0 must be > 0");
  if (d < 2) throw std::invalid_argument("re_time_threshold: d must be >= 2");
  require_constants(c, "re_time_threshold");

  const double growth = (c0 + 2.0) * (c0 + 2.0);
  ReTimeThreshold out;
  out.prefactor = 144.0 * c.p0 * c.k_big * growth *
                  (c.k_small + 18.0 * growth * c.k_big) /
                  (c.r0 * c.k_small * c.k_small);
  out.bracket = (4.0 * s + 1.0) * std::log(static_cast<double>(d)) -
                2.0 * s * (std::log(2.0 * s / 21.0) - 1.0) +
                std::log(2.0 / eps0);
  out.bracket_negative = out.bracket < 0;
  out.t_min = out.prefactor * out.bracket;
  return out;
}

double martingale_time_threshold(double eps0, int s, int d,
                                 const ErgodicConstants& c) {
  if (!(eps0 > 0 && eps0 < 1))
    throw std::invalid_argument("martingale_time_threshold: eps0 must lie in (0,1)");
  if (s < 1) throw std::invalid_argument("martingale_time_threshold: s must be >= 1");
  if (d < 2) throw std::invalid_argument("martingale_time_threshold: d must be >= 2");
  require_constants(c, "martingale_time_threshold");
  const double bracket =
      (2.0 * s + 1.0) * std::log(static_cast<double>(d)) -
      s * (std::log(static_cast<double>(s)) - 1.0) + std::log(4.0 / eps0);
  return (48.0 * c.p0 * c.k_big / c.r0) *
         ((c.k_small + 6.0 * c.k_big) / (c.k_small * c.k_small)) * bracket;
}

OracleBounds oracle_bounds(int s0, double lambda, double gamma,
                           const ErgodicConstants& c) {
  if (s0 < 1) throw std::invalid_argument("oracle_bounds: s0 must be >= 1");
  if (!(lambda >= 0)) throw std::invalid_argument("oracle_bounds: lambda must be >= 0");
  if (!(gamma > 0)) throw std::invalid_argument("oracle_bounds: gamma must be > 0");
  require_constants(c, "oracle_bounds");

  const double k = c.k_small;
  const double big_m = c.m_big;
  OracleBounds out;
  out.lasso_oracle_const =
      9.0 * (2.0 + gamma) * (2.0 + gamma) / (2.0 * k * gamma * (1.0 + gamma));
  out.dantzig_oracle_const =
      (18.0 / k) *
      ((gamma + 2.0) * (gamma + 2.0) / (4.0 * gamma) + 48.0 * big_m / k + 72.0);
  out.l2_pred = 18.0 * s0 * lambda * lambda / k;
  out.frob = 36.0 * s0 * lambda * lambda / (k * k);
  out.l1 = 24.0 * s0 * lambda / k;
  out.sparsity = (48.0 * big_m / k + 72.0) * s0;
  return out;
}

double restricted_eigenvalue_empirical(const Matrix& c_hat,
                                       const ConeSpec& cone, int n_samples,
                                       std::uint64_t seed) {
  const int d = static_cast<int>(c_hat.rows());
  if (d == 0 || c_hat.cols() != d)
    throw std::invalid_argument("restricted_eigenvalue_empirical: c_hat must be square");
  if (norm_linf(c_hat - c_hat.transpose()) > 1e-10 * std::max(1.0, norm_linf(c_hat)))
    throw std::invalid_argument("restricted_eigenvalue_empirical: c_hat must be symmetric");
  if (n_samples < 1)
    throw std::invalid_argument("restricted_eigenvalue_empirical: n_samples must be >= 1");
  const int total = d * d;
  const int s = cone.s;
  if (s < 1 || s > total)
    throw std::invalid_argument("restricted_eigenvalue_empirical: s out of range");

  Eigen::SelfAdjointEigenSolver<Matrix> es(c_hat);
  if (es.info() != Eigen::Success)
    throw DomainError("restricted_eigenvalue_empirical: eigensolver failed");
  const double lambda_min = es.eigenvalues().minCoeff();

  // Full restriction: every nonzero matrix is in the cone and the infimum
  // is the smallest eigenvalue itself.
  if (s == total) return lambda_min;

  const Matrix eye = Matrix::Identity(d, d);
  double best = std::numeric_limits<double>::infinity();
  int accepted = 0;

  // Deterministic candidate: one row equal to the minimal eigenvector.
  {
    Matrix v = Matrix::Zero(d, d);
    v.row(0) = es.eigenvectors().col(0).transpose();
    if (in_cone(v, cone)) {
      best = std::min(best, quad_form(v, c_hat) / quad_form(v, eye));
      ++accepted;
    }
  }

  Rng rng(seed);
  std::vector<int> slots(total);
  for (int k = 0; k < n_samples; ++k) {
    std::iota(slots.begin(), slots.end(), 0);
    for (int i = 0; i < s; ++i) {
      const std::size_t j =
          i + static_cast<std::size_t>(rng.below(slots.size() - i));
      std::swap(slots[i], slots[j]);
    }

    Matrix core = Matrix::Zero(d, d);
    double core_min = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s; ++i) {
      double g = 0.0;
      do {
        g = rng.gaussian();
      } while (g == 0.0);
      core(slots[i] / d, slots[i] % d) = g;
      core_min = std::min(core_min, std::abs(g));
    }

    // Dense tail, rescaled toward the cone boundary but small enough
    // entrywise that the core keeps the top-s coordinates.
    Matrix tail = Matrix::Zero(d, d);
    double tail_l1 = 0.0;
    double tail_max = 0.0;
    for (int i = s; i < total; ++i) {
      const double g = rng.gaussian();
      tail(slots[i] / d, slots[i] % d) = g;
      tail_l1 += std::abs(g);
      tail_max = std::max(tail_max, std::abs(g));
    }
    double scale = 0.0;
    if (tail_l1 > 0) {
      scale = cone.c0 * norm_l1(core) / tail_l1;
      scale = std::min(scale, 0.5 * core_min / tail_max);
      if (k % 2 == 1) scale *= rng.uniform();  // interior samples too
    }

    const Matrix v = core + scale * tail;
    if (!in_cone(v, cone)) continue;
    best = std::min(best, quad_form(v, c_hat) / quad_form(v, eye));
    ++accepted;
  }

  if (accepted == 0)
    throw DomainError(
        "restricted_eigenvalue_empirical: no valid cone sample generated");
  return best;
}

BoundsReport bounds_report(int d, int s, double c0, double eps0, int s0,
                           double gamma, double t_horizon,
                           const ErgodicConstants& constants) {
  BoundsReport report;
  report.constants = constants;
  report.d = d;
  report.s = s;
  report.c0 = c0;
  report.eps0 = eps0;
  report.s0 = s0;
  report.gamma = gamma;
  report.t_horizon = t_horizon;
  report.lambda_min = lambda_rule(d, t_horizon, eps0, constants);
  report.re_threshold = re_time_threshold(eps0, s, c0, constants, d);
  report.martingale_t_min = martingale_time_threshold(eps0, s, d, constants);
  report.oracle = oracle_bounds(s0, report.lambda_min, gamma, constants);
  for (const double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double scaled = x * constants.k_big;
    report.tail_exponent_curve.emplace_back(scaled,
                                            tail_exponent(scaled, constants));
  }
  return report;
}

}  // namespace oudrift
