#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "oudrift/model.hpp"
#include "oudrift/norms.hpp"
#include "oudrift/rng.hpp"

using namespace oudrift;

namespace {

Matrix random_matrix(int rows, int cols, Rng& rng) {
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m(i, j) = rng.gaussian();
  return m;
}

}  // namespace

TEST_CASE("norms agree with naive double loops") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    Matrix m = random_matrix(1 + trial % 6, 1 + (trial * 3) % 5, rng);
    if (trial % 3 == 0) m(0, 0) = 0.0;  // exercise exact zeros
    CHECK(norm_l1(m) == doctest::Approx(oracle::naive_l1(m)).epsilon(1e-14));
    CHECK(norm_linf(m) == doctest::Approx(oracle::naive_linf(m)).epsilon(1e-14));
    CHECK(norm_fro(m) == doctest::Approx(oracle::naive_fro(m)).epsilon(1e-14));
    CHECK(norm_l0(m) == oracle::naive_l0(m));
  }
}

TEST_CASE("inner_fro is tr(a^T b)") {
  Rng rng(12);
  const Matrix a = random_matrix(3, 4, rng);
  const Matrix b = random_matrix(3, 4, rng);
  CHECK(inner_fro(a, b) ==
        doctest::Approx((a.transpose() * b).trace()).epsilon(1e-14));
}

TEST_CASE("stability certificate: scalar") {
  Matrix a(1, 1);
  a << 0.5;
  const auto cert = check_assumption_h(a);
  CHECK(cert.eigenvalues.size() == 1);
  CHECK(cert.eigenvalues[0].real() == doctest::Approx(0.5));
  CHECK(cert.r0 == doctest::Approx(0.5));
  CHECK(cert.p0 == doctest::Approx(1.0));
  CHECK(cert.diagonalizable);
  CHECK(cert.holds());
}

TEST_CASE("stability certificate: diagonal matrix is its own eigenbasis") {
  const Matrix a = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  const auto cert = check_assumption_h(a);
  CHECK(cert.r0 == doctest::Approx(1.0));
  CHECK(cert.p0 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cert.holds());
}

TEST_CASE("stability certificate: triangular with a negative eigenvalue") {
  Matrix a(2, 2);
  a << 1.0, -2.0, 0.0, -0.5;
  const auto cert = check_assumption_h(a);
  CHECK(cert.r0 == doctest::Approx(-0.5));
  CHECK_FALSE(cert.holds());
}

TEST_CASE("stability certificate: defective matrix fails the cond ceiling") {
  Matrix a(2, 2);
  a << 1.0, 1.0, 0.0, 1.0;  // Jordan block, not diagonalizable
  const auto cert = check_assumption_h(a);
  CHECK_FALSE(cert.diagonalizable);
  CHECK_FALSE(cert.holds());
}

TEST_CASE("stability certificate rejects non-square input") {
  CHECK_THROWS_AS(check_assumption_h(Matrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("lyapunov: scalar and diagonal closed forms") {
  Matrix a(1, 1);
  a << 0.5;
  CHECK(solve_lyapunov(a)(0, 0) == doctest::Approx(1.0).epsilon(1e-12));

  Matrix d2 = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  const Matrix c = solve_lyapunov(d2);
  CHECK(c(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(c(1, 1) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(c(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("lyapunov matches the quadrature of the defining integral") {
  Matrix a(2, 2);
  a << 1.0, 0.3, 0.0, 2.0;
  const Matrix c = solve_lyapunov(a);
  CHECK(norm_linf(a * c + c * a.transpose() - Matrix::Identity(2, 2)) <
        1e-10);
  const Matrix c_quad = oracle::quad_stationary_covariance(a, 1e-8);
  CHECK(norm_linf(c - c_quad) < 1e-6);

  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const int d = 2 + static_cast<int>(seed % 3);
    const ModelSpec model = generate_sparse_stable(d, d + 2, 0.4, seed);
    const Matrix cs = solve_lyapunov(model.a0);
    CHECK(norm_linf(cs - oracle::quad_stationary_covariance(model.a0, 1e-8)) <
          1e-6);
  }
}

TEST_CASE("lyapunov refuses an unstable drift") {
  Matrix a(1, 1);
  a << -1.0;
  CHECK_THROWS_AS(solve_lyapunov(a), DomainError);
}

TEST_CASE("lyapunov residual contract over generated models") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const int d = 2 + static_cast<int>(seed * 2);
    const int s = d + static_cast<int>(seed);
    const ModelSpec model = generate_sparse_stable(d, s, 0.3, seed + 100);
    const Matrix c = solve_lyapunov(model.a0);
    CHECK(norm_linf(model.a0 * c + c * model.a0.transpose() -
                    Matrix::Identity(d, d)) <= 1e-10 * d);
    CHECK(norm_linf(c - c.transpose()) <= 1e-10);
  }
}

TEST_CASE("ergodic constants: scalar and diagonal") {
  Matrix a(1, 1);
  a << 0.5;
  const auto c = ergodic_constants(a);
  CHECK(c.r0 == doctest::Approx(0.5));
  CHECK(c.p0 == doctest::Approx(1.0));
  CHECK(c.k_big == doctest::Approx(1.0));
  CHECK(c.k_small == doctest::Approx(1.0));
  CHECK(c.m_small == doctest::Approx(1.0));
  CHECK(c.m_big == doctest::Approx(1.0));

  const Matrix d2 = Eigen::Vector2d(1.0, 2.0).asDiagonal();
  const auto cd = ergodic_constants(d2);
  CHECK(cd.k_big == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cd.k_small == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(cd.m_small == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(cd.m_big == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("ergodic constants on diag(theta): 1/(2 min), 1/(2 max), p0 = 1") {
  Eigen::Vector4d theta(0.3, 1.1, 2.7, 0.9);
  const Matrix a = theta.asDiagonal();
  const auto c = ergodic_constants(a);
  CHECK(c.k_big == doctest::Approx(1.0 / (2.0 * 0.3)).epsilon(1e-12));
  CHECK(c.k_small == doctest::Approx(1.0 / (2.0 * 2.7)).epsilon(1e-12));
  CHECK(c.p0 == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ergodic constants agree with an independent eigensolver path") {
  const ModelSpec model = generate_sparse_stable(5, 8, 0.5, 7);
  const auto c = ergodic_constants(model.a0);

  // r0 through the complex Schur route
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(model.a0.cast<std::complex<double>>());
  REQUIRE(ces.info() == Eigen::Success);
  CHECK(c.r0 ==
        doctest::Approx(ces.eigenvalues().real().minCoeff()).epsilon(1e-8));

  // extreme eigenvalues of the covariance through cyclic Jacobi
  const auto eigs = oracle::jacobi_eigenvalues(c.c_inf);
  CHECK(c.k_small == doctest::Approx(eigs.front()).epsilon(1e-8));
  CHECK(c.k_big == doctest::Approx(eigs.back()).epsilon(1e-8));

  // sup norms through naive loops
  CHECK(c.m_big == doctest::Approx(oracle::naive_linf(c.c_inf)).epsilon(1e-12));
  double diag_max = 0.0;
  for (int i = 0; i < model.d; ++i)
    diag_max = std::max(diag_max, std::abs(c.c_inf(i, i)));
  CHECK(c.m_small == doctest::Approx(diag_max).epsilon(1e-12));

  // p0 through the divide-and-conquer SVD route
  Eigen::EigenSolver<Matrix> es(model.a0);
  Eigen::MatrixXcd p = es.eigenvectors();
  for (Eigen::Index j = 0; j < p.cols(); ++j) p.col(j) /= p.col(j).norm();
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(p);
  const double cond = svd.singularValues()(0) /
                      svd.singularValues()(svd.singularValues().size() - 1);
  CHECK(c.p0 == doctest::Approx(cond).epsilon(1e-8));

  // interlacing sanity from the type contract
  CHECK(c.k_small <= c.k_big);
  CHECK(c.m_small <= c.m_big + 1e-15);
  CHECK(c.m_small <= c.k_big + 1e-15);
  CHECK(c.k_small <= c.m_small * model.d + 1e-15);
}

TEST_CASE("generate_sparse_stable: degenerate and small cases") {
  const ModelSpec m1 = generate_sparse_stable(1, 1, 0.5, 0);
  CHECK(m1.a0(0, 0) == doctest::Approx(0.5));
  CHECK(m1.s0 == 1);

  const ModelSpec m2 = generate_sparse_stable(5, 8, 0.5, 1);
  CHECK(m2.s0 == 8);
  CHECK(norm_l0(m2.a0) == 8);
  const auto cert = check_assumption_h(m2.a0);
  CHECK(cert.r0 >= 0.5 - 1e-9);
}

TEST_CASE("generate_sparse_stable: determinism") {
  const ModelSpec a = generate_sparse_stable(6, 12, 0.25, 42);
  const ModelSpec b = generate_sparse_stable(6, 12, 0.25, 42);
  CHECK(a.a0 == b.a0);
  const ModelSpec c = generate_sparse_stable(6, 12, 0.25, 43);
  CHECK(a.a0 != c.a0);
}

TEST_CASE("generate_sparse_stable: argument validation") {
  CHECK_THROWS_AS(generate_sparse_stable(3, 2, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_sparse_stable(2, 5, 0.5, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_sparse_stable(2, 3, 0.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_sparse_stable(0, 0, 0.5, 0), std::invalid_argument);
}

TEST_CASE("generated models: Gershgorin margin holds over seeds") {
  Rng rng(77);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng.below(8));
    const int extra = static_cast<int>(rng.below(static_cast<std::uint64_t>(d * (d - 1) + 1)));
    const double margin = 0.1 + rng.uniform();
    const ModelSpec model = generate_sparse_stable(d, d + extra, margin, rng.next_u64());
    CHECK(model.s0 == d + extra);
    CHECK(check_assumption_h(model.a0).r0 >= margin - 1e-9);
    for (int k = 0; k < d * d; ++k) {
      const double entry = model.a0(k / d, k % d);
      if (k / d != k % d && entry != 0.0) CHECK(std::abs(entry) >= 0.1);
    }
  }
}
