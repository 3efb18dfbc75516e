// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "contactdd/linalg.hpp"

using namespace cdd;

TEST_CASE("solve_sparse handles identity and diagonal systems", "[linalg]") {
  SparseBuilder b(3, 3);
  for (int i = 0; i < 3; ++i) b.add(i, i, 1.0);
  Vec rhs(3);
  rhs << 1, 2, 3;
  Vec x = solve_sparse(b.finalize(), rhs);
  REQUIRE((x - rhs).norm() == Catch::Approx(0.0).margin(1e-14));

  SparseBuilder d(2, 2);
  d.add(0, 0, 2.0);
  d.add(1, 1, 4.0);
  Vec rhs2(2);
  rhs2 << 2, 4;
  Vec x2 = solve_sparse(d.finalize(), rhs2);
  REQUIRE(x2(0) == Catch::Approx(1.0));
  REQUIRE(x2(1) == Catch::Approx(1.0));
}

TEST_CASE("solve_sparse meets the residual contract on a random SPD system", "[linalg]") {
  std::mt19937 rng(42);
  std::normal_distribution<double> dist;
  Mat M(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) M(i, j) = dist(rng);
  Mat A = M.transpose() * M + Mat::Identity(20, 20);
  Vec rhs(20);
  for (int i = 0; i < 20; ++i) rhs(i) = dist(rng);

  SparseBuilder b(20, 20);
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) b.add(i, j, A(i, j));
  SpMat As = b.finalize();
  Vec x = solve_sparse(As, rhs);
  REQUIRE((As * x - rhs).norm() <= 1e-10 * rhs.norm());
}

TEST_CASE("solve_sparse reports singular matrices", "[linalg]") {
  SparseBuilder b(2, 2);
  b.add(0, 0, 1.0);
  b.add(0, 1, 1.0);
  b.add(1, 0, 1.0);
  b.add(1, 1, 1.0);
  Vec rhs(2);
  rhs << 1, 0;
  REQUIRE_THROWS_AS(solve_sparse(b.finalize(), rhs), SingularMatrix);
}

TEST_CASE("duplicate triplets are summed on finalize", "[linalg]") {
  SparseBuilder b(2, 2);
  b.add(0, 0, 1.0);
  b.add(0, 0, 2.0);
  b.add(1, 1, 1.0);
  SpMat m = b.finalize();
  REQUIRE(m.coeff(0, 0) == Catch::Approx(3.0));
}

TEST_CASE("generalized_sym_eig solves hand-checked pencils", "[linalg]") {
  Mat A = Mat::Zero(2, 2), B = Mat::Identity(2, 2);
  A(1, 1) = 2.0;
  auto eig = generalized_sym_eig(A, B);
  REQUIRE(eig.values(0) == Catch::Approx(0.0).margin(1e-13));
  REQUIRE(eig.values(1) == Catch::Approx(2.0));

  Mat A2 = Mat::Zero(2, 2), B2 = Mat::Zero(2, 2);
  A2.diagonal() << 4, 1;
  B2.diagonal() << 2, 1;
  auto eig2 = generalized_sym_eig(A2, B2);
  REQUIRE(eig2.values(0) == Catch::Approx(1.0));
  REQUIRE(eig2.values(1) == Catch::Approx(2.0));

  auto eig3 = generalized_sym_eig(Mat::Zero(5, 5), Mat::Identity(5, 5));
  REQUIRE(eig3.values.cwiseAbs().maxCoeff() <= 1e-13);
}

TEST_CASE("generalized_sym_eig returns B-orthonormal vectors with small residuals", "[linalg]") {
  std::mt19937 rng(7);
  std::normal_distribution<double> dist;
  const int n = 12;
  Mat M(n, n), N(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      M(i, j) = dist(rng);
      N(i, j) = dist(rng);
    }
  Mat A = M.transpose() * M;                          // sym PSD
  Mat B = N.transpose() * N + Mat::Identity(n, n);    // SPD
  auto eig = generalized_sym_eig(A, B);

  Mat G = eig.vectors.transpose() * B * eig.vectors;
  REQUIRE((G - Mat::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-10);
  for (int j = 1; j < n; ++j) REQUIRE(eig.values(j) >= eig.values(j - 1) - 1e-12);
  const double scale = A.cwiseAbs().maxCoeff();
  for (int j = 0; j < n; ++j) {
    Vec r = A * eig.vectors.col(j) - eig.values(j) * (B * eig.vectors.col(j));
    REQUIRE(r.norm() <= 1e-8 * scale);
  }
}

TEST_CASE("generalized_sym_eig rejects indefinite B", "[linalg]") {
  Mat A = Mat::Identity(2, 2), B = Mat::Identity(2, 2);
  B(1, 1) = -1.0;
  REQUIRE_THROWS_AS(generalized_sym_eig(A, B), NotPositiveDefinite);
}

TEST_CASE("dot_weighted evaluates u^T M v", "[linalg]") {
  SparseBuilder b(2, 2);
  b.add(0, 0, 1.0);
  b.add(1, 1, 1.0);
  SpMat I = b.finalize();
  Vec u(2), v(2);
  u << 1, 0;
  v << 1, 0;
  REQUIRE(dot_weighted(u, v, I) == Catch::Approx(1.0));
  u << 1, 1;
  v << 1, -1;
  REQUIRE(dot_weighted(u, v, I) == Catch::Approx(0.0).margin(1e-15));

  SparseBuilder d(2, 2);
  d.add(0, 0, 1.0);
  d.add(1, 1, 2.0);
  u << 2, 3;
  v << 1, 1;
  REQUIRE(dot_weighted(u, v, d.finalize()) == Catch::Approx(8.0));

  Vec w(3);
  REQUIRE_THROWS_AS(dot_weighted(w, v, I), DimensionMismatch);
}
