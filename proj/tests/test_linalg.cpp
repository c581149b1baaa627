#include <catch2/catch_amalgamated.hpp>

#include "gavekit/linalg.hpp"
#include "gavekit/rng.hpp"
#include "test_support.hpp"

using namespace gavekit;
using Catch::Approx;

namespace {

Matrix random_matrix(SplitMix64& rng, Index rows, Index cols) {
  std::vector<double> d(rows * cols);
  for (double& x : d) x = rng.uniform(-2.0, 2.0);
  return Matrix(rows, cols, std::move(d));
}

Vector random_vector(SplitMix64& rng, Index len) {
  std::vector<double> d(len);
  for (double& x : d) x = rng.uniform(-2.0, 2.0);
  return Vector(std::move(d));
}

}  // namespace

TEST_CASE("svd handles identity, symmetric and zero matrices") {
  const SvdResult id = svd(Matrix::identity(2));
  REQUIRE(id.rank() == 2);
  CHECK(id.singular_values[0] == Approx(1.0));
  CHECK(id.singular_values[1] == Approx(1.0));

  const SvdResult sym = svd(Matrix{{3, 1}, {1, 3}});
  REQUIRE(sym.rank() == 2);
  CHECK(sym.singular_values[0] == Approx(4.0));
  CHECK(sym.singular_values[1] == Approx(2.0));

  const SvdResult zero = svd(Matrix(2, 3));
  CHECK(zero.rank() == 0);
  CHECK(zero.singular_values.empty());
}

TEST_CASE("svd factors reproduce the matrix with orthonormal factors") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 1 + rng.next() % 8, n = 1 + rng.next() % 12;
    const Matrix a = random_matrix(rng, m, n);
    const SvdResult s = svd(a);
    const Matrix utu = s.U.transpose() * s.U;
    const Matrix vtv = s.V.transpose() * s.V;
    CHECK((utu - Matrix::identity(s.rank())).max_abs() <= 1e-10);
    CHECK((vtv - Matrix::identity(s.rank())).max_abs() <= 1e-10);
    Matrix recon(m, n);
    for (Index i = 0; i < m; ++i)
      for (Index j = 0; j < n; ++j) {
        double acc = 0;
        for (Index r = 0; r < s.rank(); ++r) acc += s.U(i, r) * s.singular_values[r] * s.V(j, r);
        recon.set(i, j, acc);
      }
    CHECK((recon - a).frobenius_norm() <= 1e-8 * std::max(1.0, a.frobenius_norm()));
    for (Index r = 1; r < s.rank(); ++r) CHECK(s.singular_values[r] <= s.singular_values[r - 1]);
  }
}

TEST_CASE("pinv reproduces the worked pseudoinverse products") {
  const Matrix mb{{0.5, 0.1, 0.1}, {0, 0.1, 0.1}};
  const Vector v = pinv(mb) * Vector{-0.5, -0.25};
  CHECK(testsupport::vec_close(v, {-0.5, -1.25, -1.25}, 1e-9));

  const Matrix b5{{1, 0, 0}, {0, 1, 0}};
  CHECK(testsupport::vec_close(pinv(b5) * Vector{-1, -1}, {-1, -1, 0}, 1e-12));

  const Matrix square{{2, 1}, {1, 3}};
  const Matrix inv = pinv(square);
  CHECK(((square * inv) - Matrix::identity(2)).max_abs() <= 1e-10);
  CHECK(((inv * square) - Matrix::identity(2)).max_abs() <= 1e-10);
}

TEST_CASE("pinv satisfies the Penrose identities on random matrices") {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = 1 + rng.next() % 8, n = 1 + rng.next() % 12;
    Matrix a = random_matrix(rng, m, n);
    if (trial % 4 == 0) {
      // plant rank deficiency: duplicate a row when possible
      if (m >= 2) {
        Matrix dup = a;
        for (Index j = 0; j < n; ++j) dup.set(m - 1, j, dup(0, j));
        a = dup;
      }
    }
    const Matrix p = pinv(a);
    const double scale_a = std::max(1.0, a.frobenius_norm());
    const double scale_p = std::max(1.0, p.frobenius_norm());
    CHECK((a * p * a - a).frobenius_norm() <= 1e-8 * scale_a);
    CHECK((p * a * p - p).frobenius_norm() <= 1e-8 * scale_p);
    const Matrix ap = a * p, pa = p * a;
    CHECK((ap - ap.transpose()).max_abs() <= 1e-8);
    CHECK((pa - pa.transpose()).max_abs() <= 1e-8);
  }
}

TEST_CASE("numerical rank matches the worked examples and transposition") {
  CHECK(numerical_rank(Matrix{{2, 0, 0}, {2, 0, 0}}) == 1);
  CHECK(numerical_rank(Matrix{{-2, -1, -1, 0}, {-2, -1, 1, 0}, {0, 0, 0, -1}}) == 3);
  CHECK(numerical_rank(Matrix(3, 3)) == 0);

  SplitMix64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const Index m = 1 + rng.next() % 6, n = 1 + rng.next() % 8;
    const Matrix a = random_matrix(rng, m, n);
    CHECK(numerical_rank(a) == numerical_rank(a.transpose()));
  }
}

TEST_CASE("operator norms: closed forms, worked values, zero matrix") {
  const Matrix a{{1, 0, 0}, {0, 1, 0}};
  const Matrix b{{-0.5, -0.5, 0}, {0, 0, -0.5}};
  CHECK(op_norm(pinv(a) * b, NormKind::Two) == Approx(0.7071).margin(1e-3));

  const Matrix zero(3, 4);
  for (NormKind p : {NormKind::One, NormKind::Two, NormKind::Inf}) CHECK(op_norm(zero, p) == 0.0);

  const Matrix m{{1, -2}, {3, 4}};
  CHECK(op_norm(m, NormKind::One) == Approx(6.0));   // max column abs sum
  CHECK(op_norm(m, NormKind::Inf) == Approx(7.0));   // max row abs sum
}

TEST_CASE("operator norms dominate matrix-vector products") {
  SplitMix64 rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Index m = 1 + rng.next() % 6, n = 1 + rng.next() % 8;
    const Matrix a = random_matrix(rng, m, n);
    for (NormKind p : {NormKind::One, NormKind::Two, NormKind::Inf}) {
      const double norm = op_norm(a, p);
      for (int k = 0; k < 100; ++k) {
        const Vector x = random_vector(rng, n);
        CHECK(vector_norm(a * x, p) <= norm * vector_norm(x, p) + 1e-9);
      }
    }
    CHECK(op_norm(a, NormKind::Two) <=
          std::sqrt(op_norm(a, NormKind::One) * op_norm(a, NormKind::Inf)) + 1e-9);
  }
}

TEST_CASE("submatrix extraction and index validation") {
  const Matrix a{{3, 1, 1}, {1, 3, 0}};
  const Matrix a1 = submatrix(a, {0, 1}, {0, 1});
  CHECK(a1(0, 0) == 3);
  CHECK(a1(0, 1) == 1);
  CHECK(a1(1, 0) == 1);
  CHECK(a1(1, 1) == 3);

  const Matrix full = submatrix(a, {0, 1}, {0, 1, 2});
  CHECK((full - a).max_abs() == 0.0);

  const Matrix b{{1, 0, 1}, {0, 1, 0}};
  const Matrix b1 = submatrix(b, {0, 1}, {0, 1});
  CHECK((b1 - Matrix::identity(2)).max_abs() == 0.0);

  CHECK_THROWS_AS(submatrix(a, {0, 1}, {0, 5}), InputError);
  CHECK_THROWS_AS(submatrix(a, {0, 0}, {0, 1}), InputError);
}

TEST_CASE("solve_square solves and rejects singular input") {
  CHECK(testsupport::vec_close(solve_square(Matrix{{3, 1}, {1, 3}}, Vector{4, 0}), {1.5, -0.5}, 1e-12));
  CHECK(testsupport::vec_close(solve_square(Matrix::identity(3), Vector{7, -1, 2}), {7, -1, 2}, 0));
  CHECK_THROWS_AS(solve_square(Matrix{{1, 1}, {1, 1}}, Vector{1, 0}), Error);

  SplitMix64 rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = 1 + rng.next() % 6;
    const Matrix a = random_matrix(rng, n, n);
    if (numerical_rank(a) < n) continue;
    const Vector rhs = random_vector(rng, n);
    const Vector x = solve_square(a, rhs);
    CHECK((a * x - rhs).inf_norm() <=
          1e-8 * (op_norm(a, NormKind::Inf) * x.inf_norm() + rhs.inf_norm() + 1.0));
  }
}

TEST_CASE("construction rejects non-finite entries") {
  CHECK_THROWS_AS(Vector({1.0, std::numeric_limits<double>::quiet_NaN()}), InputError);
  CHECK_THROWS_AS(Matrix(1, 2, {1.0, std::numeric_limits<double>::infinity()}), InputError);
}
