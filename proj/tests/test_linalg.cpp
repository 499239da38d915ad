#include <doctest.h>

#include <cmath>
#include <vector>

#include "alpc/errors.hpp"
#include "alpc/linalg.hpp"
#include "alpc/rng.hpp"
#include "oracles.hpp"

using alpc::DenseMatrix;
using oracles::frob2;
using oracles::max_abs_diff;
using oracles::naive_gemm;
using oracles::random_matrix;
using oracles::random_orthonormal;

namespace {

double reconstruction_error(const alpc::SvdFactors& f, const DenseMatrix& a) {
  DenseMatrix usvt(f.u.rows(), f.vt.cols());
  for (std::size_t i = 0; i < f.u.rows(); ++i)
    for (std::size_t j = 0; j < f.vt.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < f.singular_values.size(); ++k)
        s += f.u(i, k) * f.singular_values[k] * f.vt(k, j);
      usvt(i, j) = s;
    }
  const double denom = std::max(std::sqrt(frob2(a)), 1e-300);
  return std::sqrt(oracles::frob2_diff(usvt, a)) / denom;
}

double orthonormality_defect(const DenseMatrix& u) {
  double worst = 0.0;
  for (std::size_t i = 0; i < u.cols(); ++i) {
    for (std::size_t j = 0; j < u.cols(); ++j) {
      double dot = 0.0;
      for (std::size_t r = 0; r < u.rows(); ++r) dot += u(r, i) * u(r, j);
      worst = std::max(worst, std::abs(dot - (i == j ? 1.0 : 0.0)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("matrix construction validates size and finiteness") {
  CHECK_THROWS_AS(DenseMatrix(2, 2, {1.0, 2.0, 3.0}), alpc::ShapeError);
  CHECK_THROWS_AS(DenseMatrix(1, 2, {1.0, std::nan("")}), alpc::ArgumentError);
  const DenseMatrix m(2, 3);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 3);
  for (double x : m.entries()) CHECK(x == 0.0);
}

TEST_CASE("gemm identity and annihilator") {
  alpc::Rng rng(11);
  const DenseMatrix a = random_matrix(rng, 3, 4);
  const DenseMatrix left = alpc::gemm(DenseMatrix::identity(3), a);
  CHECK(max_abs_diff(left, a) == 0.0);
  const DenseMatrix zero(4, 2);
  const DenseMatrix prod = alpc::gemm(a, zero);
  CHECK(oracles::frob2(prod) == 0.0);
}

TEST_CASE("gemm matches the naive triple loop") {
  alpc::Rng rng(12);
  const DenseMatrix a = random_matrix(rng, 4, 3);
  const DenseMatrix b = random_matrix(rng, 3, 2);
  CHECK(max_abs_diff(alpc::gemm(a, b), naive_gemm(a, b)) <= 1e-12);

  // all four transpose variants against the same oracle
  const DenseMatrix at = oracles::naive_transpose(a);
  const DenseMatrix bt = oracles::naive_transpose(b);
  CHECK(max_abs_diff(alpc::gemm(at, b, true, false), naive_gemm(a, b)) <= 1e-12);
  CHECK(max_abs_diff(alpc::gemm(a, bt, false, true), naive_gemm(a, b)) <= 1e-12);
  CHECK(max_abs_diff(alpc::gemm(at, bt, true, true), naive_gemm(a, b)) <= 1e-12);
}

TEST_CASE("gemm rejects mismatched inner dimensions") {
  const DenseMatrix a(4, 3);
  const DenseMatrix b(4, 2);
  CHECK_THROWS_WITH_AS(alpc::gemm(a, b), doctest::Contains("4x3"), alpc::ShapeError);
  CHECK_THROWS_WITH_AS(alpc::gemm(a, b), doctest::Contains("4x2"), alpc::ShapeError);
}

TEST_CASE("gemm is associative on random triples") {
  alpc::Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = random_matrix(rng, 4, 6);
    const DenseMatrix b = random_matrix(rng, 6, 5);
    const DenseMatrix c = random_matrix(rng, 5, 3);
    const DenseMatrix left = alpc::gemm(alpc::gemm(a, b), c);
    const DenseMatrix right = alpc::gemm(a, alpc::gemm(b, c));
    const double scale = std::sqrt(frob2(left));
    CHECK(std::sqrt(oracles::frob2_diff(left, right)) <= 1e-10 * (1.0 + scale));
  }
}

TEST_CASE("spd_solve identity and diagonal") {
  const DenseMatrix b(2, 1, {2.0, 8.0});
  const DenseMatrix x_id = alpc::spd_solve(DenseMatrix::identity(2), b);
  CHECK(max_abs_diff(x_id, b) == 0.0);

  const DenseMatrix diag(2, 2, {2.0, 0.0, 0.0, 4.0});
  const DenseMatrix x = alpc::spd_solve(diag, b);
  CHECK(x(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(x(1, 0) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("spd_solve residual on random Gram systems") {
  alpc::Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix g = random_matrix(rng, 8, 6);
    DenseMatrix a = alpc::gemm(g, g, true, false);
    alpc::add_to_diagonal(a, 1.0);
    const DenseMatrix b = random_matrix(rng, 6, 3);
    const DenseMatrix x = alpc::spd_solve(a, b);
    const DenseMatrix residual = alpc::subtract(alpc::gemm(a, x), b);
    CHECK(alpc::frobenius_norm(residual) <= 1e-10 * alpc::frobenius_norm(b));
  }
}

TEST_CASE("spd_solve round-trips across condition numbers up to 1e6") {
  alpc::Rng rng(22);
  for (int trial = 0; trial < 6; ++trial) {
    const std::size_t p = 7;
    const DenseMatrix q = random_orthonormal(rng, p, p);
    DenseMatrix a(p, p);
    // spectrum log-spaced from 1 down to 1e-6
    for (std::size_t k = 0; k < p; ++k) {
      const double eig = std::pow(10.0, -6.0 * static_cast<double>(k) / (p - 1));
      for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < p; ++j) a(i, j) += eig * q(i, k) * q(j, k);
    }
    // exact symmetrization; the outer-product sum is symmetric only to roundoff
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) {
        const double avg = 0.5 * (a(i, j) + a(j, i));
        a(i, j) = avg;
        a(j, i) = avg;
      }
    const DenseMatrix b = random_matrix(rng, p, 2);
    const DenseMatrix x = alpc::spd_solve(a, b);
    const DenseMatrix back = alpc::gemm(a, x);
    CHECK(std::sqrt(oracles::frob2_diff(back, b)) <= 1e-8 * alpc::frobenius_norm(b));
  }
}

TEST_CASE("spd_solve reports the failing pivot") {
  // indefinite: second pivot goes negative
  const DenseMatrix a(2, 2, {1.0, 2.0, 2.0, 1.0});
  const DenseMatrix b(2, 1, {1.0, 1.0});
  try {
    alpc::spd_solve(a, b);
    FAIL("expected SingularMatrixError");
  } catch (const alpc::SingularMatrixError& e) {
    CHECK(e.pivot_index() == 1);
  }
}

TEST_CASE("spd_solve rejects asymmetric input") {
  const DenseMatrix a(2, 2, {1.0, 0.5, 0.0, 1.0});
  const DenseMatrix b(2, 1, {1.0, 1.0});
  CHECK_THROWS_AS(alpc::spd_solve(a, b), alpc::ArgumentError);
}

TEST_CASE("thin_svd identity") {
  const auto f = alpc::thin_svd(DenseMatrix::identity(3));
  REQUIRE(f.singular_values.size() == 3);
  for (double s : f.singular_values) CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("thin_svd of diag(3, -2)") {
  const DenseMatrix a(2, 2, {3.0, 0.0, 0.0, -2.0});
  const auto f = alpc::thin_svd(a);
  CHECK(f.singular_values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(f.singular_values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(reconstruction_error(f, a) <= 1e-12);
  // sign convention: largest-magnitude entry of each left vector non-negative
  for (std::size_t j = 0; j < 2; ++j) {
    double best = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      if (std::abs(f.u(i, j)) > std::abs(best)) best = f.u(i, j);
    CHECK(best >= 0.0);
  }
}

TEST_CASE("thin_svd reconstruction and orthogonality on random input") {
  alpc::Rng rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const DenseMatrix a = random_matrix(rng, 5, 3);
    const auto f = alpc::thin_svd(a);
    CHECK(reconstruction_error(f, a) <= 1e-10);
    CHECK(orthonormality_defect(f.u) <= 1e-10);
    CHECK(orthonormality_defect(oracles::naive_transpose(f.vt)) <= 1e-10);
    CHECK(std::is_sorted(f.singular_values.rbegin(), f.singular_values.rend()));
    for (double s : f.singular_values) CHECK(s >= 0.0);
  }
}

TEST_CASE("thin_svd handles wide and rank-deficient matrices") {
  alpc::Rng rng(32);
  const DenseMatrix wide = random_matrix(rng, 3, 5);
  const auto f = alpc::thin_svd(wide);
  CHECK(f.u.rows() == 3);
  CHECK(f.u.cols() == 3);
  CHECK(f.vt.rows() == 3);
  CHECK(f.vt.cols() == 5);
  CHECK(reconstruction_error(f, wide) <= 1e-10);
  CHECK(orthonormality_defect(f.u) <= 1e-10);

  // rank-1 tall matrix: the orthonormal completion must fill the null columns
  DenseMatrix rank1(4, 3);
  for (std::size_t i = 0; i < 4; ++i) rank1(i, 0) = 1.0 + static_cast<double>(i);
  const auto g = alpc::thin_svd(rank1);
  CHECK(g.singular_values[1] <= 1e-12);
  CHECK(orthonormality_defect(g.u) <= 1e-10);
  CHECK(reconstruction_error(g, rank1) <= 1e-10);

  const auto zero = alpc::thin_svd(DenseMatrix(3, 2));
  CHECK(zero.singular_values[0] == 0.0);
  CHECK(orthonormality_defect(zero.u) <= 1e-12);
}

TEST_CASE("thin_svd settles on noise-rank inputs") {
  // a wide matrix of rank 2 plus duplicated columns: the null directions are
  // pure rotation roundoff and must not keep the sweeps cycling
  alpc::Rng rng(36);
  const DenseMatrix base = random_matrix(rng, 8, 2);
  DenseMatrix a(8, 9);
  for (std::size_t j = 0; j < 9; ++j) {
    const double w0 = rng.uniform(-1.0, 1.0), w1 = rng.uniform(-1.0, 1.0);
    for (std::size_t i = 0; i < 8; ++i) a(i, j) = w0 * base(i, 0) + w1 * base(i, 1);
  }
  const auto f = alpc::thin_svd(a);
  CHECK(orthonormality_defect(f.u) <= 1e-10);
  CHECK(reconstruction_error(f, a) <= 1e-10);
  for (std::size_t k = 2; k < f.singular_values.size(); ++k)
    CHECK(f.singular_values[k] <= 1e-10 * f.singular_values[0]);
}

TEST_CASE("thin_svd is deterministic") {
  alpc::Rng rng(33);
  const DenseMatrix a = random_matrix(rng, 6, 4);
  const auto f1 = alpc::thin_svd(a);
  const auto f2 = alpc::thin_svd(a);
  CHECK(f1.u.entries() == f2.u.entries());
  CHECK(f1.vt.entries() == f2.vt.entries());
  CHECK(f1.singular_values == f2.singular_values);
}

TEST_CASE("singular values are invariant under orthonormal factors") {
  alpc::Rng rng(34);
  for (int trial = 0; trial < 5; ++trial) {
    const DenseMatrix a = random_matrix(rng, 5, 4);
    const DenseMatrix q = random_orthonormal(rng, 5, 5);
    const DenseMatrix w = random_orthonormal(rng, 4, 4);
    const auto base = alpc::thin_svd(a);
    const auto rotated = alpc::thin_svd(alpc::gemm(alpc::gemm(q, a), w));
    for (std::size_t k = 0; k < base.singular_values.size(); ++k) {
      CHECK(rotated.singular_values[k] ==
            doctest::Approx(base.singular_values[k]).epsilon(1e-10));
    }
  }
}
