#pragma once

#include <vector>

#include "alpc/dense_matrix.hpp"

namespace alpc {

// Thin singular value decomposition a = u * diag(singular_values) * vt with
// k = min(rows, cols) columns in u and rows in vt. Singular values are
// non-negative and sorted non-increasing. The sign of each left singular
// vector is fixed so that its largest-magnitude entry is non-negative, which
// makes the factorization deterministic for a fixed input.
struct SvdFactors {
  DenseMatrix u;
  std::vector<double> singular_values;
  DenseMatrix vt;
};

// c = op(a) * op(b) where op is an optional transposition.
DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b,
                 bool transpose_a = false, bool transpose_b = false);

// Solves a * x = b for symmetric positive definite `a` through a Cholesky
// factorization; no explicit inverse is formed. Throws SingularMatrixError
// with the failing pivot index when a non-positive pivot appears.
DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b);

// One-sided Jacobi SVD, accurate for the small skinny matrices this project
// produces. Throws NumericalError if the sweeps fail to converge.
SvdFactors thin_svd(const DenseMatrix& a);

DenseMatrix transpose(const DenseMatrix& a);
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix scale(const DenseMatrix& a, double s);
void add_to_diagonal(DenseMatrix& a, double value);

double frobenius_norm(const DenseMatrix& a);
// ||a - b||_F^2 without materializing the difference.
double squared_distance(const DenseMatrix& a, const DenseMatrix& b);
double max_abs(const DenseMatrix& a);

}  // namespace alpc
