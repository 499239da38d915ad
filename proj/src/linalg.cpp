#include "alpc/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "alpc/errors.hpp"

namespace alpc {

namespace {

std::string shape_of(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

double dot(const double* a, const double* b, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

DenseMatrix transpose(const DenseMatrix& a) {
  std::vector<double> out(a.rows() * a.cols());
  for (std::size_t j = 0; j < a.cols(); ++j)
    for (std::size_t i = 0; i < a.rows(); ++i)
      out[i * a.cols() + j] = a(i, j);
  return DenseMatrix(a.cols(), a.rows(), std::move(out));
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.has_same_shape(b))
    throw ShapeError("add: shapes differ: " + shape_of(a) + " vs " + shape_of(b));
  std::vector<double> out(a.entries());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.entries()[i];
  return DenseMatrix(a.rows(), a.cols(), std::move(out));
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.has_same_shape(b))
    throw ShapeError("subtract: shapes differ: " + shape_of(a) + " vs " + shape_of(b));
  std::vector<double> out(a.entries());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.entries()[i];
  return DenseMatrix(a.rows(), a.cols(), std::move(out));
}

DenseMatrix scale(const DenseMatrix& a, double s) {
  std::vector<double> out(a.entries());
  for (double& x : out) x *= s;
  return DenseMatrix(a.rows(), a.cols(), std::move(out));
}

void add_to_diagonal(DenseMatrix& a, double value) {
  const std::size_t k = std::min(a.rows(), a.cols());
  for (std::size_t i = 0; i < k; ++i) a(i, i) += value;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double x : a.entries()) s += x * x;
  return std::sqrt(s);
}

double squared_distance(const DenseMatrix& a, const DenseMatrix& b) {
  if (!a.has_same_shape(b))
    throw ShapeError("squared_distance: shapes differ: " + shape_of(a) + " vs " + shape_of(b));
  double s = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i) {
    const double d = a.entries()[i] - b.entries()[i];
    s += d * d;
  }
  return s;
}

double max_abs(const DenseMatrix& a) {
  double m = 0.0;
  for (double x : a.entries()) m = std::max(m, std::abs(x));
  return m;
}

DenseMatrix gemm(const DenseMatrix& a, const DenseMatrix& b, bool transpose_a, bool transpose_b) {
  const std::size_t ar = transpose_a ? a.cols() : a.rows();
  const std::size_t ac = transpose_a ? a.rows() : a.cols();
  const std::size_t br = transpose_b ? b.cols() : b.rows();
  const std::size_t bc = transpose_b ? b.rows() : b.cols();
  if (ac != br) {
    throw ShapeError("gemm: inner dimensions disagree: " + shape_of(a) +
                     (transpose_a ? "^T" : "") + " * " + shape_of(b) +
                     (transpose_b ? "^T" : ""));
  }
  std::vector<double> out(ar * bc, 0.0);
  if (!transpose_a && !transpose_b) {
    // c[:,j] += a[:,k] * b(k,j): unit-stride columns throughout
    for (std::size_t j = 0; j < bc; ++j) {
      double* cj = out.data() + j * ar;
      for (std::size_t k = 0; k < ac; ++k) {
        const double w = b(k, j);
        if (w == 0.0) continue;
        const double* akcol = a.col(k);
        for (std::size_t i = 0; i < ar; ++i) cj[i] += akcol[i] * w;
      }
    }
  } else if (transpose_a && !transpose_b) {
    // c(i,j) = <a col i, b col j>
    for (std::size_t j = 0; j < bc; ++j) {
      double* cj = out.data() + j * ar;
      const double* bj = b.col(j);
      for (std::size_t i = 0; i < ar; ++i) cj[i] = dot(a.col(i), bj, a.rows());
    }
  } else if (!transpose_a && transpose_b) {
    // c[:,j] += a[:,k] * b(j,k)
    for (std::size_t k = 0; k < ac; ++k) {
      const double* akcol = a.col(k);
      for (std::size_t j = 0; j < bc; ++j) {
        const double w = b(j, k);
        if (w == 0.0) continue;
        double* cj = out.data() + j * ar;
        for (std::size_t i = 0; i < ar; ++i) cj[i] += akcol[i] * w;
      }
    }
  } else {
    // c(i,j) = sum_k a(k,i) * b(j,k)
    for (std::size_t j = 0; j < bc; ++j) {
      double* cj = out.data() + j * ar;
      for (std::size_t i = 0; i < ar; ++i) {
        const double* aicol = a.col(i);
        double s = 0.0;
        for (std::size_t k = 0; k < ac; ++k) s += aicol[k] * b(j, k);
        cj[i] = s;
      }
    }
  }
  return DenseMatrix(ar, bc, std::move(out));
}

DenseMatrix spd_solve(const DenseMatrix& a, const DenseMatrix& b) {
  const std::size_t p = a.rows();
  if (a.cols() != p)
    throw ShapeError("spd_solve: matrix is not square: " + shape_of(a));
  if (b.rows() != p)
    throw ShapeError("spd_solve: right-hand side rows disagree: " + shape_of(a) +
                     " vs " + shape_of(b));

  const double sym_tol = 1e-8 * std::max(1.0, max_abs(a));
  for (std::size_t j = 0; j < p; ++j)
    for (std::size_t i = j + 1; i < p; ++i)
      if (std::abs(a(i, j) - a(j, i)) > sym_tol)
        throw ArgumentError("spd_solve: matrix is not symmetric at (" +
                            std::to_string(i) + ", " + std::to_string(j) + ")");

  // In-place lower Cholesky factor, column by column.
  std::vector<double> l(a.entries());
  auto lv = [&](std::size_t i, std::size_t j) -> double& { return l[j * p + i]; };
  for (std::size_t j = 0; j < p; ++j) {
    double d = lv(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lv(j, k) * lv(j, k);
    if (!(d > 0.0)) {
      throw SingularMatrixError(j, "spd_solve: non-positive pivot " + std::to_string(d) +
                                       " at index " + std::to_string(j));
    }
    const double ljj = std::sqrt(d);
    lv(j, j) = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double s = lv(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lv(i, k) * lv(j, k);
      lv(i, j) = s / ljj;
    }
  }

  // Forward and back substitution per right-hand-side column.
  std::vector<double> x(b.entries());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    double* xc = x.data() + col * p;
    for (std::size_t i = 0; i < p; ++i) {
      double s = xc[i];
      for (std::size_t k = 0; k < i; ++k) s -= lv(i, k) * xc[k];
      xc[i] = s / lv(i, i);
    }
    for (std::size_t ii = p; ii-- > 0;) {
      double s = xc[ii];
      for (std::size_t k = ii + 1; k < p; ++k) s -= lv(k, ii) * xc[k];
      xc[ii] = s / lv(ii, ii);
    }
  }
  return DenseMatrix(p, b.cols(), std::move(x));
}

namespace {

constexpr int kMaxJacobiSweeps = 60;
constexpr double kJacobiTol = 1e-14;
// Columns below this fraction of the largest column norm carry only rotation
// roundoff; pairing two of them never settles, so they are left alone and
// reported as zero singular values.
constexpr double kNegligibleColumn = 1e-14;

// One-sided Jacobi on the columns of w (p x q, p >= q): rotates column pairs
// until all are mutually orthogonal, accumulating the rotations in v (q x q),
// so that input = w_final * v^T.
void jacobi_orthogonalize(DenseMatrix& w, DenseMatrix& v) {
  const std::size_t p = w.rows();
  const std::size_t q = w.cols();
  for (int sweep = 0; sweep < kMaxJacobiSweeps; ++sweep) {
    double scale2 = 0.0;  // largest squared column norm this sweep
    for (std::size_t j = 0; j < q; ++j)
      scale2 = std::max(scale2, dot(w.col(j), w.col(j), p));
    const double floor2 = scale2 * kNegligibleColumn * kNegligibleColumn;

    double worst = 0.0;
    for (std::size_t i = 0; i + 1 < q; ++i) {
      for (std::size_t j = i + 1; j < q; ++j) {
        double* wi = w.col(i);
        double* wj = w.col(j);
        const double alpha = dot(wi, wi, p);
        const double beta = dot(wj, wj, p);
        if (alpha <= floor2 || beta <= floor2) continue;
        const double gamma = dot(wi, wj, p);
        const double denom = std::sqrt(alpha * beta);
        const double off = std::abs(gamma) / denom;
        worst = std::max(worst, off);
        if (off <= kJacobiTol) continue;
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = std::copysign(1.0, zeta) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double cs = 1.0 / std::sqrt(1.0 + t * t);
        const double sn = cs * t;
        for (std::size_t r = 0; r < p; ++r) {
          const double x = wi[r];
          const double y = wj[r];
          wi[r] = cs * x - sn * y;
          wj[r] = sn * x + cs * y;
        }
        double* vi = v.col(i);
        double* vj = v.col(j);
        for (std::size_t r = 0; r < q; ++r) {
          const double x = vi[r];
          const double y = vj[r];
          vi[r] = cs * x - sn * y;
          vj[r] = sn * x + cs * y;
        }
      }
    }
    if (worst <= kJacobiTol) return;
  }
  throw NumericalError("thin_svd: Jacobi sweeps did not converge within " +
                       std::to_string(kMaxJacobiSweeps) + " sweeps");
}

// Fills any zero-norm columns of u (positions `holes`) with unit vectors
// orthogonal to all other columns, chosen deterministically from coordinate
// directions.
void complete_orthonormal_columns(DenseMatrix& u, const std::vector<std::size_t>& holes) {
  const std::size_t p = u.rows();
  const std::size_t q = u.cols();
  for (std::size_t hole : holes) {
    double best_norm = -1.0;
    std::vector<double> best_res;
    std::vector<double> res(p);
    for (std::size_t t = 0; t < p; ++t) {
      std::fill(res.begin(), res.end(), 0.0);
      res[t] = 1.0;
      for (std::size_t j = 0; j < q; ++j) {
        if (j == hole) continue;
        const double* uj = u.col(j);
        const double proj = uj[t];  // <e_t, u_j>
        for (std::size_t r = 0; r < p; ++r) res[r] -= proj * uj[r];
      }
      const double nrm = std::sqrt(dot(res.data(), res.data(), p));
      if (nrm > best_norm) {
        best_norm = nrm;
        best_res = res;
      }
    }
    for (std::size_t r = 0; r < p; ++r) u(r, hole) = best_res[r] / best_norm;
  }
}

// Core decomposition for p >= q; returns unsorted factors with u completed
// on zero singular values. Sign normalization happens in the wrapper.
void svd_tall(const DenseMatrix& a, DenseMatrix& u, std::vector<double>& sigma, DenseMatrix& vt) {
  const std::size_t p = a.rows();
  const std::size_t q = a.cols();
  DenseMatrix w = a;
  DenseMatrix v = DenseMatrix::identity(q);
  jacobi_orthogonalize(w, v);

  sigma.assign(q, 0.0);
  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), 0);
  for (std::size_t j = 0; j < q; ++j) sigma[j] = std::sqrt(dot(w.col(j), w.col(j), p));
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sigma[x] > sigma[y]; });

  // rotation roundoff floor: such columns have no usable direction
  const double sigma_floor = sigma[order[0]] * kNegligibleColumn;

  std::vector<double> sorted_sigma(q);
  std::vector<double> u_entries(p * q, 0.0);
  std::vector<double> vt_entries(q * q, 0.0);
  std::vector<std::size_t> holes;
  for (std::size_t j = 0; j < q; ++j) {
    const std::size_t src = order[j];
    if (sigma[src] > sigma_floor && sigma[src] > 0.0) {
      sorted_sigma[j] = sigma[src];
      const double inv = 1.0 / sigma[src];
      const double* wc = w.col(src);
      for (std::size_t r = 0; r < p; ++r) u_entries[j * p + r] = wc[r] * inv;
    } else {
      sorted_sigma[j] = 0.0;
      holes.push_back(j);
    }
    // row j of vt is column `src` of v
    for (std::size_t r = 0; r < q; ++r) vt_entries[r * q + j] = v(r, src);
  }
  u = DenseMatrix(p, q, std::move(u_entries));
  vt = DenseMatrix(q, q, std::move(vt_entries));
  sigma = std::move(sorted_sigma);
  if (!holes.empty()) complete_orthonormal_columns(u, holes);
}

}  // namespace

SvdFactors thin_svd(const DenseMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0)
    throw ShapeError("thin_svd: empty matrix " + shape_of(a));

  SvdFactors f;
  if (a.rows() >= a.cols()) {
    svd_tall(a, f.u, f.singular_values, f.vt);
  } else {
    // a = (u' s v'^T)^T of the transpose: swap the roles of the factors.
    DenseMatrix ut, vtt;
    std::vector<double> sigma;
    svd_tall(transpose(a), ut, sigma, vtt);
    f.u = transpose(vtt);
    f.vt = transpose(ut);
    f.singular_values = std::move(sigma);
  }

  // Deterministic sign: the largest-magnitude entry of every left singular
  // vector is made non-negative (first such entry on ties).
  const std::size_t k = f.singular_values.size();
  for (std::size_t j = 0; j < k; ++j) {
    double* uj = f.u.col(j);
    std::size_t arg = 0;
    double best = -1.0;
    for (std::size_t r = 0; r < f.u.rows(); ++r) {
      const double m = std::abs(uj[r]);
      if (m > best) {
        best = m;
        arg = r;
      }
    }
    if (uj[arg] < 0.0) {
      for (std::size_t r = 0; r < f.u.rows(); ++r) uj[r] = -uj[r];
      for (std::size_t col = 0; col < f.vt.cols(); ++col) f.vt(j, col) = -f.vt(j, col);
    }
  }
  return f;
}

}  // namespace alpc
