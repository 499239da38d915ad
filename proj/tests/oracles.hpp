#pragma once

// Test-side reference implementations, deliberately independent of the
// library's computation paths: plain triple loops, finite differences,
// exhaustive enumeration.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "alpc/dense_matrix.hpp"
#include "alpc/rng.hpp"
#include "alpc/types.hpp"

namespace oracles {

using alpc::DenseMatrix;

// ---------------------------------------------------------------------------
// basic matrix helpers (loops only)

inline DenseMatrix naive_gemm(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      c(i, j) = s;
    }
  return c;
}

inline DenseMatrix naive_transpose(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

inline double frob2_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const double d = a(i, j) - b(i, j);
      s += d * d;
    }
  return s;
}

inline double frob2(const DenseMatrix& a) {
  double s = 0.0;
  for (double x : a.entries()) s += x * x;
  return s;
}

inline double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    m = std::max(m, std::abs(a.entries()[i] - b.entries()[i]));
  return m;
}

// <a, b>_F = trace(a^T b)
inline double frob_inner(const DenseMatrix& a, const DenseMatrix& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.entries().size(); ++i)
    s += a.entries()[i] * b.entries()[i];
  return s;
}

inline DenseMatrix random_matrix(alpc::Rng& rng, std::size_t rows, std::size_t cols,
                                 double scale = 1.0) {
  DenseMatrix m(rows, cols);
  for (auto& x : m.entries()) x = scale * rng.normal();
  return m;
}

// Gram-Schmidt with re-orthogonalization over the columns of a random
// Gaussian matrix; requires rows >= cols.
inline DenseMatrix random_orthonormal(alpc::Rng& rng, std::size_t rows, std::size_t cols) {
  DenseMatrix q = random_matrix(rng, rows, cols);
  for (std::size_t j = 0; j < cols; ++j) {
    double* qj = q.col(j);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < j; ++k) {
        const double* qk = q.col(k);
        double proj = 0.0;
        for (std::size_t r = 0; r < rows; ++r) proj += qk[r] * qj[r];
        for (std::size_t r = 0; r < rows; ++r) qj[r] -= proj * qk[r];
      }
    }
    double nrm = 0.0;
    for (std::size_t r = 0; r < rows; ++r) nrm += qj[r] * qj[r];
    nrm = std::sqrt(nrm);
    for (std::size_t r = 0; r < rows; ++r) qj[r] /= nrm;
  }
  return q;
}

// ---------------------------------------------------------------------------
// finite differences and a quadratic minimizer built on them

using MatrixFn = std::function<double(const DenseMatrix&)>;

inline DenseMatrix fd_gradient(const MatrixFn& f, const DenseMatrix& x, double h = 1e-5) {
  DenseMatrix g(x.rows(), x.cols());
  DenseMatrix probe = x;
  for (std::size_t idx = 0; idx < probe.entries().size(); ++idx) {
    const double saved = probe.entries()[idx];
    const double step = h * (1.0 + std::abs(saved));
    probe.entries()[idx] = saved + step;
    const double up = f(probe);
    probe.entries()[idx] = saved - step;
    const double down = f(probe);
    probe.entries()[idx] = saved;
    g.entries()[idx] = (up - down) / (2.0 * step);
  }
  return g;
}

inline double frob_norm(const DenseMatrix& a) { return std::sqrt(frob2(a)); }

// Fletcher-Reeves conjugate gradient with a three-point parabolic line
// search; exact (up to roundoff) for the strictly convex quadratics the
// block subproblems are.
inline DenseMatrix cg_minimize(const MatrixFn& f, DenseMatrix x, int max_iter = 2000,
                               double grad_tol = 1e-9) {
  DenseMatrix g = fd_gradient(f, x);
  DenseMatrix d = g;
  for (auto& e : d.entries()) e = -e;
  double gg = frob2(g);
  const std::size_t dims = x.entries().size();
  int since_restart = 0;
  for (int iter = 0; iter < max_iter && std::sqrt(gg) > grad_tol; ++iter) {
    const double dn = frob_norm(d);
    if (dn == 0.0) break;
    const double s = 0.1 * (1.0 + frob_norm(x)) / dn;
    DenseMatrix x1 = x, x2 = x;
    for (std::size_t i = 0; i < dims; ++i) {
      x1.entries()[i] += s * d.entries()[i];
      x2.entries()[i] += 2.0 * s * d.entries()[i];
    }
    const double f0 = f(x), f1 = f(x1), f2 = f(x2);
    const double curvature = f0 - 2.0 * f1 + f2;  // 2 a s^2 of the parabola
    double t;
    if (curvature > 0.0) {
      const double slope = (4.0 * f1 - 3.0 * f0 - f2) / (2.0 * s);  // b
      t = -slope * s * s / curvature;
    } else {
      t = s;
    }
    if (!(t > 0.0)) t = s;
    for (std::size_t i = 0; i < dims; ++i) x.entries()[i] += t * d.entries()[i];
    DenseMatrix g_next = fd_gradient(f, x);
    const double gg_next = frob2(g_next);
    double beta = gg > 0.0 ? gg_next / gg : 0.0;
    if (++since_restart >= static_cast<int>(dims)) {
      beta = 0.0;
      since_restart = 0;
    }
    for (std::size_t i = 0; i < dims; ++i)
      d.entries()[i] = -g_next.entries()[i] + beta * d.entries()[i];
    g = std::move(g_next);
    gg = gg_next;
  }
  return x;
}

// ---------------------------------------------------------------------------
// block subproblem objectives, written from the scalar definitions

struct Instance {
  alpc::MultiViewDataset data;
  std::vector<DenseMatrix> anchors;
  std::vector<DenseMatrix> bases;  // orthonormal columns
  DenseMatrix graph;
  DenseMatrix anchor_indicator;
  DenseMatrix data_indicator;
  double lambda1 = 1.0;
  double lambda2 = 0.1;
};

// sum_i ||x_i - A z_i||^2 + lambda1 ||A - U P||^2 for one view
inline double anchor_subobjective(const Instance& in, std::size_t v, const DenseMatrix& a) {
  const DenseMatrix az = naive_gemm(a, in.graph);
  const DenseMatrix up = naive_gemm(in.bases[v], in.anchor_indicator);
  return frob2_diff(in.data.views[v], az) + in.lambda1 * frob2_diff(a, up);
}

// sum_v ||X_v - A_v Z||^2 + lambda2 ||Z - P^T R||^2
inline double graph_subobjective(const Instance& in, const DenseMatrix& z) {
  double total = 0.0;
  for (std::size_t v = 0; v < in.data.views.size(); ++v)
    total += frob2_diff(in.data.views[v], naive_gemm(in.anchors[v], z));
  const DenseMatrix ptr =
      naive_gemm(naive_transpose(in.anchor_indicator), in.data_indicator);
  return total + in.lambda2 * frob2_diff(z, ptr);
}

// lambda1 sum_v ||A_v - U_v P||^2 + lambda2 ||Z - P^T R||^2
inline double indicator_subobjective(const Instance& in, const DenseMatrix& p) {
  double total = 0.0;
  for (std::size_t v = 0; v < in.data.views.size(); ++v)
    total += in.lambda1 * frob2_diff(in.anchors[v], naive_gemm(in.bases[v], p));
  const DenseMatrix ptr = naive_gemm(naive_transpose(p), in.data_indicator);
  return total + in.lambda2 * frob2_diff(in.graph, ptr);
}

// lambda2 ||Z - P^T R||^2
inline double data_indicator_subobjective(const Instance& in, const DenseMatrix& r) {
  const DenseMatrix ptr = naive_gemm(naive_transpose(in.anchor_indicator), r);
  return in.lambda2 * frob2_diff(in.graph, ptr);
}

// full objective from scalar sums
inline double scalar_objective(const Instance& in) {
  double total = 0.0;
  for (std::size_t v = 0; v < in.data.views.size(); ++v)
    total += frob2_diff(in.data.views[v], naive_gemm(in.anchors[v], in.graph));
  for (std::size_t v = 0; v < in.data.views.size(); ++v)
    total += in.lambda1 *
             frob2_diff(in.anchors[v], naive_gemm(in.bases[v], in.anchor_indicator));
  const DenseMatrix ptr =
      naive_gemm(naive_transpose(in.anchor_indicator), in.data_indicator);
  return total + in.lambda2 * frob2_diff(in.graph, ptr);
}

// Random instance with orthonormal bases; dims kept small so that
// finite-difference scans stay cheap.
inline Instance random_instance(std::uint64_t seed, std::size_t l = 2, std::size_t n = 10,
                                std::size_t c = 2, std::size_t m = 2) {
  alpc::Rng rng(seed);
  Instance in;
  const std::size_t mc = m * c;
  in.data.n = n;
  in.data.c = c;
  for (std::size_t v = 0; v < l; ++v) {
    const std::size_t d = c + 2 + v;
    in.data.views.push_back(random_matrix(rng, d, n));
    in.anchors.push_back(random_matrix(rng, d, mc));
    in.bases.push_back(random_orthonormal(rng, d, c));
  }
  in.graph = random_matrix(rng, mc, n);
  in.anchor_indicator = random_matrix(rng, c, mc);
  in.data_indicator = random_matrix(rng, c, n);
  in.lambda1 = std::pow(10.0, rng.uniform(-1.0, 1.0));
  in.lambda2 = std::pow(10.0, rng.uniform(-2.0, 0.0));
  return in;
}

inline alpc::ModelState state_of(const Instance& in) {
  alpc::ModelState s;
  s.anchors = in.anchors;
  s.bases = in.bases;
  s.graph = in.graph;
  s.anchor_indicator = in.anchor_indicator;
  s.data_indicator = in.data_indicator;
  return s;
}

inline alpc::Hyperparams hp_of(const Instance& in) {
  alpc::Hyperparams hp;
  hp.lambda1 = in.lambda1;
  hp.lambda2 = in.lambda2;
  hp.anchors_per_cluster = static_cast<int>(in.anchor_indicator.cols() / in.data.c);
  // the closed-form oracles describe the unconstrained updates
  hp.simplex_projection = false;
  hp.reorthonormalize_anchors = false;
  return hp;
}

// ---------------------------------------------------------------------------
// symmetric eigenvalues (cyclic Jacobi) for PSD certificates

inline std::vector<double> symmetric_eigenvalues(DenseMatrix a, int sweeps = 100) {
  const std::size_t n = a.rows();
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        off = std::max(off, std::abs(a(i, j)));
        if (std::abs(a(i, j)) < 1e-14) continue;
        const double theta = 0.5 * std::atan2(2.0 * a(i, j), a(j, j) - a(i, i));
        const double cs = std::cos(theta), sn = std::sin(theta);
        for (std::size_t r = 0; r < n; ++r) {
          const double x = a(r, i), y = a(r, j);
          a(r, i) = cs * x - sn * y;
          a(r, j) = sn * x + cs * y;
        }
        for (std::size_t r = 0; r < n; ++r) {
          const double x = a(i, r), y = a(j, r);
          a(i, r) = cs * x - sn * y;
          a(j, r) = sn * x + cs * y;
        }
      }
    }
    if (off < 1e-14) break;
  }
  std::vector<double> eig(n);
  for (std::size_t i = 0; i < n; ++i) eig[i] = a(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

// ---------------------------------------------------------------------------
// clustering oracles

inline double exhaustive_accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const int kp = *std::max_element(pred.begin(), pred.end()) + 1;
  const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  const int k = std::max(kp, kt);
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::int64_t best = 0;
  do {
    std::int64_t matched = 0;
    for (std::size_t i = 0; i < pred.size(); ++i)
      if (perm[pred[i]] == truth[i]) ++matched;
    best = std::max(best, matched);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(best) / static_cast<double>(pred.size());
}

inline double pair_enumeration_f_score(const std::vector<int>& pred,
                                       const std::vector<int>& truth) {
  std::int64_t agreeing = 0, pred_pairs = 0, true_pairs = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    for (std::size_t j = i + 1; j < pred.size(); ++j) {
      const bool same_pred = pred[i] == pred[j];
      const bool same_true = truth[i] == truth[j];
      if (same_pred) ++pred_pairs;
      if (same_true) ++true_pairs;
      if (same_pred && same_true) ++agreeing;
    }
  }
  const double precision =
      pred_pairs > 0 ? static_cast<double>(agreeing) / static_cast<double>(pred_pairs)
                     : (true_pairs == 0 ? 1.0 : 0.0);
  const double recall =
      true_pairs > 0 ? static_cast<double>(agreeing) / static_cast<double>(true_pairs)
                     : (pred_pairs == 0 ? 1.0 : 0.0);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

inline double direct_nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const double n = static_cast<double>(pred.size());
  std::vector<std::vector<double>> joint;
  std::vector<double> pa, pb;
  const int kp = *std::max_element(pred.begin(), pred.end()) + 1;
  const int kt = *std::max_element(truth.begin(), truth.end()) + 1;
  joint.assign(kp, std::vector<double>(kt, 0.0));
  pa.assign(kp, 0.0);
  pb.assign(kt, 0.0);
  for (std::size_t i = 0; i < pred.size(); ++i) {
    joint[pred[i]][truth[i]] += 1.0 / n;
    pa[pred[i]] += 1.0 / n;
    pb[truth[i]] += 1.0 / n;
  }
  double ha = 0.0, hb = 0.0, mi = 0.0;
  for (double p : pa)
    if (p > 0.0) ha -= p * std::log(p);
  for (double p : pb)
    if (p > 0.0) hb -= p * std::log(p);
  for (int i = 0; i < kp; ++i)
    for (int j = 0; j < kt; ++j)
      if (joint[i][j] > 0.0) mi += joint[i][j] * std::log(joint[i][j] / (pa[i] * pb[j]));
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;
  return mi / std::sqrt(ha * hb);
}

// Minimum inertia over every split of the points into two non-empty groups.
inline double exhaustive_two_partition_inertia(const DenseMatrix& points) {
  const std::size_t n = points.cols();
  const std::size_t dim = points.rows();
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<double> mean0(dim, 0.0), mean1(dim, 0.0);
    std::size_t n0 = 0, n1 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool in1 = (mask >> i) & 1u;
      auto& mean = in1 ? mean1 : mean0;
      (in1 ? n1 : n0)++;
      for (std::size_t r = 0; r < dim; ++r) mean[r] += points(r, i);
    }
    for (std::size_t r = 0; r < dim; ++r) {
      mean0[r] /= static_cast<double>(n0);
      mean1[r] /= static_cast<double>(n1);
    }
    double cost = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& mean = ((mask >> i) & 1u) ? mean1 : mean0;
      for (std::size_t r = 0; r < dim; ++r) {
        const double d = points(r, i) - mean[r];
        cost += d * d;
      }
    }
    best = std::min(best, cost);
  }
  return best;
}

// Exhaustive grid over the simplex at the given resolution (3 dimensions).
inline std::vector<double> grid_simplex_best(const std::vector<double>& v, double step) {
  double best_dist = std::numeric_limits<double>::infinity();
  std::vector<double> best(3, 0.0);
  for (double z0 = 0.0; z0 <= 1.0 + 1e-12; z0 += step) {
    for (double z1 = 0.0; z0 + z1 <= 1.0 + 1e-12; z1 += step) {
      const double z2 = 1.0 - z0 - z1;
      if (z2 < -1e-12) continue;
      const double d = (z0 - v[0]) * (z0 - v[0]) + (z1 - v[1]) * (z1 - v[1]) +
                       (z2 - v[2]) * (z2 - v[2]);
      if (d < best_dist) {
        best_dist = d;
        best = {z0, z1, std::max(z2, 0.0)};
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// scratch directories for io tests

class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<unsigned> counter{0};
    const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path_ = std::filesystem::temp_directory_path() /
            ("alpc_test_" + tag + "_" + std::to_string(stamp) + "_" +
             std::to_string(counter.fetch_add(1)));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

}  // namespace oracles
