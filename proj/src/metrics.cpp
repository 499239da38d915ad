#include "alpc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "alpc/errors.hpp"

namespace alpc {

namespace {

void check_label_pair(const std::vector<int>& pred, const std::vector<int>& truth) {
  if (pred.size() != truth.size())
    throw ArgumentError("label arrays have different lengths: " + std::to_string(pred.size()) +
                        " vs " + std::to_string(truth.size()));
  if (pred.empty()) throw ArgumentError("label arrays are empty");
  for (int y : pred)
    if (y < 0) throw ArgumentError("negative predicted label " + std::to_string(y));
  for (int y : truth)
    if (y < 0) throw ArgumentError("negative true label " + std::to_string(y));
}

std::map<int, std::size_t> compact_ids(const std::vector<int>& labels) {
  std::map<int, std::size_t> ids;
  for (int y : labels) ids.emplace(y, 0);
  std::size_t next = 0;
  for (auto& [label, id] : ids) id = next++;
  return ids;
}

std::int64_t pairs_of(std::int64_t count) { return count * (count - 1) / 2; }

}  // namespace

ContingencyTable ContingencyTable::from_labels(const std::vector<int>& pred,
                                               const std::vector<int>& truth) {
  check_label_pair(pred, truth);
  const auto pred_ids = compact_ids(pred);
  const auto true_ids = compact_ids(truth);
  ContingencyTable ct;
  ct.pred_clusters = pred_ids.size();
  ct.true_clusters = true_ids.size();
  ct.counts.assign(ct.pred_clusters * ct.true_clusters, 0);
  ct.n = static_cast<std::int64_t>(pred.size());
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const std::size_t pi = pred_ids.at(pred[i]);
    const std::size_t ti = true_ids.at(truth[i]);
    ++ct.counts[pi * ct.true_clusters + ti];
  }
  return ct;
}

std::vector<int> hungarian(const DenseMatrix& cost) {
  if (cost.rows() != cost.cols())
    throw ArgumentError("hungarian: cost matrix must be square, got " +
                        std::to_string(cost.rows()) + "x" + std::to_string(cost.cols()));
  const int n = static_cast<int>(cost.rows());
  if (n == 0) return {};

  // Potential-based shortest augmenting paths; exact minimum assignment.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] != 0) assignment[p[j] - 1] = j - 1;
  return assignment;
}

double accuracy(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const std::size_t k = std::max(ct.pred_clusters, ct.true_clusters);
  DenseMatrix cost(k, k);
  for (std::size_t i = 0; i < ct.pred_clusters; ++i)
    for (std::size_t j = 0; j < ct.true_clusters; ++j)
      cost(i, j) = -static_cast<double>(ct.at(i, j));
  const std::vector<int> assignment = hungarian(cost);
  std::int64_t matched = 0;
  for (std::size_t i = 0; i < ct.pred_clusters; ++i) {
    const std::size_t j = static_cast<std::size_t>(assignment[i]);
    if (j < ct.true_clusters) matched += ct.at(i, j);
  }
  return static_cast<double>(matched) / static_cast<double>(ct.n);
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  const double n = static_cast<double>(ct.n);

  std::vector<std::int64_t> pred_sizes(ct.pred_clusters, 0);
  std::vector<std::int64_t> true_sizes(ct.true_clusters, 0);
  for (std::size_t i = 0; i < ct.pred_clusters; ++i)
    for (std::size_t j = 0; j < ct.true_clusters; ++j) {
      pred_sizes[i] += ct.at(i, j);
      true_sizes[j] += ct.at(i, j);
    }

  auto entropy = [n](const std::vector<std::int64_t>& sizes) {
    double h = 0.0;
    for (std::int64_t s : sizes) {
      if (s == 0) continue;
      const double p = static_cast<double>(s) / n;
      h -= p * std::log(p);
    }
    return h;
  };
  const double h_pred = entropy(pred_sizes);
  const double h_true = entropy(true_sizes);
  if (h_pred == 0.0 && h_true == 0.0) return 1.0;  // both trivial partitions
  if (h_pred == 0.0 || h_true == 0.0) return 0.0;

  double mi = 0.0;
  for (std::size_t i = 0; i < ct.pred_clusters; ++i) {
    for (std::size_t j = 0; j < ct.true_clusters; ++j) {
      const std::int64_t nij = ct.at(i, j);
      if (nij == 0) continue;
      const double pij = static_cast<double>(nij) / n;
      mi += pij * std::log(n * static_cast<double>(nij) /
                           (static_cast<double>(pred_sizes[i]) *
                            static_cast<double>(true_sizes[j])));
    }
  }
  const double value = mi / std::sqrt(h_pred * h_true);
  return std::clamp(value, 0.0, 1.0);
}

double purity(const std::vector<int>& pred, const std::vector<int>& truth) {
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);
  std::int64_t dominant = 0;
  for (std::size_t i = 0; i < ct.pred_clusters; ++i) {
    std::int64_t best = 0;
    for (std::size_t j = 0; j < ct.true_clusters; ++j) best = std::max(best, ct.at(i, j));
    dominant += best;
  }
  return static_cast<double>(dominant) / static_cast<double>(ct.n);
}

double pairwise_f_score(const std::vector<int>& pred, const std::vector<int>& truth) {
  check_label_pair(pred, truth);
  if (pred.size() < 2) throw ArgumentError("pairwise_f_score needs at least 2 samples");
  const ContingencyTable ct = ContingencyTable::from_labels(pred, truth);

  std::int64_t agreeing = 0;  // pairs co-clustered in both labelings
  for (std::int64_t nij : ct.counts) agreeing += pairs_of(nij);

  std::int64_t pred_pairs = 0;
  std::int64_t true_pairs = 0;
  for (std::size_t i = 0; i < ct.pred_clusters; ++i) {
    std::int64_t row = 0;
    for (std::size_t j = 0; j < ct.true_clusters; ++j) row += ct.at(i, j);
    pred_pairs += pairs_of(row);
  }
  for (std::size_t j = 0; j < ct.true_clusters; ++j) {
    std::int64_t col = 0;
    for (std::size_t i = 0; i < ct.pred_clusters; ++i) col += ct.at(i, j);
    true_pairs += pairs_of(col);
  }

  // With no pairs on a side, agreement there is vacuous.
  const double precision =
      pred_pairs > 0 ? static_cast<double>(agreeing) / static_cast<double>(pred_pairs)
                     : (true_pairs == 0 ? 1.0 : 0.0);
  const double recall =
      true_pairs > 0 ? static_cast<double>(agreeing) / static_cast<double>(true_pairs)
                     : (pred_pairs == 0 ? 1.0 : 0.0);
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

}  // namespace alpc
