#include "alpc/types.hpp"

#include <string>

#include "alpc/errors.hpp"

namespace alpc {

namespace {

std::string shape_of(const DenseMatrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void validate_dataset(const MultiViewDataset& data) {
  if (data.views.empty())
    throw ValidationError("view-count", "dataset needs at least one view");
  if (data.c < 2)
    throw ValidationError("cluster-count", "cluster count must be at least 2, got " +
                                               std::to_string(data.c));
  if (data.n < data.c)
    throw ValidationError("sample-count", "need at least c=" + std::to_string(data.c) +
                                              " samples, got " + std::to_string(data.n));
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    const DenseMatrix& x = data.views[v];
    if (x.cols() != data.n)
      throw ValidationError("view-columns", "view " + std::to_string(v) + " has " +
                                                std::to_string(x.cols()) + " columns, expected n=" +
                                                std::to_string(data.n));
    if (x.rows() == 0)
      throw ValidationError("view-dim", "view " + std::to_string(v) + " has zero rows");
  }
  if (data.labels) {
    if (data.labels->size() != data.n)
      throw ValidationError("label-length", "labels have length " +
                                                std::to_string(data.labels->size()) +
                                                ", expected n=" + std::to_string(data.n));
    for (std::size_t i = 0; i < data.labels->size(); ++i) {
      const int y = (*data.labels)[i];
      if (y < 0 || static_cast<std::size_t>(y) >= data.c)
        throw ValidationError("label-range", "label " + std::to_string(y) + " at sample " +
                                                 std::to_string(i) + " is outside [0, " +
                                                 std::to_string(data.c) + ")");
    }
  }
}

void validate(const MultiViewDataset& data, const Hyperparams& hp) {
  validate_dataset(data);
  if (!(hp.lambda1 > 0.0))
    throw ValidationError("lambda1-positive", "lambda1 must be positive");
  if (!(hp.lambda2 > 0.0))
    throw ValidationError("lambda2-positive", "lambda2 must be positive");
  if (hp.anchors_per_cluster < 1)
    throw ValidationError("anchors-per-cluster", "anchors per cluster must be at least 1");
  if (hp.max_iter < 0)
    throw ValidationError("max-iter", "max_iter must be non-negative");
  if (!(hp.tol > 0.0))
    throw ValidationError("tol-positive", "tol must be positive");
  if (!(hp.ridge_epsilon > 0.0))
    throw ValidationError("ridge-positive", "ridge_epsilon must be positive");
  if (hp.kmeans_restarts < 1)
    throw ValidationError("kmeans-restarts", "kmeans_restarts must be at least 1");
  const std::size_t mc = static_cast<std::size_t>(hp.anchors_per_cluster) * data.c;
  if (mc > data.n)
    throw ValidationError("anchor-budget", "m*c=" + std::to_string(mc) +
                                               " anchors exceed n=" + std::to_string(data.n) +
                                               " samples");
}

void ModelState::ensure_consistent(const MultiViewDataset& data, const Hyperparams& hp) const {
  const std::size_t mc = static_cast<std::size_t>(hp.anchors_per_cluster) * data.c;
  if (anchors.size() != data.views.size() || bases.size() != data.views.size())
    throw ShapeError("model state holds " + std::to_string(anchors.size()) + "/" +
                     std::to_string(bases.size()) + " anchor/basis matrices for " +
                     std::to_string(data.views.size()) + " views");
  for (std::size_t v = 0; v < data.views.size(); ++v) {
    const std::size_t dv = data.views[v].rows();
    if (anchors[v].rows() != dv || anchors[v].cols() != mc)
      throw ShapeError("anchor matrix for view " + std::to_string(v) + " is " +
                       shape_of(anchors[v]) + ", expected " + std::to_string(dv) + "x" +
                       std::to_string(mc));
    if (bases[v].rows() != dv || bases[v].cols() != data.c)
      throw ShapeError("basis matrix for view " + std::to_string(v) + " is " +
                       shape_of(bases[v]) + ", expected " + std::to_string(dv) + "x" +
                       std::to_string(data.c));
  }
  if (graph.rows() != mc || graph.cols() != data.n)
    throw ShapeError("graph is " + shape_of(graph) + ", expected " + std::to_string(mc) +
                     "x" + std::to_string(data.n));
  if (anchor_indicator.rows() != data.c || anchor_indicator.cols() != mc)
    throw ShapeError("anchor indicator is " + shape_of(anchor_indicator) + ", expected " +
                     std::to_string(data.c) + "x" + std::to_string(mc));
  if (data_indicator.rows() != data.c || data_indicator.cols() != data.n)
    throw ShapeError("data indicator is " + shape_of(data_indicator) + ", expected " +
                     std::to_string(data.c) + "x" + std::to_string(data.n));
}

bool FitReport::objective_non_increasing(double rel_slack) const {
  for (std::size_t t = 1; t < objective_trace.size(); ++t) {
    if (objective_trace[t] > objective_trace[t - 1] * (1.0 + rel_slack)) return false;
  }
  return true;
}

}  // namespace alpc
