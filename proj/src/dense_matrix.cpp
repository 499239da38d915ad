#include "alpc/dense_matrix.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "alpc/errors.hpp"

namespace alpc {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, 0.0) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (entries_.size() != rows_ * cols_) {
    throw ShapeError("matrix entry buffer has " + std::to_string(entries_.size()) +
                     " values, expected " + std::to_string(rows_ * cols_) + " for " +
                     std::to_string(rows_) + "x" + std::to_string(cols_));
  }
  for (std::size_t idx = 0; idx < entries_.size(); ++idx) {
    if (!std::isfinite(entries_[idx])) {
      throw ArgumentError("non-finite matrix entry at (" + std::to_string(idx % rows_) +
                          ", " + std::to_string(rows_ ? idx / rows_ : 0) + ")");
    }
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

}  // namespace alpc
