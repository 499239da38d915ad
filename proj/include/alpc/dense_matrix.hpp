#pragma once

#include <cstddef>
#include <vector>

namespace alpc {

// Dense real matrix with 64-bit entries stored column-major, so column j is
// the contiguous range [col(j), col(j) + rows()). Construction from an entry
// buffer rejects non-finite values.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols);  // zero-filled
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static DenseMatrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  double& operator()(std::size_t i, std::size_t j) noexcept {
    return entries_[j * rows_ + i];
  }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return entries_[j * rows_ + i];
  }

  double* col(std::size_t j) noexcept { return entries_.data() + j * rows_; }
  const double* col(std::size_t j) const noexcept { return entries_.data() + j * rows_; }

  std::vector<double>& entries() noexcept { return entries_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  bool has_same_shape(const DenseMatrix& other) const noexcept {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> entries_;
};

}  // namespace alpc
