#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace pidtf {

/// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> flat() { return data_; }
  std::span<const double> flat() const { return data_; }

  bool same_shape(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Per-element boolean flags with the same addressing as Matrix.
class Mask {
 public:
  Mask() = default;
  Mask(std::size_t rows, std::size_t cols) : cols_(cols), bits_(rows * cols, 0) {}

  bool test(std::size_t r, std::size_t c) const { return bits_[r * cols_ + c] != 0; }
  void set(std::size_t r, std::size_t c) { bits_[r * cols_ + c] = 1; }

 private:
  std::size_t cols_ = 0;
  std::vector<std::uint8_t> bits_;
};

}  // namespace pidtf
