#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace holoproj {

/// Dense rank-3 array, row-major, all extents equal to dim.
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(std::size_t dim) : dim_(dim), data_(dim * dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c) {
    return data_[(a * dim_ + b) * dim_ + c];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return data_[(a * dim_ + b) * dim_ + c];
  }
  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  friend Tensor3 operator-(Tensor3 a, const Tensor3& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

/// Dense rank-4 array, row-major, all extents equal to dim.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(std::size_t dim) : dim_(dim), data_(dim * dim * dim * dim, 0.0) {}

  std::size_t dim() const noexcept { return dim_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return data_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return data_[((a * dim_ + b) * dim_ + c) * dim_ + d];
  }
  const std::vector<double>& data() const noexcept { return data_; }

  double max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
  }

  friend Tensor4 operator-(Tensor4 a, const Tensor4& b) {
    for (std::size_t i = 0; i < a.data_.size(); ++i) a.data_[i] -= b.data_[i];
    return a;
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> data_;
};

}  // namespace holoproj
