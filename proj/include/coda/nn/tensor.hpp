#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coda::nn {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Dense row-major float64 tensor of rank 0 to 3.
class Tensor {
 public:
  Tensor() : shape_{}, data_(1, 0.0) {}
  explicit Tensor(std::vector<int> shape, double fill = 0.0);
  Tensor(std::vector<int> shape, std::vector<double> data);

  static Tensor scalar(double v) { return Tensor({}, std::vector<double>{v}); }
  static Tensor from_rows(const std::vector<std::vector<double>>& rows);

  const std::vector<int>& shape() const { return shape_; }
  int rank() const { return static_cast<int>(shape_.size()); }
  /// Size of `axis`; negative axes count from the end.
  int dim(int axis) const;
  std::size_t size() const { return data_.size(); }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }
  double* ptr() { return data_.data(); }
  const double* ptr() const { return data_.data(); }

  double& operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double& at(int i, int j) { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
  double at(int i, int j) const { return data_[static_cast<std::size_t>(i) * shape_[1] + j]; }
  double& at(int b, int i, int j) {
    return data_[(static_cast<std::size_t>(b) * shape_[1] + i) * shape_[2] + j];
  }
  double at(int b, int i, int j) const {
    return data_[(static_cast<std::size_t>(b) * shape_[1] + i) * shape_[2] + j];
  }

  double item() const;
  Tensor reshaped(std::vector<int> shape) const;
  void fill(double v);
  bool same_shape(const Tensor& other) const { return shape_ == other.shape_; }

  std::string shape_string() const;

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

std::size_t shape_size(const std::vector<int>& shape);

}  // namespace coda::nn
