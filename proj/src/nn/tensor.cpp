#include "coda/nn/tensor.hpp"

#include <algorithm>

namespace coda::nn {

std::size_t shape_size(const std::vector<int>& shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) throw ShapeError("negative dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> shape, double fill) : shape_(std::move(shape)) {
  if (shape_.size() > 3) throw ShapeError("Tensor: rank > 3 unsupported");
  data_.assign(shape_size(shape_), fill);
}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  if (shape_.size() > 3) throw ShapeError("Tensor: rank > 3 unsupported");
  if (data_.size() != shape_size(shape_)) throw ShapeError("Tensor: value count does not match shape");
}

Tensor Tensor::from_rows(const std::vector<std::vector<double>>& rows) {
  const int r = static_cast<int>(rows.size());
  const int c = r == 0 ? 0 : static_cast<int>(rows.front().size());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(r) * c);
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != c) throw ShapeError("Tensor::from_rows: ragged rows");
    data.insert(data.end(), row.begin(), row.end());
  }
  return Tensor({r, c}, std::move(data));
}

int Tensor::dim(int axis) const {
  const int r = rank();
  if (axis < 0) axis += r;
  if (axis < 0 || axis >= r) throw ShapeError("Tensor::dim: axis out of range");
  return shape_[axis];
}

double Tensor::item() const {
  if (data_.size() != 1) throw ShapeError("Tensor::item: tensor is not a scalar (" + shape_string() + ")");
  return data_[0];
}

Tensor Tensor::reshaped(std::vector<int> shape) const {
  if (shape_size(shape) != data_.size()) throw ShapeError("Tensor::reshaped: size mismatch");
  return Tensor(std::move(shape), data_);
}

void Tensor::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string Tensor::shape_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape_[i]);
  }
  return s + "]";
}

}  // namespace coda::nn
