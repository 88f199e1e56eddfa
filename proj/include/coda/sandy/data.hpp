#pragma once

#include <random>
#include <vector>

#include "coda/core/mask.hpp"
#include "coda/core/space.hpp"
#include "coda/nn/tensor.hpp"

namespace coda::sandy {

using nn::Tensor;

/// Per-coordinate affine map to zero mean and unit variance. Coordinates
/// with (near) zero spread keep scale 1.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  static Standardizer identity(int dim);
  /// Fits on the rows of a [N, D] tensor.
  static Standardizer fit(const Tensor& rows);

  int dim() const { return static_cast<int>(mean.size()); }
  Tensor apply(const Tensor& rows) const;
  Tensor invert(const Tensor& rows) const;
};

/// Transitions as model tensors: x = [s, a] flat, y = s' flat, plus the
/// ground-truth masks when they are known.
struct Dataset {
  SpacePtr space;
  Tensor x;  // [N, state_dim + action_dim]
  Tensor y;  // [N, state_dim]
  std::vector<LocalMask> masks;

  int size() const { return x.rank() == 2 ? x.dim(0) : 0; }
  bool has_masks() const { return !masks.empty(); }
};

Dataset make_dataset(const std::vector<Transition>& transitions, const std::vector<LocalMask>& masks = {});
/// Flat input row [s, a].
Tensor input_row(const FactoredVector& s, const FactoredVector& a);

/// Rows `idx[begin, end)` of a [N, D] tensor.
Tensor gather_rows(const Tensor& t, const std::vector<int>& idx, std::size_t begin, std::size_t end);
/// Concatenation of two datasets over the same space (masks kept only if both have them).
Dataset concat(const Dataset& a, const Dataset& b);

}  // namespace coda::sandy
