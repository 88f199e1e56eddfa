#include "coda/sandy/data.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace coda::sandy {

Standardizer Standardizer::identity(int dim) {
  return Standardizer{std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0)};
}

Standardizer Standardizer::fit(const Tensor& rows) {
  if (rows.rank() != 2 || rows.dim(0) < 1) throw nn::ShapeError("Standardizer::fit: need a non-empty [N, D] tensor");
  const int n = rows.dim(0);
  const int d = rows.dim(1);
  Standardizer s = identity(d);
  for (int j = 0; j < d; ++j) {
    double mu = 0.0;
    for (int i = 0; i < n; ++i) mu += rows.at(i, j);
    mu /= n;
    double var = 0.0;
    for (int i = 0; i < n; ++i) var += (rows.at(i, j) - mu) * (rows.at(i, j) - mu);
    var /= n;
    s.mean[j] = mu;
    s.scale[j] = var > 1e-18 ? std::sqrt(var) : 1.0;
  }
  return s;
}

Tensor Standardizer::apply(const Tensor& rows) const {
  if (rows.rank() != 2 || rows.dim(1) != dim()) throw nn::ShapeError("Standardizer::apply: width mismatch");
  Tensor out(rows.shape());
  for (int i = 0; i < rows.dim(0); ++i)
    for (int j = 0; j < dim(); ++j) out.at(i, j) = (rows.at(i, j) - mean[j]) / scale[j];
  return out;
}

Tensor Standardizer::invert(const Tensor& rows) const {
  if (rows.rank() != 2 || rows.dim(1) != dim()) throw nn::ShapeError("Standardizer::invert: width mismatch");
  Tensor out(rows.shape());
  for (int i = 0; i < rows.dim(0); ++i)
    for (int j = 0; j < dim(); ++j) out.at(i, j) = rows.at(i, j) * scale[j] + mean[j];
  return out;
}

Tensor input_row(const FactoredVector& s, const FactoredVector& a) {
  std::vector<double> v(s.values().begin(), s.values().end());
  v.insert(v.end(), a.values().begin(), a.values().end());
  const int d = static_cast<int>(v.size());
  return Tensor({1, d}, std::move(v));
}

Dataset make_dataset(const std::vector<Transition>& transitions, const std::vector<LocalMask>& masks) {
  if (transitions.empty()) throw std::invalid_argument("make_dataset: no transitions");
  if (!masks.empty() && masks.size() != transitions.size()) {
    throw std::invalid_argument("make_dataset: one mask per transition required");
  }
  const FactoredSpace& space = transitions.front().space();
  const int n = static_cast<int>(transitions.size());
  const int ds = space.state_dim();
  const int da = space.action_dim();
  Dataset d{transitions.front().s.space_ptr(), Tensor({n, ds + da}), Tensor({n, ds}), masks};
  for (int i = 0; i < n; ++i) {
    const Transition& t = transitions[i];
    if (!(t.space() == space)) throw DimensionError("make_dataset: mixed spaces");
    std::copy(t.s.values().begin(), t.s.values().end(), d.x.ptr() + static_cast<std::size_t>(i) * (ds + da));
    std::copy(t.a.values().begin(), t.a.values().end(), d.x.ptr() + static_cast<std::size_t>(i) * (ds + da) + ds);
    std::copy(t.s_next.values().begin(), t.s_next.values().end(), d.y.ptr() + static_cast<std::size_t>(i) * ds);
  }
  return d;
}

Tensor gather_rows(const Tensor& t, const std::vector<int>& idx, std::size_t begin, std::size_t end) {
  const int w = t.dim(1);
  Tensor out({static_cast<int>(end - begin), w});
  for (std::size_t k = begin; k < end; ++k) {
    std::memcpy(out.ptr() + (k - begin) * w, t.ptr() + static_cast<std::size_t>(idx[k]) * w, sizeof(double) * w);
  }
  return out;
}

Dataset concat(const Dataset& a, const Dataset& b) {
  if (!(*a.space == *b.space)) throw DimensionError("concat: datasets come from different spaces");
  auto stack = [](const Tensor& p, const Tensor& q) {
    std::vector<double> v(p.data().begin(), p.data().end());
    v.insert(v.end(), q.data().begin(), q.data().end());
    return Tensor({p.dim(0) + q.dim(0), p.dim(1)}, std::move(v));
  };
  Dataset out{a.space, stack(a.x, b.x), stack(a.y, b.y), {}};
  if (a.has_masks() && b.has_masks()) {
    out.masks = a.masks;
    out.masks.insert(out.masks.end(), b.masks.begin(), b.masks.end());
  }
  return out;
}

}  // namespace coda::sandy
