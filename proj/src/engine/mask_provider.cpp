#include "coda/engine/mask_provider.hpp"

#include <cmath>

namespace coda::engine {

LocalMask IdentityProvider::mask(const FactoredVector& s, const FactoredVector&) const {
  return LocalMask::identity(s.space().num_state_components(), s.space().num_action_components());
}

PositionLayout PositionLayout::leading_xy(int num_state, int effector) {
  return PositionLayout{std::vector<int>(num_state, 0), effector};
}

LocalMask heuristic_distance_mask(const FactoredVector& s, const FactoredVector& a, double threshold,
                                  const PositionLayout& layout) {
  const FactoredSpace& space = s.space();
  const int n = space.num_state_components();
  const int m = space.num_action_components();
  if (static_cast<int>(layout.offsets.size()) != n) {
    throw DimensionError("distance heuristic: need a position offset per state component");
  }
  if (a.size() != space.action_dim()) throw DimensionError("distance heuristic: action does not match the space");
  for (int i = 0; i < n; ++i) {
    if (layout.offsets[i] < 0 || layout.offsets[i] + 2 > space.state_component(i).dim) {
      throw DimensionError("distance heuristic: component '" + space.state_component(i).name +
                           "' has no position slot");
    }
  }
  if (layout.effector < 0 || layout.effector >= n) throw DimensionError("distance heuristic: bad effector index");
  auto pos = [&](int i) {
    const auto c = s.component(i);
    return std::pair{c[layout.offsets[i]], c[layout.offsets[i] + 1]};
  };
  auto close = [&](int i, int j) {
    const auto [xi, yi] = pos(i);
    const auto [xj, yj] = pos(j);
    return std::hypot(xi - xj, yi - yj) <= threshold;
  };
  LocalMask mask(n, m);
  for (int i = 0; i < n; ++i) {
    mask.set(i, i);
    for (int j = i + 1; j < n; ++j) {
      if (close(i, j)) {
        mask.set(i, j);
        mask.set(j, i);
      }
    }
  }
  for (int k = 0; k < m; ++k) {
    mask.set(n + k, layout.effector);
    for (int j = 0; j < n; ++j)
      if (j != layout.effector && close(layout.effector, j)) mask.set(n + k, j);
  }
  return mask;
}

}  // namespace coda::engine
