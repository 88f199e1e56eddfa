#pragma once

#include <functional>

#include "coda/core/space.hpp"

namespace coda {

struct RewardResult {
  double reward = 0.0;
  bool terminal = false;
};

/// Ground-truth reward and termination, evaluated on (s, a, s').
using RewardFn = std::function<RewardResult(const FactoredVector& s, const FactoredVector& a,
                                            const FactoredVector& s_next)>;

}  // namespace coda
