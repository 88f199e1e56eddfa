#pragma once

#include <vector>

#include "coda/core/reward.hpp"
#include "coda/envs/environment.hpp"

namespace coda::envs {

struct LabeledData {
  std::vector<Transition> transitions;
  std::vector<LocalMask> masks;  // ground truth at (s, a), aligned with transitions
};

/// Runs the uniform random policy for `count` steps. Before each step the
/// environment is reset with probability `reset_prob` (1.0 gives i.i.d. draws
/// from the reset distribution). Rewards come from `reward` when provided.
LabeledData collect(const Environment& env, int count, Rng& rng, double reset_prob = 0.05,
                    const RewardFn& reward = nullptr);

}  // namespace coda::envs
