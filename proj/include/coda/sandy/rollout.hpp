#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "coda/envs/environment.hpp"
#include "coda/sandy/model.hpp"

namespace coda::sandy {

class RolloutError : public std::runtime_error {
 public:
  RolloutError(const std::string& what, int step) : std::runtime_error(what), step_(step) {}
  int step() const { return step_; }

 private:
  int step_;
};

/// Action for step t given the current (predicted) state.
using ActionSource = std::function<FactoredVector(int t, const FactoredVector& s)>;

/// s0, h(s0, a0), h(h(s0, a0), a1), ... : T + 1 states. Throws RolloutError
/// carrying the step index when a prediction is not finite.
std::vector<FactoredVector> dyn_rollout(DynamicsModel& model, const FactoredVector& s0, const ActionSource& actions,
                                        int steps);

/// Replays a fixed action list.
ActionSource fixed_actions(std::vector<FactoredVector> actions);

struct RolloutComparison {
  std::vector<double> l2_error;     // ||model state - true state||_2 per step, size T + 1
  std::vector<int> true_collisions;  // collisions the environment resolved at each step, size T
};

/// Model rollout against the environment under the same actions. Collision
/// counts are reported when the environment is a bouncing-ball world.
RolloutComparison compare_rollout(DynamicsModel& model, const envs::Environment& env, const FactoredVector& s0,
                                  const std::vector<FactoredVector>& actions);

}  // namespace coda::sandy
