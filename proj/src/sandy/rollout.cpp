#include "coda/sandy/rollout.hpp"

#include <cmath>

#include "coda/envs/bouncing_ball.hpp"

namespace coda::sandy {

std::vector<FactoredVector> dyn_rollout(DynamicsModel& model, const FactoredVector& s0, const ActionSource& actions,
                                        int steps) {
  if (steps < 0) throw std::invalid_argument("dyn_rollout: negative horizon");
  if (!(s0.space() == *model.space())) throw DimensionError("dyn_rollout: start state does not match the model");
  std::vector<FactoredVector> out{s0};
  for (int t = 0; t < steps; ++t) {
    FactoredVector next = model.predict(out.back(), actions(t, out.back()));
    for (int k = 0; k < next.size(); ++k) {
      if (!std::isfinite(next[k])) throw RolloutError("dyn_rollout: non-finite prediction at step " + std::to_string(t), t);
    }
    out.push_back(std::move(next));
  }
  return out;
}

ActionSource fixed_actions(std::vector<FactoredVector> actions) {
  return [actions = std::move(actions)](int t, const FactoredVector&) {
    if (t < 0 || t >= static_cast<int>(actions.size())) throw std::out_of_range("fixed_actions: ran out of actions");
    return actions[t];
  };
}

RolloutComparison compare_rollout(DynamicsModel& model, const envs::Environment& env, const FactoredVector& s0,
                                  const std::vector<FactoredVector>& actions) {
  const int steps = static_cast<int>(actions.size());
  const auto predicted = dyn_rollout(model, s0, fixed_actions(actions), steps);
  const auto* ball = dynamic_cast<const envs::BouncingBall*>(&env);
  RolloutComparison c;
  FactoredVector truth = s0;
  for (int t = 0; t <= steps; ++t) {
    double sq = 0.0;
    for (int k = 0; k < truth.size(); ++k) sq += (truth[k] - predicted[t][k]) * (truth[k] - predicted[t][k]);
    c.l2_error.push_back(std::sqrt(sq));
    if (t == steps) break;
    c.true_collisions.push_back(ball ? static_cast<int>(ball->collisions(truth, actions[t]).size()) : 0);
    truth = env.step(truth, actions[t]).s_next;
  }
  return c;
}

}  // namespace coda::sandy
