#include "coda/envs/collect.hpp"

#include <stdexcept>

namespace coda::envs {

LabeledData collect(const Environment& env, int count, Rng& rng, double reset_prob, const RewardFn& reward) {
  if (count < 0) throw std::invalid_argument("collect: negative count");
  if (reset_prob < 0.0 || reset_prob > 1.0) throw std::invalid_argument("collect: reset_prob must be in [0, 1]");
  LabeledData out;
  out.transitions.reserve(count);
  out.masks.reserve(count);
  std::bernoulli_distribution do_reset(reset_prob);
  FactoredVector s = env.reset(rng);
  for (int t = 0; t < count; ++t) {
    if (t > 0 && do_reset(rng)) s = env.reset(rng);
    FactoredVector a = env.sample_action(rng);
    StepResult r = env.step(s, a);
    RewardResult rr = reward ? reward(s, a, r.s_next) : RewardResult{};
    out.transitions.emplace_back(s, a, r.s_next, rr.reward, rr.terminal);
    out.masks.push_back(r.mask);
    s = rr.terminal ? env.reset(rng) : std::move(r.s_next);
  }
  return out;
}

}  // namespace coda::envs
