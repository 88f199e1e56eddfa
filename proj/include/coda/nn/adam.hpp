#pragma once

#include <vector>

#include "coda/nn/tape.hpp"

namespace coda::nn {

struct AdamConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.0;  // decoupled: theta -= lr * wd * theta
};

/// Moment estimates for one parameter list. The list order fixes the pairing
/// between parameters and moments, so pass the same list on every step.
struct AdamState {
  AdamConfig config;
  std::vector<Tensor> m;
  std::vector<Tensor> v;
  long step = 0;
};

AdamState make_adam_state(const std::vector<Parameter*>& params, AdamConfig config = {});

/// One bias-corrected Adam update from each parameter's `grad`. Throws
/// ShapeError when a grad or moment does not match its parameter.
void adam_step(AdamState& state, const std::vector<Parameter*>& params);

class Adam {
 public:
  Adam() = default;
  Adam(std::vector<Parameter*> params, AdamConfig config = {});

  void step() { adam_step(state_, params_); }
  void zero_grad();
  const AdamState& state() const { return state_; }
  AdamConfig& config() { return state_.config; }

 private:
  std::vector<Parameter*> params_;
  AdamState state_;
};

}  // namespace coda::nn
