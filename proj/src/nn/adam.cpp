#include "coda/nn/adam.hpp"

#include <cmath>
#include <string>

namespace coda::nn {

AdamState make_adam_state(const std::vector<Parameter*>& params, AdamConfig config) {
  AdamState st;
  st.config = config;
  for (const Parameter* p : params) {
    st.m.emplace_back(p->value.shape(), 0.0);
    st.v.emplace_back(p->value.shape(), 0.0);
  }
  return st;
}

void adam_step(AdamState& state, const std::vector<Parameter*>& params) {
  if (params.size() != state.m.size()) {
    throw ShapeError("adam_step: parameter count " + std::to_string(params.size()) + " does not match state " +
                     std::to_string(state.m.size()));
  }
  for (std::size_t k = 0; k < params.size(); ++k) {
    const Parameter& p = *params[k];
    if (!p.grad.same_shape(p.value) || !state.m[k].same_shape(p.value)) {
      throw ShapeError("adam_step: shape mismatch for '" + p.name + "'");
    }
  }
  const AdamConfig& c = state.config;
  ++state.step;
  const double bc1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.step));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Parameter& p = *params[k];
    Tensor& m = state.m[k];
    Tensor& v = state.v[k];
    for (std::size_t i = 0; i < p.value.size(); ++i) {
      const double g = p.grad[i];
      m[i] = c.beta1 * m[i] + (1.0 - c.beta1) * g;
      v[i] = c.beta2 * v[i] + (1.0 - c.beta2) * g * g;
      const double mhat = m[i] / bc1;
      const double vhat = v[i] / bc2;
      p.value[i] -= c.lr * (mhat / (std::sqrt(vhat) + c.eps) + c.weight_decay * p.value[i]);
    }
  }
}

Adam::Adam(std::vector<Parameter*> params, AdamConfig config)
    : params_(std::move(params)), state_(make_adam_state(params_, config)) {}

void Adam::zero_grad() {
  for (Parameter* p : params_) p->zero_grad();
}

}  // namespace coda::nn
