#include "coda/nn/attention.hpp"

#include <cmath>

#include "coda/nn/ops.hpp"

namespace coda::nn {

AttentionBlock::AttentionBlock(const AttentionConfig& config, std::mt19937_64& rng, const std::string& name)
    : config_(config),
      q_({config.in_dim, config.hidden, config.key_dim}, Activation::Tanh, Activation::Identity, rng, name + ".q"),
      k_({config.in_dim, config.hidden, config.key_dim}, Activation::Tanh, Activation::Identity, rng, name + ".k"),
      v_({config.in_dim, config.hidden, config.value_dim}, Activation::Tanh, Activation::Identity, rng, name + ".v") {}

AttentionBlock::Output AttentionBlock::forward(Tape& tape, const Var& x) {
  Var xb = x;
  if (x.value().rank() == 2) xb = reshape(x, {1, x.value().dim(0), x.value().dim(1)});
  const Tensor& xv = xb.value();
  if (xv.rank() != 3 || xv.dim(2) != config_.in_dim) {
    throw ShapeError("AttentionBlock: expected [B, N, " + std::to_string(config_.in_dim) + "], got " +
                     xv.shape_string());
  }
  const int b = xv.dim(0);
  const int n = xv.dim(1);
  if (n < 1) throw ShapeError("AttentionBlock: empty input set");
  Var flat = reshape(xb, {b * n, config_.in_dim});
  Var q = reshape(q_.forward(tape, flat), {b, n, config_.key_dim});
  Var k = reshape(k_.forward(tape, flat), {b, n, config_.key_dim});
  Var v = reshape(v_.forward(tape, flat), {b, n, config_.value_dim});
  Var scores = scale(matmul(q, transpose(k)), 1.0 / std::sqrt(static_cast<double>(config_.key_dim)));
  Var a = softmax(scores);
  return {matmul(a, v), a};
}

std::vector<Parameter*> AttentionBlock::parameters() {
  std::vector<Parameter*> out;
  for (Mlp* m : {&q_, &k_, &v_}) {
    for (Parameter* p : m->parameters()) out.push_back(p);
  }
  return out;
}

}  // namespace coda::nn
