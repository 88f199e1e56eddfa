#include "coda/nn/mlp.hpp"

#include <cmath>

#include "coda/nn/ops.hpp"

namespace coda::nn {

const char* to_string(Activation a) {
  switch (a) {
    case Activation::Identity: return "identity";
    case Activation::Tanh: return "tanh";
    case Activation::Relu: return "relu";
    case Activation::Sigmoid: return "sigmoid";
    case Activation::Gelu: return "gelu";
  }
  return "?";
}

Activation activation_from_string(const std::string& name) {
  for (auto a : {Activation::Identity, Activation::Tanh, Activation::Relu, Activation::Sigmoid, Activation::Gelu}) {
    if (name == to_string(a)) return a;
  }
  throw UnsupportedActivation("unknown activation '" + name + "'");
}

Var apply(Activation act, const Var& x) {
  switch (act) {
    case Activation::Identity: return x;
    case Activation::Tanh: return tanh(x);
    case Activation::Relu: return relu(x);
    case Activation::Sigmoid: return sigmoid(x);
    case Activation::Gelu: return gelu(x);
  }
  return x;
}

Mlp::Mlp(const std::vector<int>& sizes, Activation hidden, Activation output, std::mt19937_64& rng,
         const std::string& name) {
  if (sizes.size() < 2) throw ShapeError("Mlp: need at least input and output sizes");
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    const int in = sizes[l];
    const int out = sizes[l + 1];
    if (in < 1 || out < 1) throw ShapeError("Mlp: layer sizes must be positive");
    const double bound = 1.0 / std::sqrt(static_cast<double>(in));
    std::uniform_real_distribution<double> u(-bound, bound);
    Tensor w({in, out});
    for (auto& v : w.data()) v = u(rng);
    Tensor b({out});
    for (auto& v : b.data()) v = u(rng);
    DenseLayer layer;
    layer.weight = Parameter(name + ".w" + std::to_string(l), std::move(w));
    layer.bias = Parameter(name + ".b" + std::to_string(l), std::move(b));
    layer.activation = (l + 2 == sizes.size()) ? output : hidden;
    layers_.push_back(std::move(layer));
  }
}

int Mlp::in_dim() const { return layers_.front().weight.value.dim(0); }
int Mlp::out_dim() const { return layers_.back().weight.value.dim(1); }

Var Mlp::forward(Tape& tape, const Var& x) {
  Var h = x;
  for (auto& layer : layers_) {
    h = add_bias(matmul(h, tape.param(layer.weight)), tape.param(layer.bias));
    h = apply(layer.activation, h);
  }
  return h;
}

std::vector<Parameter*> Mlp::parameters() {
  std::vector<Parameter*> out;
  for (auto& layer : layers_) {
    out.push_back(&layer.weight);
    out.push_back(&layer.bias);
  }
  return out;
}

Tensor jacobian_bound(const Mlp& mlp) {
  Tensor bound;
  bool first = true;
  for (const auto& layer : mlp.layers()) {
    if (layer.activation == Activation::Gelu) {
      throw UnsupportedActivation("jacobian_bound: GELU derivative exceeds 1; bound would not hold");
    }
    const Tensor& w = layer.weight.value;
    Tensor aw(w.shape());
    for (std::size_t i = 0; i < w.size(); ++i) aw[i] = std::fabs(w[i]);
    if (first) {
      bound = std::move(aw);
      first = false;
      continue;
    }
    const int r = bound.dim(0);
    const int k = bound.dim(1);
    const int c = aw.dim(1);
    Tensor next({r, c});
    for (int i = 0; i < r; ++i) {
      for (int kk = 0; kk < k; ++kk) {
        const double v = bound.at(i, kk);
        if (v == 0.0) continue;
        for (int j = 0; j < c; ++j) next.at(i, j) += v * aw.at(kk, j);
      }
    }
    bound = std::move(next);
  }
  return bound;
}

Tensor input_jacobian(Mlp& mlp, const Tensor& x) {
  const int in = mlp.in_dim();
  const int out = mlp.out_dim();
  if (static_cast<int>(x.size()) != in) throw ShapeError("input_jacobian: input size mismatch");
  Tensor jac({in, out});
  for (int o = 0; o < out; ++o) {
    Tape tape;
    Var xin = tape.input(x.reshaped({1, in}));
    Var y = mlp.forward(tape, xin);
    Var yo = slice_last(y, o, o + 1);
    tape.backward(sum(yo));
    const Tensor& g = xin.grad();
    for (int i = 0; i < in; ++i) jac.at(i, o) = g[i];
  }
  // Parameter grads were touched by the passes above; leave them clean.
  for (auto* p : mlp.parameters()) p->zero_grad();
  return jac;
}

}  // namespace coda::nn
