#include "coda/nn/tape.hpp"

namespace coda::nn {

Parameter::Parameter(std::string name_, Tensor value_)
    : name(std::move(name_)), value(std::move(value_)), grad(value.shape(), 0.0) {}

const Tensor& Var::value() const { return tape_->value(id_); }
const Tensor& Var::grad() const { return tape_->grad_or_zero(id_); }

Var Tape::constant(Tensor value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::input(Tensor value) {
  Node n;
  n.value = std::move(value);
  n.requires_grad = grad_enabled_;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::param(Parameter& p) {
  Node n;
  n.external = &p.value;
  n.requires_grad = grad_enabled_;
  n.param = &p;
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

Var Tape::record(Tensor value, std::vector<int> inputs, BackwardFn fn) {
  Node n;
  n.value = std::move(value);
  if (grad_enabled_) {
    for (int i : inputs) n.requires_grad = n.requires_grad || nodes_[i].requires_grad;
    if (n.requires_grad) {
      n.inputs = std::move(inputs);
      n.backward = std::move(fn);
    }
  }
  nodes_.push_back(std::move(n));
  return Var(this, static_cast<int>(nodes_.size()) - 1);
}

const Tensor& Tape::value(int id) const {
  const Node& n = nodes_[id];
  return n.external ? *n.external : n.value;
}

Tensor& Tape::grad(int id) {
  Node& n = nodes_[id];
  if (!n.has_grad) {
    n.grad = Tensor(value(id).shape(), 0.0);
    n.has_grad = true;
  }
  return n.grad;
}

const Tensor& Tape::grad_or_zero(int id) const {
  const Node& n = nodes_[id];
  if (n.has_grad) return n.grad;
  zero_cache_ = Tensor(value(id).shape(), 0.0);
  return zero_cache_;
}

void Tape::backward(const Var& loss) {
  if (loss.tape() != this) throw std::invalid_argument("Tape::backward: loss recorded on another tape");
  if (value(loss.id()).size() != 1) {
    throw ShapeError("Tape::backward: loss must be scalar, got " + value(loss.id()).shape_string());
  }
  for (auto& n : nodes_) {
    n.has_grad = false;
  }
  grad(loss.id()).fill(1.0);
  for (int id = loss.id(); id >= 0; --id) {
    Node& n = nodes_[id];
    if (!n.has_grad || !n.requires_grad) continue;
    if (n.backward) n.backward(*this, id);
    if (n.param) {
      auto& pg = n.param->grad;
      if (!pg.same_shape(n.grad)) pg = Tensor(n.grad.shape(), 0.0);
      for (std::size_t i = 0; i < pg.size(); ++i) pg[i] += n.grad[i];
    }
  }
}

}  // namespace coda::nn
