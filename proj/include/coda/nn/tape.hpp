#pragma once

#include <functional>
#include <string>
#include <vector>

#include "coda/nn/tensor.hpp"

namespace coda::nn {

/// Trainable tensor plus its accumulated gradient.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string name_, Tensor value_);
  void zero_grad() { grad.fill(0.0); }
};

class Tape;

/// Handle to a node recorded on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Tensor& value() const;
  /// Gradient after Tape::backward; zeros if the node was not reached.
  const Tensor& grad() const;
  const std::vector<int>& shape() const { return value().shape(); }
  Tape* tape() const { return tape_; }
  int id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* tape, int id) : tape_(tape), id_(id) {}
  Tape* tape_ = nullptr;
  int id_ = -1;
};

/// Reverse-mode tape. Nodes are appended in evaluation order, so the node
/// list is already topologically sorted and backward walks it in reverse,
/// visiting each node once.
class Tape {
 public:
  using BackwardFn = std::function<void(Tape&, int)>;

  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Tensor value);
  /// Differentiable leaf whose gradient can be read back with Var::grad().
  Var input(Tensor value);
  /// Leaf bound to a parameter; backward() adds into p.grad. p must outlive the tape.
  Var param(Parameter& p);

  /// Reverse pass from a scalar node. Throws ShapeError for non-scalar losses.
  void backward(const Var& loss);

  // Used by op implementations.
  Var record(Tensor value, std::vector<int> inputs, BackwardFn fn);
  const Tensor& value(int id) const;
  Tensor& grad(int id);
  const Tensor& grad_or_zero(int id) const;
  bool requires_grad(int id) const { return nodes_[id].requires_grad; }
  bool grad_enabled() const { return grad_enabled_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    Tensor value;
    const Tensor* external = nullptr;
    Tensor grad;
    bool has_grad = false;
    bool requires_grad = false;
    std::vector<int> inputs;
    BackwardFn backward;
    Parameter* param = nullptr;
  };

  bool grad_enabled_;
  std::vector<Node> nodes_;
  mutable Tensor zero_cache_;
};

}  // namespace coda::nn
