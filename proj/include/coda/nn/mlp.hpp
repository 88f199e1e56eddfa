#pragma once

#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "coda/nn/tape.hpp"

namespace coda::nn {

enum class Activation { Identity, Tanh, Relu, Sigmoid, Gelu };

const char* to_string(Activation a);
Activation activation_from_string(const std::string& name);
Var apply(Activation act, const Var& x);

class UnsupportedActivation : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct DenseLayer {
  Parameter weight;  // [in, out]; y = x W + b
  Parameter bias;    // [out]
  Activation activation = Activation::Identity;
};

/// Fully connected network h^(l) = act(h^(l-1) W^(l) + b^(l)).
///
/// Weights use the fan-in uniform scheme U(-1/sqrt(in), 1/sqrt(in)) for both
/// W and b. Row-vector convention: a batch is [B, in].
class Mlp {
 public:
  Mlp() = default;
  /// `sizes` = {in, hidden..., out}. Hidden layers use `hidden`, the last uses `output`.
  Mlp(const std::vector<int>& sizes, Activation hidden, Activation output, std::mt19937_64& rng,
      const std::string& name = "mlp");

  int in_dim() const;
  int out_dim() const;
  int num_layers() const { return static_cast<int>(layers_.size()); }
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& layers() { return layers_; }

  Var forward(Tape& tape, const Var& x);
  std::vector<Parameter*> parameters();

 private:
  std::vector<DenseLayer> layers_;
};

/// Elementwise upper bound on |d out / d in|: the product |W1| |W2| ... |WL|,
/// returned as [in, out]. Valid because every supported activation has
/// |act'| <= 1; GELU (peak slope about 1.13) is rejected.
Tensor jacobian_bound(const Mlp& mlp);

/// Exact Jacobian d out / d in at a single input, as [in, out], via reverse mode.
Tensor input_jacobian(Mlp& mlp, const Tensor& x);

}  // namespace coda::nn
