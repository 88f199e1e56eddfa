#pragma once

#include <random>
#include <string>
#include <vector>

#include "coda/nn/mlp.hpp"

namespace coda::nn {

struct AttentionConfig {
  int in_dim = 16;
  int key_dim = 16;
  int value_dim = 16;
  int hidden = 32;  // width of the hidden layer inside Q, K and V
};

/// Single-head self-attention over a set of vectors. Q, K and V are
/// two-layer MLPs applied to each element; attention weights are the softmax
/// over j of <Q(x_i), K(x_j)> / sqrt(key_dim), and y_i = sum_j A_ij V(x_j).
class AttentionBlock {
 public:
  struct Output {
    Var y;  // [B, N, value_dim]
    Var a;  // [B, N, N], rows sum to 1
  };

  AttentionBlock() = default;
  AttentionBlock(const AttentionConfig& config, std::mt19937_64& rng, const std::string& name = "attn");

  /// x is [B, N, in_dim] or a single set [N, in_dim] (treated as B = 1).
  Output forward(Tape& tape, const Var& x);

  const AttentionConfig& config() const { return config_; }
  Mlp& query() { return q_; }
  Mlp& key() { return k_; }
  Mlp& value() { return v_; }
  std::vector<Parameter*> parameters();

 private:
  AttentionConfig config_;
  Mlp q_, k_, v_;
};

}  // namespace coda::nn
