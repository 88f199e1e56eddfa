#pragma once

#include "coda/nn/attention.hpp"
#include "coda/sandy/model.hpp"

namespace coda::sandy {

struct TransformerConfig {
  int width = 32;  // token width
  int key_dim = 16;
  int hidden = 32;  // hidden layer of Q, K and V
  int blocks = 2;

  void validate() const;
};

/// One token per state and action component. Token k is a linear map of
/// component k's own features (plus a per-token offset), the tokens pass
/// through stacked single-head attention blocks without residual paths, and
/// a per-component head maps each state token back to its component. Action
/// tokens are discarded at the output.
///
/// The dependency score of next-state component i on node j is
/// (A_B ... A_1)[i, j].
class TransformerModel final : public MaskModel {
 public:
  TransformerModel(SpacePtr space, Standardizer in, Standardizer out, TransformerConfig config, std::uint64_t seed);

  std::string kind() const override { return "transformer"; }
  nn::Var forward(nn::Tape& tape, const nn::Var& x) override;
  std::vector<nn::Parameter*> parameters() override;
  nlohmann::json hyper_json() const override;
  std::vector<Tensor> mask_scores(const Tensor& x_raw) override;

  const TransformerConfig& config() const { return config_; }
  std::vector<nn::AttentionBlock>& blocks() { return blocks_; }

  /// Prediction plus the attention matrix of every block, each [B, N, N].
  struct Pass {
    nn::Var prediction;
    std::vector<nn::Var> attention;
  };
  Pass run(nn::Tape& tape, const nn::Var& x);

 private:
  TransformerConfig config_;
  std::vector<nn::Parameter> embed_w_, embed_b_;  // per node
  std::vector<nn::AttentionBlock> blocks_;
  std::vector<nn::Parameter> head_w_, head_b_;  // per state component
};

/// Product A_B ... A_1 of square attention matrices (all [N, N]).
Tensor attention_product(const std::vector<Tensor>& attention);

}  // namespace coda::sandy
