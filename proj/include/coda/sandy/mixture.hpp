#pragma once

#include "coda/nn/mlp.hpp"
#include "coda/sandy/model.hpp"

namespace coda::sandy {

struct MixtureConfig {
  int experts = 8;
  std::vector<int> expert_hidden = {64, 64};
  std::vector<int> gate_hidden = {64};
  nn::Activation expert_activation = nn::Activation::Tanh;  // must satisfy |act'| <= 1

  void validate() const;
};

/// h(s, a) = sum_i alpha_i(s, a) h_i(s, a) with tanh MLP experts and a
/// softmax gate. The local mask thresholds the gate-weighted sum of the
/// experts' Jacobian bounds.
class MixtureModel final : public MaskModel {
 public:
  MixtureModel(SpacePtr space, Standardizer in, Standardizer out, MixtureConfig config, std::uint64_t seed);

  std::string kind() const override { return "mixture"; }
  nn::Var forward(nn::Tape& tape, const nn::Var& x) override;
  nn::Var objective(nn::Tape& tape, const nn::Var& x, const nn::Var& y, const Regularization& reg) override;
  std::vector<nn::Parameter*> parameters() override;
  nlohmann::json hyper_json() const override;
  std::vector<Tensor> mask_scores(const Tensor& x_raw) override;

  const MixtureConfig& config() const { return config_; }
  std::vector<nn::Mlp>& experts() { return experts_; }
  nn::Mlp& gate() { return gate_; }

  /// Gate probabilities for raw inputs, [B, K].
  Tensor gate_probabilities(const Tensor& x_raw);
  /// Flat gate-weighted Jacobian bound for one raw input row, [in, out].
  Tensor flat_jacobian_bound(const Tensor& x_raw_row);

  /// S(theta) = (1/K) sum_i |J_i|_1 on the tape.
  nn::Var sparsity_term(nn::Tape& tape);
  /// R(phi): batch mean of sqrt(mean_j logit_j^2) over the pre-softmax gate outputs.
  static nn::Var gate_term(const nn::Var& logits);

 private:
  struct Pass {
    nn::Var prediction;
    nn::Var logits;
  };
  Pass run(nn::Tape& tape, const nn::Var& x);

  MixtureConfig config_;
  std::vector<nn::Mlp> experts_;
  nn::Mlp gate_;
};

/// sqrt(sum of squares of every parameter) on the tape.
nn::Var l2_term(nn::Tape& tape, const std::vector<nn::Parameter*>& params);

}  // namespace coda::sandy
