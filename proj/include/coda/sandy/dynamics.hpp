#pragma once

#include "coda/nn/mlp.hpp"
#include "coda/sandy/model.hpp"

namespace coda::sandy {

struct MlpDynamicsConfig {
  std::vector<int> hidden = {256, 256};
  nn::Activation activation = nn::Activation::Relu;

  void validate() const;
};

/// Plain MLP forward model, the network trained in the augmentation study.
class MlpDynamics final : public DynamicsModel {
 public:
  MlpDynamics(SpacePtr space, Standardizer in, Standardizer out, MlpDynamicsConfig config, std::uint64_t seed);

  std::string kind() const override { return "mlp"; }
  nn::Var forward(nn::Tape& tape, const nn::Var& x) override { return net_.forward(tape, x); }
  std::vector<nn::Parameter*> parameters() override { return net_.parameters(); }
  nlohmann::json hyper_json() const override;

  nn::Mlp& net() { return net_; }

 private:
  MlpDynamicsConfig config_;
  nn::Mlp net_;
};

}  // namespace coda::sandy
