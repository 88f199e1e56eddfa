#include "coda/sandy/dynamics.hpp"

namespace coda::sandy {

void MlpDynamicsConfig::validate() const {
  for (int h : hidden)
    if (h < 1) throw std::invalid_argument("mlp dynamics: hidden widths must be positive");
}

MlpDynamics::MlpDynamics(SpacePtr space, Standardizer in, Standardizer out, MlpDynamicsConfig config,
                         std::uint64_t seed)
    : DynamicsModel(std::move(space), std::move(in), std::move(out)), config_(std::move(config)) {
  config_.validate();
  std::vector<int> sizes{in_dim()};
  sizes.insert(sizes.end(), config_.hidden.begin(), config_.hidden.end());
  sizes.push_back(out_dim());
  std::mt19937_64 rng(seed);
  net_ = nn::Mlp(sizes, config_.activation, nn::Activation::Identity, rng, "dyn");
}

nlohmann::json MlpDynamics::hyper_json() const {
  return {{"hidden", config_.hidden}, {"activation", nn::to_string(config_.activation)}};
}

}  // namespace coda::sandy
