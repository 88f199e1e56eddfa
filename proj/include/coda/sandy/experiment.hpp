#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "coda/envs/bouncing_ball.hpp"
#include "coda/envs/environment.hpp"
#include "coda/sandy/dynamics.hpp"
#include "coda/sandy/mixture.hpp"
#include "coda/sandy/roc.hpp"
#include "coda/sandy/train.hpp"
#include "coda/sandy/transformer.hpp"

namespace coda::sandy {

using Logger = std::function<void(const std::string&)>;

/// "stationary_mp", "nonstationary_mp" (epsilon applies) or "bouncing_ball".
/// MP weights are drawn from `seed`.
std::shared_ptr<envs::Environment> make_environment(const std::string& name, std::uint64_t seed,
                                                    double epsilon = 1.5);

/// Reset probability used when collecting from `env`: the synthetic
/// processes are sampled i.i.d. from their prior, the sprite world follows a
/// random policy with 5% resets.
double default_reset_prob(const envs::Environment& env);

struct MaskData {
  Dataset train, val, test;
};

/// Disjoint train / validation / test sets with ground-truth masks.
MaskData build_mask_data(const envs::Environment& env, int train, int val, int test, std::uint64_t seed);

std::unique_ptr<MaskModel> make_mask_model(const std::string& kind, const Dataset& train, const MixtureConfig& mixture,
                                           const TransformerConfig& transformer, std::uint64_t seed);

/// Mask-model training used by the experiments: Adam at 1e-3, batch 128,
/// early stopping on validation MSE. The mixture adds its three penalties.
TrainConfig default_mixture_training();
TrainConfig default_transformer_training();

struct MaskExperimentConfig {
  std::string env = "stationary_mp";
  std::vector<std::string> models = {"mixture"};
  int train = 40000;
  int val = 10000;
  int test = 10000;
  int seeds = 5;
  std::uint64_t seed = 0;
  double epsilon = 1.5;
  MixtureConfig mixture;
  TransformerConfig transformer;
  TrainConfig mixture_train = default_mixture_training();
  TrainConfig transformer_train = default_transformer_training();
  bool keep_models = false;  // keep each trained network in its MaskRun
};

struct MaskRun {
  std::string model;
  std::uint64_t seed = 0;
  double auc = 0.0;
  TrainResult training;
  RocResult roc;
  std::shared_ptr<MaskModel> trained;
};

struct MaskExperimentResult {
  std::vector<MaskRun> runs;
  double mean_auc(const std::string& model) const;
  double std_auc(const std::string& model) const;
  nlohmann::json to_json() const;
};

/// For each seed: fresh environment and data, then every listed model is
/// trained on the same data and scored on the same held-out set.
MaskExperimentResult run_mask_experiment(const MaskExperimentConfig& config, const Logger& log = nullptr);

struct DynExperimentConfig {
  int base = 2000;
  int coda = 35000;
  int val = 5000;
  int seeds = 3;
  std::uint64_t seed = 0;
  int epochs = 30;
  int steps_per_epoch = 100;
  int batch_size = 128;
  double lr = 1e-3;
  int threads = 1;
  MlpDynamicsConfig model;
  envs::BouncingBallConfig env;
};

struct ArmResult {
  std::string name;
  std::size_t train_size = 0;
  std::vector<EpochRecord> curve;
  double final_val = 0.0;
  double min_val = 0.0;
  double overfit_ratio() const { return min_val > 0 ? final_val / min_val - 1.0 : 0.0; }
};

struct DynSeedResult {
  std::uint64_t seed = 0;
  ArmResult baseline, identity, ground_truth;
  std::size_t identity_unique = 0;
  std::size_t ground_truth_unique = 0;
  bool ordering() const {
    return ground_truth.final_val < identity.final_val && identity.final_val < baseline.final_val;
  }
  bool baseline_overfits(double margin = 0.10) const { return baseline.overfit_ratio() >= margin; }
};

struct DynExperimentResult {
  std::vector<DynSeedResult> seeds;
  bool all_ordered() const;
  bool all_overfit(double margin = 0.10) const;
  nlohmann::json to_json() const;
};

/// Trains the same MLP on (a) the base set, (b) base plus identity-mask
/// counterfactuals, (c) base plus ground-truth-mask counterfactuals, with a
/// shared standardizer and an equal number of gradient steps per arm.
DynExperimentResult coda_dynamics_experiment(const DynExperimentConfig& config, const Logger& log = nullptr);

}  // namespace coda::sandy
