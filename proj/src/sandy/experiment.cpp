#include "coda/sandy/experiment.hpp"

#include <cmath>
#include <sstream>

#include "coda/core/seed.hpp"
#include "coda/engine/coda.hpp"
#include "coda/engine/mask_provider.hpp"
#include "coda/envs/collect.hpp"
#include "coda/envs/synthetic_mp.hpp"

namespace coda::sandy {

namespace {

void say(const Logger& log, const std::string& msg) {
  if (log) log(msg);
}

Dataset to_dataset(const envs::LabeledData& d) { return make_dataset(d.transitions, d.masks); }

}  // namespace

std::shared_ptr<envs::Environment> make_environment(const std::string& name, std::uint64_t seed, double epsilon) {
  if (name == "stationary_mp" || name == "nonstationary_mp") {
    envs::SyntheticMPConfig c;
    c.weight_seed = seed;
    if (name == "nonstationary_mp") c.epsilon = epsilon;
    return std::make_shared<envs::SyntheticMP>(c);
  }
  if (name == "bouncing_ball") {
    envs::BouncingBallConfig c;
    c.seed = seed;
    return std::make_shared<envs::BouncingBall>(c);
  }
  throw std::invalid_argument("unknown environment '" + name + "'");
}

double default_reset_prob(const envs::Environment& env) {
  return dynamic_cast<const envs::SyntheticMP*>(&env) ? 1.0 : 0.05;
}

MaskData build_mask_data(const envs::Environment& env, int train, int val, int test, std::uint64_t seed) {
  const double reset = default_reset_prob(env);
  Rng r1(derive_seed(seed, 1)), r2(derive_seed(seed, 2)), r3(derive_seed(seed, 3));
  return {to_dataset(envs::collect(env, train, r1, reset)), to_dataset(envs::collect(env, val, r2, reset)),
          to_dataset(envs::collect(env, test, r3, reset))};
}

std::unique_ptr<MaskModel> make_mask_model(const std::string& kind, const Dataset& train, const MixtureConfig& mixture,
                                           const TransformerConfig& transformer, std::uint64_t seed) {
  auto in = Standardizer::fit(train.x);
  auto out = Standardizer::fit(train.y);
  if (kind == "mixture") return std::make_unique<MixtureModel>(train.space, in, out, mixture, seed);
  if (kind == "transformer") return std::make_unique<TransformerModel>(train.space, in, out, transformer, seed);
  throw std::invalid_argument("unknown mask model '" + kind + "'");
}

TrainConfig default_mixture_training() {
  TrainConfig t;
  t.reg = {1e-2, 1e-2, 0.0};
  t.max_epochs = 25;
  t.patience = 10;
  return t;
}

TrainConfig default_transformer_training() {
  TrainConfig t;
  t.max_epochs = 25;
  t.patience = 10;
  return t;
}

double MaskExperimentResult::mean_auc(const std::string& model) const {
  double s = 0.0;
  int n = 0;
  for (const auto& r : runs)
    if (r.model == model) s += r.auc, ++n;
  return n ? s / n : NAN;
}

double MaskExperimentResult::std_auc(const std::string& model) const {
  const double mu = mean_auc(model);
  double s = 0.0;
  int n = 0;
  for (const auto& r : runs)
    if (r.model == model) s += (r.auc - mu) * (r.auc - mu), ++n;
  return n > 1 ? std::sqrt(s / (n - 1)) : 0.0;
}

nlohmann::json MaskExperimentResult::to_json() const {
  nlohmann::json j;
  j["runs"] = nlohmann::json::array();
  std::vector<std::string> models;
  for (const auto& r : runs) {
    j["runs"].push_back({{"model", r.model},
                         {"seed", r.seed},
                         {"auc", r.auc},
                         {"epochs", r.training.curve.size()},
                         {"best_epoch", r.training.best_epoch},
                         {"best_val_mse", r.training.best_val_mse}});
    if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
  }
  for (const auto& m : models) j["summary"][m] = {{"mean_auc", mean_auc(m)}, {"std_auc", std_auc(m)}};
  return j;
}

MaskExperimentResult run_mask_experiment(const MaskExperimentConfig& config, const Logger& log) {
  if (config.seeds < 1) throw std::invalid_argument("mask experiment: need at least one seed");
  MaskExperimentResult result;
  for (int k = 0; k < config.seeds; ++k) {
    const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
    auto env = make_environment(config.env, seed, config.epsilon);
    const MaskData data = build_mask_data(*env, config.train, config.val, config.test, seed);
    for (const auto& kind : config.models) {
      auto model = make_mask_model(kind, data.train, config.mixture, config.transformer, derive_seed(seed, 7));
      TrainConfig tc = kind == "mixture" ? config.mixture_train : config.transformer_train;
      tc.seed = derive_seed(seed, 8);
      MaskRun run;
      run.model = kind;
      run.seed = seed;
      run.training = train_sandy(*model, data.train, data.val, tc);
      run.roc = roc_eval(*model, data.test);
      run.auc = run.roc.auc;
      if (config.keep_models) run.trained = std::move(model);
      std::ostringstream msg;
      msg << config.env << " " << kind << " run " << k << ": auc " << run.auc << " after "
          << run.training.curve.size() << " epochs (best val mse " << run.training.best_val_mse << ")";
      say(log, msg.str());
      result.runs.push_back(std::move(run));
    }
  }
  return result;
}

bool DynExperimentResult::all_ordered() const {
  return !seeds.empty() && std::all_of(seeds.begin(), seeds.end(), [](const auto& s) { return s.ordering(); });
}

bool DynExperimentResult::all_overfit(double margin) const {
  return !seeds.empty() &&
         std::all_of(seeds.begin(), seeds.end(), [&](const auto& s) { return s.baseline_overfits(margin); });
}

nlohmann::json DynExperimentResult::to_json() const {
  auto arm = [](const ArmResult& a) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& r : a.curve) curve.push_back({r.epoch, r.train_mse, r.val_mse});
    return nlohmann::json{{"train_size", a.train_size},
                          {"final_val_mse", a.final_val},
                          {"min_val_mse", a.min_val},
                          {"overfit_ratio", a.overfit_ratio()},
                          {"curve", curve}};
  };
  nlohmann::json j;
  j["seeds"] = nlohmann::json::array();
  for (const auto& s : seeds) {
    j["seeds"].push_back({{"seed", s.seed},
                          {"ordering_holds", s.ordering()},
                          {"baseline_overfits", s.baseline_overfits()},
                          {"identity_unique", s.identity_unique},
                          {"ground_truth_unique", s.ground_truth_unique},
                          {"baseline", arm(s.baseline)},
                          {"identity_coda", arm(s.identity)},
                          {"ground_truth_coda", arm(s.ground_truth)}});
  }
  j["all_ordered"] = all_ordered();
  j["all_overfit"] = all_overfit();
  return j;
}

DynExperimentResult coda_dynamics_experiment(const DynExperimentConfig& config, const Logger& log) {
  if (config.seeds < 1 || config.base < 2 || config.val < 1 || config.coda < 0) {
    throw std::invalid_argument("dynamics experiment: bad sizes");
  }
  auto env = std::make_shared<envs::BouncingBall>(config.env);
  DynExperimentResult result;
  for (int k = 0; k < config.seeds; ++k) {
    const std::uint64_t seed = derive_seed(config.seed, static_cast<std::uint64_t>(k));
    Rng base_rng(derive_seed(seed, 1)), val_rng(derive_seed(seed, 2));
    const auto base = envs::collect(*env, config.base, base_rng, 0.05);
    const auto val = envs::collect(*env, config.val, val_rng, 0.05);
    const Dataset base_set = make_dataset(base.transitions);
    const Dataset val_set = make_dataset(val.transitions);

    engine::CodaConfig cc;
    cc.seed = derive_seed(seed, 3);
    cc.relabel_reward = false;
    cc.threads = config.threads;
    engine::GroundTruthProvider gt(env);
    engine::IdentityProvider id;
    const auto gt_samples = engine::coda_augment(base.transitions, gt, nullptr, cc, config.coda);
    cc.seed = derive_seed(seed, 4);
    const auto id_samples = engine::coda_augment(base.transitions, id, nullptr, cc, config.coda);
    DynSeedResult sr;
    sr.seed = seed;
    sr.ground_truth_unique = gt_samples.size();
    sr.identity_unique = id_samples.size();
    if (gt_samples.size() < static_cast<std::size_t>(config.coda) ||
        id_samples.size() < static_cast<std::size_t>(config.coda)) {
      say(log, "warning: fewer unique counterfactuals than requested (ground truth " +
                   std::to_string(gt_samples.size()) + ", identity " + std::to_string(id_samples.size()) + ")");
    }

    const auto in = Standardizer::fit(base_set.x);
    const auto out = Standardizer::fit(base_set.y);
    auto train_arm = [&](const std::string& name, const Dataset& train) {
      MlpDynamics model(env->space(), in, out, config.model, derive_seed(seed, 5));
      TrainConfig tc;
      tc.lr = config.lr;
      tc.batch_size = config.batch_size;
      tc.max_epochs = config.epochs;
      tc.steps_per_epoch = config.steps_per_epoch;
      tc.patience = 0;
      tc.restore_best = false;
      tc.train_eval_rows = 2000;
      tc.seed = derive_seed(seed, 6);
      ArmResult arm;
      arm.name = name;
      arm.train_size = static_cast<std::size_t>(train.size());
      arm.curve = train_sandy(model, train, val_set, tc).curve;
      arm.final_val = arm.curve.back().val_mse;
      arm.min_val = arm.final_val;
      for (const auto& r : arm.curve) arm.min_val = std::min(arm.min_val, r.val_mse);
      std::ostringstream msg;
      msg << "seed " << k << " " << name << ": final val " << arm.final_val << ", min " << arm.min_val << ", n "
          << arm.train_size;
      say(log, msg.str());
      return arm;
    };
    sr.baseline = train_arm("baseline", base_set);
    sr.identity = train_arm("identity_coda", concat(base_set, make_dataset(id_samples)));
    sr.ground_truth = train_arm("ground_truth_coda", concat(base_set, make_dataset(gt_samples)));
    result.seeds.push_back(std::move(sr));
  }
  return result;
}

}  // namespace coda::sandy
