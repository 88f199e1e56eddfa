#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "coda/core/reward.hpp"
#include "coda/engine/coda.hpp"
#include "coda/envs/bouncing_ball.hpp"
#include "coda/envs/synthetic_mp.hpp"
#include "coda/envs/two_room.hpp"
#include "coda/scm/builders.hpp"
#include "coda/sandy/experiment.hpp"

namespace coda::io {

/// Bad run configuration. The message starts with the dotted key path.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct EnvSection {
  std::string name = "bouncing_ball";  // bouncing_ball, stationary_mp, nonstationary_mp, two_room
  envs::BouncingBallConfig ball;
  envs::SyntheticMPConfig mp;
  envs::TwoRoomConfig room;
};

struct TaskSection {
  bool enabled = false;  // only the sprite world has a task
  envs::PlaceTask place;
};

struct DataSection {
  int count = 50000;
  std::optional<double> reset_prob;  // unset: the environment's default
};

struct CodaSection {
  std::string provider = "ground_truth";  // ground_truth, identity, heuristic, learned
  engine::CodaConfig engine;
  std::size_t target = 0;  // 0: a single round
  int max_rounds = 1000;
  double threshold = 0.25;  // heuristic provider
  double tau = 0.05;        // learned provider
  std::string checkpoint;   // learned provider
};

struct SandySection {
  sandy::MaskExperimentConfig mask;
  sandy::DynExperimentConfig dynamics;
  std::optional<double> min_auc;  // train-mask asserts mean AUC >= this when set
};

struct RunConfig {
  std::uint64_t seed = 0;
  int threads = 1;
  EnvSection env;
  TaskSection task;
  DataSection data;
  CodaSection coda;
  SandySection sandy;
  scm::CampaignConfig scm;
};

/// Strict parse: unknown keys and wrong types are errors. Missing keys keep
/// their defaults. "seed" and "threads" propagate into every section that
/// does not set its own.
RunConfig parse_run_config(const nlohmann::json& j);
RunConfig load_run_config(const std::string& path);
nlohmann::json to_json(const RunConfig& c);

/// Overrides the global seed and thread count and pushes them into every section.
void set_globals(RunConfig& c, std::optional<std::uint64_t> seed, std::optional<int> threads);

std::shared_ptr<envs::Environment> make_env(const EnvSection& env);
nlohmann::json env_to_json(const EnvSection& env);
EnvSection env_from_json(const nlohmann::json& j);
nlohmann::json task_to_json(const TaskSection& task);
TaskSection task_from_json(const nlohmann::json& j, const EnvSection& env);

/// Reward function of the task, or nullptr when there is none.
RewardFn make_reward(const TaskSection& task, const EnvSection& env);

}  // namespace coda::io
