#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "coda/io/config.hpp"

namespace coda::cli {

using Log = std::function<void(const std::string&)>;

/// Machine-readable report plus whether every asserted property held.
struct Outcome {
  nlohmann::json report;
  bool ok = true;
};

struct GenOptions {
  std::string out;  // dataset path (required)
  std::optional<int> count;
  int val = 0;          // the last `val` transitions go to a second file
  std::string val_out;  // default: out with "_val" before the extension
};

struct AugmentOptions {
  std::string data;  // input dataset
  std::string out;   // augmented dataset (required)
  std::optional<std::string> provider;
  std::optional<std::string> checkpoint;
  std::optional<double> tau;
  std::optional<std::size_t> target;
};

struct TrainMaskOptions {
  std::string out;  // artifact directory; empty writes nothing
  std::vector<std::string> models;
  std::optional<int> seeds;
  std::optional<double> min_auc;
};

struct EvalMaskOptions {
  std::string data;
  std::string out;
  std::string checkpoint;  // learned scores; otherwise `provider` scores as 0/1
  std::string provider = "ground_truth";
  std::optional<double> min_auc;
};

struct TrainDynOptions {
  std::string out;
  std::optional<int> seeds;
};

struct VerifyScmOptions {
  std::optional<int> instances;
};

struct RolloutOptions {
  std::string checkpoint;
  std::string out;
  int steps = 50;
};

Outcome cmd_gen(const io::RunConfig& config, const GenOptions& opt, const Log& log = nullptr);
Outcome cmd_augment(const io::RunConfig& config, const AugmentOptions& opt, const Log& log = nullptr);
Outcome cmd_train_mask(const io::RunConfig& config, const TrainMaskOptions& opt, const Log& log = nullptr);
Outcome cmd_eval_mask(const io::RunConfig& config, const EvalMaskOptions& opt, const Log& log = nullptr);
Outcome cmd_train_dyn(const io::RunConfig& config, const TrainDynOptions& opt, const Log& log = nullptr);
Outcome cmd_verify_scm(const io::RunConfig& config, const VerifyScmOptions& opt, const Log& log = nullptr);
Outcome cmd_rollout(const io::RunConfig& config, const RolloutOptions& opt, const Log& log = nullptr);

}  // namespace coda::cli
