#include <chrono>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"

#include "commands.hpp"

using namespace coda;

int main(int argc, char** argv) {
  CLI::App app{"Counterfactual data augmentation toolkit"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::string out;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Base seed (overrides the config)");
  app.add_option("--threads", threads, "Worker threads (1 is bit-deterministic)")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output dataset (gen, augment) or artifact directory");

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Collect random-policy transitions into a dataset");
  gen_cmd->add_option("--count", gen.count, "Number of transitions");
  gen_cmd->add_option("--val", gen.val, "Move the last N transitions to a validation file");
  gen_cmd->add_option("--val-out", gen.val_out, "Validation file path");

  cli::AugmentOptions aug;
  auto* aug_cmd = app.add_subcommand("augment", "Append counterfactual transitions to a dataset");
  aug_cmd->add_option("--data", aug.data, "Input dataset")->required()->check(CLI::ExistingFile);
  aug_cmd->add_option("--provider", aug.provider, "ground_truth, identity, heuristic or learned");
  aug_cmd->add_option("--checkpoint", aug.checkpoint, "Mask model for the learned provider");
  aug_cmd->add_option("--tau", aug.tau, "Mask threshold for the learned provider");
  aug_cmd->add_option("--target", aug.target, "Unique counterfactuals to produce (0: one round)");

  cli::TrainMaskOptions tm;
  auto* tm_cmd = app.add_subcommand("train-mask", "Train mask models and report held-out ROC");
  tm_cmd->add_option("--model", tm.models, "mixture and/or transformer")->delimiter(',');
  tm_cmd->add_option("--seeds", tm.seeds, "Independent runs");
  tm_cmd->add_option("--min-auc", tm.min_auc, "Assert mean AUC per model");

  cli::EvalMaskOptions em;
  auto* em_cmd = app.add_subcommand("eval-mask", "ROC of a mask model or provider on a dataset");
  em_cmd->add_option("--data", em.data, "Dataset with environment metadata")->required()->check(CLI::ExistingFile);
  em_cmd->add_option("--checkpoint", em.checkpoint, "Mask model checkpoint");
  em_cmd->add_option("--provider", em.provider, "Provider scored as 0/1 when no checkpoint is given");
  em_cmd->add_option("--min-auc", em.min_auc, "Assert AUC");

  cli::TrainDynOptions td;
  auto* td_cmd = app.add_subcommand("train-dyn", "Dynamics model with and without counterfactual data");
  td_cmd->add_option("--seeds", td.seeds, "Independent runs");

  cli::VerifyScmOptions vs;
  auto* vs_cmd = app.add_subcommand("verify-scm", "Brute-force check of the local independence results");
  vs_cmd->add_option("--instances", vs.instances, "Random SCMs");

  cli::RolloutOptions ro;
  auto* ro_cmd = app.add_subcommand("rollout", "Compare a model rollout against the environment");
  ro_cmd->add_option("--checkpoint", ro.checkpoint, "Model checkpoint")->required()->check(CLI::ExistingFile);
  ro_cmd->add_option("--steps", ro.steps, "Rollout length");

  CLI11_PARSE(app, argc, argv);

  const auto start = std::chrono::steady_clock::now();
  const cli::Log log = [start](const std::string& msg) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cerr << "[" << std::fixed << std::setprecision(1) << s << "s] " << msg << std::endl;
  };

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    io::RunConfig config = config_path.empty() ? io::parse_run_config(nlohmann::json::object())
                                               : io::load_run_config(config_path);
    io::set_globals(config, seed, threads);

    cli::Outcome result;
    if (*gen_cmd) {
      gen.out = out;
      result = cli::cmd_gen(config, gen, log);
    } else if (*aug_cmd) {
      aug.out = out;
      result = cli::cmd_augment(config, aug, log);
    } else if (*tm_cmd) {
      tm.out = out;
      result = cli::cmd_train_mask(config, tm, log);
    } else if (*em_cmd) {
      em.out = out;
      result = cli::cmd_eval_mask(config, em, log);
    } else if (*td_cmd) {
      td.out = out;
      result = cli::cmd_train_dyn(config, td, log);
    } else if (*vs_cmd) {
      result = cli::cmd_verify_scm(config, vs, log);
    } else {
      ro.out = out;
      result = cli::cmd_rollout(config, ro, log);
    }
    result.report["ok"] = result.ok;
    std::cout << result.report.dump(2) << std::endl;
    if (!result.ok) log(name + ": an asserted property does not hold");
    return result.ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cout << nlohmann::json{{"command", name}, {"ok", false}, {"error", e.what()}}.dump(2) << std::endl;
    log(name + " failed: " + e.what());
    return 2;
  }
}
