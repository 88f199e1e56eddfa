#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "coda/core/seed.hpp"
#include "coda/engine/coda.hpp"
#include "coda/engine/mask_provider.hpp"
#include "coda/envs/collect.hpp"
#include "coda/io/dataset.hpp"
#include "coda/sandy/learned_provider.hpp"
#include "coda/sandy/rollout.hpp"
#include "coda/scm/builders.hpp"

namespace coda::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Stream tags that keep the sub-seeds of different commands apart.
constexpr std::uint64_t kGenStream = 101;
constexpr std::uint64_t kRolloutStream = 102;

void say(const Log& log, const std::string& msg) {
  if (log) log(msg);
}

fs::path artifact_dir(const std::string& out) {
  fs::path dir(out);
  fs::create_directories(dir);
  return dir;
}

template <class F>
void write_text(const fs::path& path, F&& body) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  body(f);
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string default_val_path(const std::string& out) {
  fs::path p(out);
  return (p.parent_path() / (p.stem().string() + "_val" + p.extension().string())).string();
}

json provenance_counts(const std::vector<Transition>& ts) {
  std::int64_t counts[3] = {0, 0, 0};
  for (const auto& t : ts) ++counts[static_cast<int>(t.provenance)];
  return {{"real", counts[0]}, {"coda", counts[1]}, {"identity_coda", counts[2]}};
}

json assertion(const std::string& name, double value, bool holds) {
  return {{"name", name}, {"value", value}, {"holds", holds}};
}

// The environment that produced a dataset, from its metadata.
io::EnvSection dataset_env(const io::DatasetFile& d) {
  if (!d.meta.contains("env")) throw std::invalid_argument("dataset carries no environment metadata");
  auto env = io::env_from_json(d.meta.at("env"));
  if (!(*io::make_env(env)->space() == *d.space)) {
    throw std::invalid_argument("dataset space does not match its recorded environment");
  }
  return env;
}

std::shared_ptr<sandy::MaskModel> load_mask_model(const std::string& path) {
  std::shared_ptr<sandy::DynamicsModel> m = sandy::load_model(path);
  auto mask = std::dynamic_pointer_cast<sandy::MaskModel>(m);
  if (!mask) throw std::invalid_argument("checkpoint '" + path + "' holds a '" + m->kind() + "' model without masks");
  return mask;
}

std::shared_ptr<engine::MaskProvider> make_provider(const std::string& name, const io::DatasetFile& data,
                                                    const io::CodaSection& coda) {
  if (name == "identity") return std::make_shared<engine::IdentityProvider>();
  if (name == "ground_truth") return std::make_shared<engine::GroundTruthProvider>(io::make_env(dataset_env(data)));
  if (name == "heuristic") {
    return std::make_shared<engine::DistanceHeuristicProvider>(
        coda.threshold, engine::PositionLayout::leading_xy(data.space->num_state_components()));
  }
  if (name == "learned") {
    if (coda.checkpoint.empty()) throw std::invalid_argument("the learned provider needs --checkpoint");
    return std::make_shared<sandy::LearnedProvider>(load_mask_model(coda.checkpoint), coda.tau);
  }
  throw std::invalid_argument("unknown provider '" + name + "'");
}

}  // namespace

Outcome cmd_gen(const io::RunConfig& config, const GenOptions& opt, const Log& log) {
  if (opt.out.empty()) throw std::invalid_argument("gen: --out is required");
  const int count = opt.count.value_or(config.data.count);
  if (count < 0) throw std::invalid_argument("gen: count must be non-negative");
  if (opt.val < 0 || opt.val > count) throw std::invalid_argument("gen: --val must be in [0, count]");
  auto env = io::make_env(config.env);
  const auto reward = io::make_reward(config.task, config.env);
  const double reset = config.data.reset_prob.value_or(sandy::default_reset_prob(*env));

  Rng rng(derive_seed(config.seed, kGenStream));
  auto data = envs::collect(*env, count, rng, reset, reward);
  say(log, "gen: collected " + std::to_string(count) + " transitions from " + env->name());

  const json meta = {{"env", io::env_to_json(config.env)},
                     {"task", io::task_to_json(config.task)},
                     {"seed", config.seed},
                     {"reset_prob", reset}};
  io::DatasetFile train{env->space(), meta, {}};
  io::DatasetFile val{env->space(), meta, {}};
  const std::size_t split = static_cast<std::size_t>(count - opt.val);
  train.transitions.assign(data.transitions.begin(), data.transitions.begin() + split);
  val.transitions.assign(data.transitions.begin() + split, data.transitions.end());
  train.meta["split"] = "train";
  val.meta["split"] = "val";

  json files = json::array();
  io::save_dataset(opt.out, train);
  files.push_back({{"path", opt.out}, {"count", train.transitions.size()}});
  if (opt.val > 0) {
    const std::string vpath = opt.val_out.empty() ? default_val_path(opt.out) : opt.val_out;
    io::save_dataset(vpath, val);
    files.push_back({{"path", vpath}, {"count", val.transitions.size()}});
  }

  double reward_sum = 0.0;
  std::int64_t terminals = 0;
  for (const auto& t : data.transitions) reward_sum += t.reward, terminals += t.terminal;
  Outcome o;
  o.report = {{"command", "gen"},
              {"env", meta["env"]},
              {"task", meta["task"]},
              {"seed", config.seed},
              {"reset_prob", reset},
              {"count", count},
              {"files", files},
              {"mean_reward", count ? reward_sum / count : 0.0},
              {"terminals", terminals}};
  return o;
}

Outcome cmd_augment(const io::RunConfig& config, const AugmentOptions& opt, const Log& log) {
  if (opt.data.empty() || opt.out.empty()) throw std::invalid_argument("augment: --data and --out are required");
  const auto input = io::load_dataset(opt.data);
  io::CodaSection coda = config.coda;
  if (opt.provider) coda.provider = *opt.provider;
  if (opt.checkpoint) coda.checkpoint = *opt.checkpoint;
  if (opt.tau) coda.tau = *opt.tau;
  const std::size_t target = opt.target.value_or(coda.target);
  const auto provider = make_provider(coda.provider, input, coda);

  RewardFn reward;
  if (coda.engine.relabel_reward && input.meta.contains("task")) {
    const auto env = dataset_env(input);
    reward = io::make_reward(io::task_from_json(input.meta.at("task"), env), env);
  }

  std::vector<Transition> real;
  for (const auto& t : input.transitions)
    if (t.provenance == Provenance::Real) real.push_back(t);
  if (real.size() < 2) throw std::invalid_argument("augment: need at least two real transitions");

  engine::BatchStats stats;
  std::vector<Transition> made;
  if (target == 0) {
    made = engine::coda_augment(real, *provider, reward, coda.engine, SIZE_MAX, 1, &stats);
  } else {
    made = engine::coda_augment(real, *provider, reward, coda.engine, target, coda.max_rounds, &stats);
  }
  say(log, "augment: " + std::to_string(made.size()) + " unique counterfactuals from " +
               std::to_string(stats.pairs) + " pairs with provider " + provider->name());

  io::DatasetFile out{input.space, input.meta, input.transitions};
  out.meta["augment"] = {{"provider", coda.provider}, {"seed", coda.engine.seed}, {"source", opt.data}};
  out.transitions.insert(out.transitions.end(), made.begin(), made.end());
  io::save_dataset(opt.out, out);

  Outcome o;
  o.ok = target == 0 || made.size() >= target;
  o.report = {{"command", "augment"},
              {"provider", provider->name()},
              {"seed", coda.engine.seed},
              {"input", opt.data},
              {"output", opt.out},
              {"real", real.size()},
              {"pairs", stats.pairs},
              {"proposals", stats.proposals},
              {"accepted", stats.accepted},
              {"empty_families", stats.empty_families},
              {"acceptance_rate", stats.acceptance_rate()},
              {"unique", made.size()},
              {"target", target},
              {"provenance", provenance_counts(out.transitions)},
              {"assertions", json::array({assertion("unique >= target", static_cast<double>(made.size()), o.ok)})}};
  return o;
}

Outcome cmd_train_mask(const io::RunConfig& config, const TrainMaskOptions& opt, const Log& log) {
  sandy::MaskExperimentConfig m = config.sandy.mask;
  if (!opt.models.empty()) m.models = opt.models;
  if (opt.seeds) m.seeds = *opt.seeds;
  m.keep_models = !opt.out.empty();
  const auto min_auc = opt.min_auc ? opt.min_auc : config.sandy.min_auc;

  const auto result = sandy::run_mask_experiment(m, log);
  Outcome o;
  o.report = {{"command", "train-mask"}, {"env", m.env}, {"seed", m.seed}, {"result", result.to_json()}};
  json checks = json::array();
  if (min_auc) {
    for (const auto& model : m.models) {
      const double auc = result.mean_auc(model);
      const bool holds = auc >= *min_auc;
      std::ostringstream name;
      name << "mean_auc(" << model << ") >= " << *min_auc;
      checks.push_back(assertion(name.str(), auc, holds));
      o.ok = o.ok && holds;
    }
  }
  o.report["assertions"] = checks;

  if (!opt.out.empty()) {
    const auto dir = artifact_dir(opt.out);
    std::map<std::string, int> index;
    for (const auto& run : result.runs) {
      const std::string stem = run.model + "_run" + std::to_string(index[run.model]++);
      sandy::save_model((dir / (stem + ".ckpt")).string(), *run.trained);
      write_text(dir / (stem + "_curve.csv"), [&](std::ostream& f) { sandy::write_curve_csv(f, run.training.curve); });
      write_text(dir / (stem + "_roc.csv"), [&](std::ostream& f) { sandy::write_roc_csv(f, run.roc); });
    }
    write_text(dir / "report.json", [&](std::ostream& f) { f << o.report.dump(2) << "\n"; });
  }
  return o;
}

Outcome cmd_eval_mask(const io::RunConfig& config, const EvalMaskOptions& opt, const Log& log) {
  if (opt.data.empty()) throw std::invalid_argument("eval-mask: --data is required");
  const auto data = io::load_dataset(opt.data);
  if (data.transitions.empty()) throw std::invalid_argument("eval-mask: the dataset is empty");
  const auto env = io::make_env(dataset_env(data));

  std::vector<LocalMask> truth;
  truth.reserve(data.transitions.size());
  for (const auto& t : data.transitions) truth.push_back(env->mask(t.s, t.a));

  sandy::RocResult roc;
  std::string source;
  if (!opt.checkpoint.empty()) {
    auto model = load_mask_model(opt.checkpoint);
    if (!(*model->space() == *data.space)) throw std::invalid_argument("checkpoint space does not match the dataset");
    source = "checkpoint:" + model->kind();
    roc = sandy::roc_eval(*model, sandy::make_dataset(data.transitions, truth));
  } else {
    io::CodaSection coda = config.coda;
    const auto provider = make_provider(opt.provider, data, coda);
    source = "provider:" + provider->name();
    std::vector<double> scores;
    std::vector<std::uint8_t> labels;
    for (std::size_t i = 0; i < data.transitions.size(); ++i) {
      const auto& t = data.transitions[i];
      const LocalMask pred = provider->mask(t.s, t.a);
      for (int r = 0; r < pred.rows(); ++r) {
        for (int c = 0; c < pred.cols(); ++c) {
          scores.push_back(pred(r, c) ? 1.0 : 0.0);
          labels.push_back(truth[i](r, c) ? 1 : 0);
        }
      }
    }
    roc = sandy::roc_from_scores(scores, labels, sandy::default_tau_grid(1.0));
  }
  say(log, "eval-mask: " + source + " auc " + std::to_string(roc.auc));

  Outcome o;
  json checks = json::array();
  if (opt.min_auc) {
    o.ok = roc.auc >= *opt.min_auc;
    std::ostringstream name;
    name << "auc >= " << *opt.min_auc;
    checks.push_back(assertion(name.str(), roc.auc, o.ok));
  }
  o.report = {{"command", "eval-mask"},
              {"data", opt.data},
              {"source", source},
              {"auc", roc.auc},
              {"positives", roc.positives},
              {"negatives", roc.negatives},
              {"operating_points", roc.points.size()},
              {"assertions", checks}};
  if (!opt.out.empty()) {
    const auto dir = artifact_dir(opt.out);
    write_text(dir / "roc.csv", [&](std::ostream& f) { sandy::write_roc_csv(f, roc); });
  }
  return o;
}

Outcome cmd_train_dyn(const io::RunConfig& config, const TrainDynOptions& opt, const Log& log) {
  sandy::DynExperimentConfig d = config.sandy.dynamics;
  if (opt.seeds) d.seeds = *opt.seeds;
  const auto result = sandy::coda_dynamics_experiment(d, log);

  Outcome o;
  o.ok = result.all_ordered() && result.all_overfit();
  json checks = json::array();
  for (const auto& s : result.seeds) {
    const std::string tag = "seed " + std::to_string(s.seed) + ": ";
    checks.push_back(assertion(tag + "ground_truth < identity < baseline", s.ground_truth.final_val, s.ordering()));
    checks.push_back(
        assertion(tag + "baseline final / min val mse - 1 >= 0.10", s.baseline.overfit_ratio(), s.baseline_overfits()));
  }
  o.report = {{"command", "train-dyn"}, {"result", result.to_json()}, {"assertions", checks}};

  if (!opt.out.empty()) {
    const auto dir = artifact_dir(opt.out);
    for (std::size_t k = 0; k < result.seeds.size(); ++k) {
      const auto& s = result.seeds[k];
      for (const auto* arm : {&s.baseline, &s.identity, &s.ground_truth}) {
        const auto name = arm->name + "_seed" + std::to_string(k) + "_curve.csv";
        write_text(dir / name, [&](std::ostream& f) { sandy::write_curve_csv(f, arm->curve); });
      }
    }
    write_text(dir / "report.json", [&](std::ostream& f) { f << o.report.dump(2) << "\n"; });
  }
  return o;
}

Outcome cmd_verify_scm(const io::RunConfig& config, const VerifyScmOptions& opt, const Log& log) {
  scm::CampaignConfig c = config.scm;
  if (opt.instances) c.instances = *opt.instances;
  if (c.instances < 1) throw std::invalid_argument("verify-scm: --instances must be positive");
  const auto r = scm::run_prop1_campaign(c);
  auto frac = [&](int k) { return std::to_string(k) + "/" + std::to_string(r.instances); };
  say(log, "prop1: " + frac(r.prop1_holds));
  say(log, "lemma1: " + frac(r.lemma1_holds));
  say(log, "corollary1: " + frac(r.corollary_holds));

  Outcome o;
  o.ok = r.prop1_holds == r.instances && r.lemma1_holds == r.instances && r.corollary_holds == r.instances;
  o.report = {{"command", "verify-scm"},
              {"seed", c.seed},
              {"instances", r.instances},
              {"prop1", frac(r.prop1_holds)},
              {"lemma1", frac(r.lemma1_holds)},
              {"corollary1", frac(r.corollary_holds)},
              {"coverage",
               {{"union_independent", r.union_independent},
                {"both_local_independent", r.both_local_independent},
                {"local_independent_but_union_not", r.local_independent_but_union_not},
                {"strict_sparsity", r.strict_sparsity}}},
              {"failing_seeds", r.failing_seeds}};
  return o;
}

Outcome cmd_rollout(const io::RunConfig& config, const RolloutOptions& opt, const Log& log) {
  if (opt.checkpoint.empty()) throw std::invalid_argument("rollout: --checkpoint is required");
  if (opt.steps < 0) throw std::invalid_argument("rollout: --steps must be non-negative");
  auto model = sandy::load_model(opt.checkpoint);
  auto env = io::make_env(config.env);
  if (!(*model->space() == *env->space())) throw std::invalid_argument("checkpoint space does not match the environment");

  Rng rng(derive_seed(config.seed, kRolloutStream));
  const auto s0 = env->reset(rng);
  std::vector<FactoredVector> actions;
  for (int t = 0; t < opt.steps; ++t) actions.push_back(env->sample_action(rng));

  Outcome o;
  o.report = {{"command", "rollout"}, {"model", model->kind()}, {"env", env->name()}, {"steps", opt.steps},
              {"seed", config.seed}};
  try {
    const auto cmp = sandy::compare_rollout(*model, *env, s0, actions);
    double max_err = 0.0;
    int collisions = 0;
    for (double e : cmp.l2_error) max_err = std::max(max_err, e);
    for (int c : cmp.true_collisions) collisions += c;
    o.report["final_l2_error"] = cmp.l2_error.back();
    o.report["max_l2_error"] = max_err;
    o.report["true_collisions"] = collisions;
    o.report["l2_error"] = cmp.l2_error;
    if (!opt.out.empty()) {
      const auto dir = artifact_dir(opt.out);
      write_text(dir / "rollout.csv", [&](std::ostream& f) {
        f << "step,l2_error,true_collisions\n";
        for (std::size_t t = 0; t < cmp.l2_error.size(); ++t) {
          f << t << "," << cmp.l2_error[t] << "," << (t < cmp.true_collisions.size() ? cmp.true_collisions[t] : 0)
            << "\n";
        }
      });
    }
    say(log, "rollout: final l2 error " + std::to_string(cmp.l2_error.back()));
  } catch (const sandy::RolloutError& e) {
    o.ok = false;
    o.report["error"] = {{"message", e.what()}, {"step", e.step()}};
  }
  return o;
}

}  // namespace coda::cli
