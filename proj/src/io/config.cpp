#include "coda/io/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <type_traits>

namespace coda::io {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw ConfigError(path + ": " + msg); }

template <class T>
struct is_vector : std::false_type {};
template <class T>
struct is_vector<std::vector<T>> : std::true_type {};

template <class T>
T convert(const json& v, const std::string& path) {
  if constexpr (std::is_same_v<T, bool>) {
    if (!v.is_boolean()) fail(path, "expected a boolean");
    return v.get<bool>();
  } else if constexpr (std::is_same_v<T, std::string>) {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  } else if constexpr (std::is_floating_point_v<T>) {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<T>();
  } else if constexpr (std::is_unsigned_v<T>) {
    if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
      fail(path, "expected a non-negative integer");
    }
    return v.get<T>();
  } else if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const auto x = v.get<std::int64_t>();
    if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) fail(path, "out of range");
    return static_cast<T>(x);
  } else if constexpr (is_vector<T>::value) {
    if (!v.is_array()) fail(path, "expected an array");
    T out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      out.push_back(convert<typename T::value_type>(v[i], path + "[" + std::to_string(i) + "]"));
    }
    return out;
  } else {
    static_assert(sizeof(T) == 0, "unsupported config type");
  }
}

// Object reader that remembers which keys were consumed, so anything left
// over can be reported as unknown.
class Obj {
 public:
  Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail(path_.empty() ? "<root>" : path_, "expected an object");
  }

  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void get(const std::string& key, T& dst) {
    seen_.insert(key);
    if (j_.contains(key)) dst = convert<T>(j_.at(key), at(key));
  }

  template <class T>
  void get(const std::string& key, std::optional<T>& dst) {
    seen_.insert(key);
    if (!j_.contains(key)) return;
    if (j_.at(key).is_null()) {
      dst.reset();
    } else {
      dst = convert<T>(j_.at(key), at(key));
    }
  }

  void activation(const std::string& key, nn::Activation& dst) {
    std::string name = nn::to_string(dst);
    get(key, name);
    try {
      dst = nn::activation_from_string(name);
    } catch (const std::exception& e) {
      fail(at(key), e.what());
    }
  }

  /// Sub-object, or an empty object when the key is absent.
  Obj sub(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) ? Obj(j_.at(key), at(key)) : Obj(empty(), at(key));
  }

  void done() const {
    for (const auto& [k, v] : j_.items()) {
      if (!seen_.count(k)) fail(at(k), "unknown key");
    }
  }

 private:
  static const json& empty() {
    static const json e = json::object();
    return e;
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class F>
void checked(const std::string& path, F&& validate) {
  try {
    validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

bool is_mp(const std::string& name) { return name == "stationary_mp" || name == "nonstationary_mp"; }

EnvSection read_env(Obj o) {
  EnvSection e;
  o.get("name", e.name);
  if (e.name == "bouncing_ball") {
    auto& b = e.ball;
    o.get("num_sprites", b.num_sprites);
    o.get("sprite_radius", b.sprite_radius);
    o.get("max_speed", b.max_speed);
    o.get("action_gain", b.action_gain);
    o.get("collision_margin", b.collision_margin);
    o.get("seed", b.seed);
    checked(o.at("name"), [&] { b.validate(); });
  } else if (is_mp(e.name)) {
    auto& m = e.mp;
    o.get("block_dims", m.block_dims);
    o.get("hidden_units", m.hidden_units);
    o.get("weight_seed", m.weight_seed);
    o.get("probe_samples", m.probe_samples);
    if (e.name == "nonstationary_mp") {
      double eps = 1.5;
      o.get("epsilon", eps);
      m.epsilon = eps;
    }
    checked(o.at("name"), [&] { m.validate(); });
  } else if (e.name == "two_room") {
    auto& r = e.room;
    o.get("room_boundary", r.room_boundary);
    o.get("world_width", r.world_width);
    o.get("friction_normal", r.friction_normal);
    o.get("friction_icy", r.friction_icy);
    o.get("drying_rate", r.drying_rate);
    o.get("freezing_rate", r.freezing_rate);
    o.get("max_push", r.max_push);
    checked(o.at("name"), [&] { r.validate(); });
  } else {
    fail(o.at("name"), "unknown environment '" + e.name + "'");
  }
  o.done();
  return e;
}

TaskSection read_task(Obj o, const EnvSection& env) {
  TaskSection t;
  std::string kind = "none";
  o.get("kind", kind);
  if (kind == "none") {
    o.done();
    return t;
  }
  if (kind == "partial") {
    t.place.kind = envs::PlaceKind::Partial;
  } else if (kind == "sparse") {
    t.place.kind = envs::PlaceKind::Sparse;
  } else {
    fail(o.at("kind"), "expected none, partial or sparse");
  }
  if (env.name != "bouncing_ball") fail(o.at("kind"), "place tasks need the bouncing_ball environment");
  t.enabled = true;
  o.get("n", t.place.n);
  o.get("tolerance", t.place.tolerance);
  o.get("terminal_on_success", t.place.terminal_on_success);
  std::vector<std::vector<double>> targets;
  o.get("targets", targets);
  if (!targets.empty()) {
    t.place.targets.clear();
    for (const auto& p : targets) {
      if (p.size() != 2) fail(o.at("targets"), "each target is [x, y]");
      t.place.targets.emplace_back(p[0], p[1]);
    }
  }
  checked(o.at("n"), [&] { t.place.validate(env.ball.num_sprites); });
  o.done();
  return t;
}

DataSection read_data(Obj o) {
  DataSection d;
  o.get("count", d.count);
  o.get("reset_prob", d.reset_prob);
  if (d.count < 0) fail(o.at("count"), "must be non-negative");
  if (d.reset_prob && !(*d.reset_prob >= 0.0 && *d.reset_prob <= 1.0)) fail(o.at("reset_prob"), "must be in [0, 1]");
  o.done();
  return d;
}

CodaSection read_coda(Obj o) {
  CodaSection c;
  o.get("provider", c.provider);
  if (c.provider != "ground_truth" && c.provider != "identity" && c.provider != "heuristic" &&
      c.provider != "learned") {
    fail(o.at("provider"), "expected ground_truth, identity, heuristic or learned");
  }
  o.get("pairs_per_round", c.engine.pairs_per_round);
  o.get("max_samples_per_pair", c.engine.max_samples_per_pair);
  o.get("relabel_reward", c.engine.relabel_reward);
  o.get("require_proper_subset", c.engine.require_proper_subset);
  o.get("target", c.target);
  o.get("max_rounds", c.max_rounds);
  o.get("threshold", c.threshold);
  o.get("tau", c.tau);
  o.get("checkpoint", c.checkpoint);
  checked(o.at("pairs_per_round"), [&] { c.engine.validate(); });
  if (c.max_rounds < 1) fail(o.at("max_rounds"), "must be positive");
  if (!(c.threshold > 0.0)) fail(o.at("threshold"), "must be positive");
  if (c.provider == "learned" && c.checkpoint.empty()) fail(o.at("checkpoint"), "required by the learned provider");
  o.done();
  return c;
}

void read_train(Obj o, sandy::TrainConfig& t) {
  o.get("lambda1", t.reg.lambda1);
  o.get("lambda2", t.reg.lambda2);
  o.get("lambda3", t.reg.lambda3);
  o.get("lr", t.lr);
  o.get("batch_size", t.batch_size);
  o.get("max_epochs", t.max_epochs);
  o.get("patience", t.patience);
  o.get("steps_per_epoch", t.steps_per_epoch);
  o.get("train_eval_rows", t.train_eval_rows);
  o.get("restore_best", t.restore_best);
  o.get("tau_default", t.tau_default);
  checked(o.at("lr"), [&] { t.validate(); });
  o.done();
}

json train_to_json(const sandy::TrainConfig& t) {
  return {{"lambda1", t.reg.lambda1},         {"lambda2", t.reg.lambda2},
          {"lambda3", t.reg.lambda3},         {"lr", t.lr},
          {"batch_size", t.batch_size},       {"max_epochs", t.max_epochs},
          {"patience", t.patience},           {"steps_per_epoch", t.steps_per_epoch},
          {"train_eval_rows", t.train_eval_rows}, {"restore_best", t.restore_best},
          {"tau_default", t.tau_default}};
}

SandySection read_sandy(Obj o, const EnvSection& env) {
  SandySection s;
  auto& m = s.mask;
  {
    Obj mo = o.sub("mask");
    mo.get("models", m.models);
    for (const auto& k : m.models) {
      if (k != "mixture" && k != "transformer") fail(mo.at("models"), "unknown model '" + k + "'");
    }
    mo.get("train", m.train);
    mo.get("val", m.val);
    mo.get("test", m.test);
    mo.get("seeds", m.seeds);
    if (m.train < 1 || m.val < 1 || m.test < 1 || m.seeds < 1) fail(mo.at("train"), "sizes and seeds must be positive");
    {
      Obj x = mo.sub("mixture");
      x.get("experts", m.mixture.experts);
      x.get("expert_hidden", m.mixture.expert_hidden);
      x.get("gate_hidden", m.mixture.gate_hidden);
      x.activation("expert_activation", m.mixture.expert_activation);
      checked(x.at("experts"), [&] { m.mixture.validate(); });
      x.done();
    }
    {
      Obj x = mo.sub("transformer");
      x.get("width", m.transformer.width);
      x.get("key_dim", m.transformer.key_dim);
      x.get("hidden", m.transformer.hidden);
      x.get("blocks", m.transformer.blocks);
      checked(x.at("width"), [&] { m.transformer.validate(); });
      x.done();
    }
    read_train(mo.sub("mixture_train"), m.mixture_train);
    read_train(mo.sub("transformer_train"), m.transformer_train);
    mo.done();
  }
  m.env = env.name;
  if (env.mp.epsilon) m.epsilon = *env.mp.epsilon;

  auto& d = s.dynamics;
  {
    Obj dn = o.sub("dynamics");
    dn.get("base", d.base);
    dn.get("coda", d.coda);
    dn.get("val", d.val);
    dn.get("seeds", d.seeds);
    dn.get("epochs", d.epochs);
    dn.get("steps_per_epoch", d.steps_per_epoch);
    dn.get("batch_size", d.batch_size);
    dn.get("lr", d.lr);
    dn.get("hidden", d.model.hidden);
    dn.activation("activation", d.model.activation);
    if (d.base < 2 || d.coda < 0 || d.val < 1 || d.seeds < 1 || d.epochs < 1 || d.steps_per_epoch < 1 ||
        d.batch_size < 1 || !(d.lr > 0.0)) {
      fail(dn.at("base"), "sizes, counts and the learning rate must be positive");
    }
    checked(dn.at("hidden"), [&] { d.model.validate(); });
    dn.done();
  }
  d.env = env.ball;
  o.get("min_auc", s.min_auc);
  o.done();
  return s;
}

scm::CampaignConfig read_scm(Obj o) {
  scm::CampaignConfig c;
  o.get("instances", c.instances);
  o.get("min_state_vars", c.scm.min_state_vars);
  o.get("max_state_vars", c.scm.max_state_vars);
  o.get("num_action_vars", c.scm.num_action_vars);
  o.get("card", c.scm.card);
  o.get("parent_prob", c.scm.parent_prob);
  o.get("max_noise_card", c.scm.max_noise_card);
  const auto& s = c.scm;
  if (c.instances < 1) fail(o.at("instances"), "must be positive");
  if (s.min_state_vars < 1 || s.max_state_vars < s.min_state_vars || s.num_action_vars < 0 || s.card < 2 ||
      s.max_noise_card < 1 || !(s.parent_prob >= 0.0 && s.parent_prob <= 1.0)) {
    fail(o.at("min_state_vars"), "inconsistent random SCM settings");
  }
  o.done();
  return c;
}

void propagate(RunConfig& c) {
  c.coda.engine.seed = c.seed;
  c.coda.engine.threads = c.threads;
  c.sandy.mask.seed = c.seed;
  c.sandy.dynamics.seed = c.seed;
  c.sandy.dynamics.threads = c.threads;
  c.scm.seed = c.seed;
  c.scm.threads = c.threads;
}

}  // namespace

RunConfig parse_run_config(const json& j) {
  RunConfig c;
  Obj root(j, "");
  root.get("seed", c.seed);
  root.get("threads", c.threads);
  if (c.threads < 1) fail("threads", "must be positive");
  c.env = read_env(root.sub("env"));
  c.task = read_task(root.sub("task"), c.env);
  c.data = read_data(root.sub("data"));
  c.coda = read_coda(root.sub("coda"));
  c.sandy = read_sandy(root.sub("sandy"), c.env);
  c.scm = read_scm(root.sub("scm"));
  root.done();
  propagate(c);
  return c;
}

void set_globals(RunConfig& c, std::optional<std::uint64_t> seed, std::optional<int> threads) {
  if (seed) c.seed = *seed;
  if (threads) {
    if (*threads < 1) fail("threads", "must be positive");
    c.threads = *threads;
  }
  propagate(c);
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return parse_run_config(j);
}

json env_to_json(const EnvSection& e) {
  json j{{"name", e.name}};
  if (e.name == "bouncing_ball") {
    const auto& b = e.ball;
    j.update({{"num_sprites", b.num_sprites},
              {"sprite_radius", b.sprite_radius},
              {"max_speed", b.max_speed},
              {"action_gain", b.action_gain},
              {"collision_margin", b.collision_margin},
              {"seed", b.seed}});
  } else if (is_mp(e.name)) {
    const auto& m = e.mp;
    j.update({{"block_dims", m.block_dims},
              {"hidden_units", m.hidden_units},
              {"weight_seed", m.weight_seed},
              {"probe_samples", m.probe_samples}});
    if (e.name == "nonstationary_mp") j["epsilon"] = m.epsilon.value_or(1.5);
  } else if (e.name == "two_room") {
    const auto& r = e.room;
    j.update({{"room_boundary", r.room_boundary},
              {"world_width", r.world_width},
              {"friction_normal", r.friction_normal},
              {"friction_icy", r.friction_icy},
              {"drying_rate", r.drying_rate},
              {"freezing_rate", r.freezing_rate},
              {"max_push", r.max_push}});
  }
  return j;
}

EnvSection env_from_json(const json& j) { return read_env(Obj(j, "env")); }

json task_to_json(const TaskSection& task) {
  if (!task.enabled) return {{"kind", "none"}};
  const auto& p = task.place;
  json targets = json::array();
  for (const auto& [x, y] : p.targets) targets.push_back({x, y});
  return {{"kind", p.kind == envs::PlaceKind::Partial ? "partial" : "sparse"},
          {"n", p.n},
          {"tolerance", p.tolerance},
          {"terminal_on_success", p.terminal_on_success},
          {"targets", targets}};
}

TaskSection task_from_json(const json& j, const EnvSection& env) { return read_task(Obj(j, "task"), env); }

json to_json(const RunConfig& c) {
  const json task = task_to_json(c.task);
  json data{{"count", c.data.count}};
  if (c.data.reset_prob) data["reset_prob"] = *c.data.reset_prob;
  const auto& e = c.coda.engine;
  json coda{{"provider", c.coda.provider},
            {"pairs_per_round", e.pairs_per_round},
            {"max_samples_per_pair", e.max_samples_per_pair},
            {"relabel_reward", e.relabel_reward},
            {"require_proper_subset", e.require_proper_subset},
            {"target", c.coda.target},
            {"max_rounds", c.coda.max_rounds},
            {"threshold", c.coda.threshold},
            {"tau", c.coda.tau},
            {"checkpoint", c.coda.checkpoint}};
  const auto& m = c.sandy.mask;
  const auto& d = c.sandy.dynamics;
  json sandy{
      {"mask",
       {{"models", m.models},
        {"train", m.train},
        {"val", m.val},
        {"test", m.test},
        {"seeds", m.seeds},
        {"mixture",
         {{"experts", m.mixture.experts},
          {"expert_hidden", m.mixture.expert_hidden},
          {"gate_hidden", m.mixture.gate_hidden},
          {"expert_activation", nn::to_string(m.mixture.expert_activation)}}},
        {"transformer",
         {{"width", m.transformer.width},
          {"key_dim", m.transformer.key_dim},
          {"hidden", m.transformer.hidden},
          {"blocks", m.transformer.blocks}}},
        {"mixture_train", train_to_json(m.mixture_train)},
        {"transformer_train", train_to_json(m.transformer_train)}}},
      {"dynamics",
       {{"base", d.base},
        {"coda", d.coda},
        {"val", d.val},
        {"seeds", d.seeds},
        {"epochs", d.epochs},
        {"steps_per_epoch", d.steps_per_epoch},
        {"batch_size", d.batch_size},
        {"lr", d.lr},
        {"hidden", d.model.hidden},
        {"activation", nn::to_string(d.model.activation)}}}};
  if (c.sandy.min_auc) sandy["min_auc"] = *c.sandy.min_auc;
  const auto& s = c.scm.scm;
  json scm{{"instances", c.scm.instances},     {"min_state_vars", s.min_state_vars},
           {"max_state_vars", s.max_state_vars}, {"num_action_vars", s.num_action_vars},
           {"card", s.card},                   {"parent_prob", s.parent_prob},
           {"max_noise_card", s.max_noise_card}};
  return {{"seed", c.seed}, {"threads", c.threads}, {"env", env_to_json(c.env)}, {"task", task},
          {"data", data},   {"coda", coda},         {"sandy", sandy},             {"scm", scm}};
}

std::shared_ptr<envs::Environment> make_env(const EnvSection& env) {
  if (env.name == "bouncing_ball") return std::make_shared<envs::BouncingBall>(env.ball);
  if (is_mp(env.name)) return std::make_shared<envs::SyntheticMP>(env.mp);
  if (env.name == "two_room") return std::make_shared<envs::TwoRoom>(env.room);
  throw ConfigError("env.name: unknown environment '" + env.name + "'");
}

RewardFn make_reward(const TaskSection& task, const EnvSection& env) {
  if (!task.enabled) return nullptr;
  task.place.validate(env.ball.num_sprites);
  return task.place;
}

}  // namespace coda::io
