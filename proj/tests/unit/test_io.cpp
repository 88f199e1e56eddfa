#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <limits>
#include <sstream>

#include "coda/envs/bouncing_ball.hpp"
#include "coda/envs/collect.hpp"
#include "coda/io/config.hpp"
#include "coda/io/dataset.hpp"

using namespace coda;
using namespace coda::io;
using nlohmann::json;

namespace {

std::string bytes_of(const DatasetFile& d) {
  std::ostringstream out(std::ios::binary);
  write_dataset(out, d);
  return out.str();
}

DatasetFile from_bytes(const std::string& b) {
  std::istringstream in(b, std::ios::binary);
  return read_dataset(in);
}

DatasetFile sample_file(std::uint64_t seed, int count) {
  envs::BouncingBall env;
  Rng rng(seed);
  DatasetFile d;
  d.space = env.space();
  d.meta = {{"env", "bouncing_ball"}};
  d.transitions = envs::collect(env, count, rng, 0.05, envs::PlaceTask{}).transitions;
  return d;
}

bool bit_same(const Transition& a, const Transition& b) {
  return a.same_sample(b) && std::bit_cast<std::uint64_t>(a.reward) == std::bit_cast<std::uint64_t>(b.reward) &&
         a.terminal == b.terminal && a.provenance == b.provenance;
}

}  // namespace

TEST_CASE("dataset round trip is bit-exact, including awkward doubles and flags") {
  auto d = sample_file(3, 200);
  auto& t = d.transitions;
  t[0].s[0] = -0.0;
  t[1].s_next[2] = std::numeric_limits<double>::denorm_min();
  t[2].reward = std::nextafter(1.0, 2.0);
  t[3].a[1] = std::numeric_limits<double>::infinity();
  t[4].terminal = true;
  t[5].provenance = Provenance::Coda;
  t[6].provenance = Provenance::IdentityCoda;

  const auto back = from_bytes(bytes_of(d));
  CHECK(*back.space == *d.space);
  CHECK(back.meta == d.meta);
  REQUIRE(back.transitions.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) CHECK(bit_same(back.transitions[i], t[i]));
  CHECK(std::signbit(back.transitions[0].s[0]));
  CHECK(bytes_of(back) == bytes_of(d));
}

TEST_CASE("empty dataset is a valid file") {
  auto d = sample_file(0, 0);
  const std::string b = bytes_of(d);
  CHECK(b.substr(0, 4) == "CODA");
  const auto back = from_bytes(b);
  CHECK(back.transitions.empty());
  CHECK(*back.space == *d.space);
}

TEST_CASE("saving creates missing parent directories") {
  const auto dir = std::filesystem::temp_directory_path() / "coda_test_io_nested";
  std::filesystem::remove_all(dir);
  const auto path = (dir / "a" / "b.coda").string();
  const auto d = sample_file(3, 10);
  save_dataset(path, d);
  CHECK(load_dataset(path).transitions.size() == 10);
  std::filesystem::remove_all(dir);
}

TEST_CASE("same seed gives byte-identical files, a different seed does not") {
  CHECK(bytes_of(sample_file(11, 300)) == bytes_of(sample_file(11, 300)));
  CHECK(bytes_of(sample_file(11, 300)) != bytes_of(sample_file(12, 300)));
}

TEST_CASE("record size matches the layout") {
  auto d0 = sample_file(1, 0);
  auto d5 = sample_file(1, 5);
  // s, a, s' and reward as f64, then two flag bytes.
  const std::size_t record = 8 * (16 + 2 + 16 + 1) + 2;
  CHECK(bytes_of(d5).size() - bytes_of(d0).size() == 5 * record);
}

TEST_CASE("corrupt dataset files are rejected") {
  const std::string good = bytes_of(sample_file(2, 4));
  CHECK_THROWS_AS(from_bytes("XODA" + good.substr(4)), DatasetError);
  CHECK_THROWS_AS(from_bytes(good.substr(0, good.size() - 3)), DatasetError);
  CHECK_THROWS_AS(from_bytes(good + "x"), DatasetError);
  CHECK_THROWS_AS(from_bytes(good.substr(0, 9)), DatasetError);
  std::string bad_version = good;
  bad_version[4] = 9;
  CHECK_THROWS_AS(from_bytes(bad_version), DatasetError);
  std::string bad_flag = good;
  bad_flag[bad_flag.size() - 1] = 7;  // provenance of the last record
  CHECK_THROWS_AS(from_bytes(bad_flag), DatasetError);
  CHECK_THROWS_AS(load_dataset("/nonexistent/dir/file.coda"), DatasetError);
}

TEST_CASE("mixed spaces cannot be written") {
  auto d = sample_file(2, 3);
  envs::BouncingBallConfig c;
  c.num_sprites = 3;
  envs::BouncingBall other(c);
  Rng rng(0);
  d.transitions.push_back(envs::collect(other, 1, rng).transitions.front());
  std::ostringstream out;
  CHECK_THROWS_AS(write_dataset(out, d), DatasetError);
}

TEST_CASE("empty config gives defaults; seed and threads propagate") {
  auto c = parse_run_config(json::object());
  CHECK(c.env.name == "bouncing_ball");
  CHECK_FALSE(c.task.enabled);
  CHECK(c.coda.engine.pairs_per_round == engine::CodaConfig{}.pairs_per_round);

  c = parse_run_config(json{{"seed", 42}, {"threads", 3}});
  CHECK(c.coda.engine.seed == 42);
  CHECK(c.sandy.mask.seed == 42);
  CHECK(c.sandy.dynamics.seed == 42);
  CHECK(c.scm.seed == 42);
  CHECK(c.coda.engine.threads == 3);
  CHECK(c.scm.threads == 3);
}

TEST_CASE("unknown keys are rejected with their path") {
  auto message = [](const json& j) {
    try {
      parse_run_config(j);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("accepted");
  };
  CHECK(message({{"sede", 1}}).rfind("sede: unknown key", 0) == 0);
  CHECK(message({{"coda", {{"pairs", 5}}}}).rfind("coda.pairs: unknown key", 0) == 0);
  CHECK(message({{"sandy", {{"mask", {{"mixture", {{"expertz", 2}}}}}}}}).rfind("sandy.mask.mixture.expertz", 0) == 0);
  // Keys belong to a specific environment.
  CHECK(message({{"env", {{"name", "stationary_mp"}, {"epsilon", 1.0}}}}).rfind("env.epsilon", 0) == 0);
  CHECK(message({{"env", {{"name", "two_room"}, {"num_sprites", 3}}}}).rfind("env.num_sprites", 0) == 0);
}

TEST_CASE("type and value errors") {
  CHECK_THROWS_AS(parse_run_config(json::array()), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"seed", -1}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"seed", 1.5}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"threads", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"env", {{"name", "cartpole"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"env", {{"num_sprites", "four"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"env", {{"sprite_radius", 0.9}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"data", {{"reset_prob", 1.5}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"coda", {{"provider", "oracle"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"coda", {{"provider", "learned"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"coda", {{"pairs_per_round", 0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"task", {{"kind", "partial"}, {"n", 9}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"env", {{"name", "two_room"}}}, {"task", {{"kind", "sparse"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"sandy", {{"mask", {{"models", {"mlp"}}}}}}}), ConfigError);
  CHECK_THROWS_AS(
      parse_run_config({{"sandy", {{"mask", {{"mixture", {{"expert_activation", "gelu"}}}}}}}}), ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"sandy", {{"mask", {{"mixture_train", {{"lambda1", -1.0}}}}}}}}),
                  ConfigError);
  CHECK_THROWS_AS(parse_run_config({{"scm", {{"card", 1}}}}), ConfigError);
  CHECK_THROWS_AS(load_run_config("/nonexistent.json"), ConfigError);
}

TEST_CASE("config survives to_json and back") {
  const json in = {
      {"seed", 9},
      {"threads", 2},
      {"env", {{"name", "bouncing_ball"}, {"num_sprites", 3}, {"sprite_radius", 0.1}}},
      {"task", {{"kind", "sparse"}, {"n", 2}, {"terminal_on_success", true}}},
      {"data", {{"count", 123}, {"reset_prob", 0.5}}},
      {"coda", {{"provider", "heuristic"}, {"threshold", 0.3}, {"target", 500}}},
      {"sandy",
       {{"mask", {{"models", {"mixture", "transformer"}}, {"train", 100}, {"mixture", {{"experts", 3}}}}},
        {"dynamics", {{"base", 50}, {"hidden", {16}}}},
        {"min_auc", 0.9}}},
      {"scm", {{"instances", 10}}}};
  const auto c = parse_run_config(in);
  CHECK(c.env.ball.num_sprites == 3);
  CHECK(c.task.place.kind == envs::PlaceKind::Sparse);
  CHECK(c.data.reset_prob.value() == 0.5);
  CHECK(c.coda.target == 500);
  CHECK(c.sandy.mask.mixture.experts == 3);
  CHECK(c.sandy.dynamics.env.num_sprites == 3);
  CHECK(c.sandy.min_auc.value() == 0.9);
  const json out = to_json(c);
  CHECK(to_json(parse_run_config(out)) == out);

  for (const char* name : {"stationary_mp", "nonstationary_mp", "two_room", "bouncing_ball"}) {
    const auto e = env_from_json({{"name", name}});
    CHECK(env_from_json(env_to_json(e)).name == name);
    CHECK(env_to_json(env_from_json(env_to_json(e))) == env_to_json(e));
    CHECK(make_env(e)->name() == name);
  }
  CHECK(env_from_json({{"name", "nonstationary_mp"}}).mp.epsilon.value() == 1.5);
  CHECK_FALSE(env_from_json({{"name", "stationary_mp"}}).mp.epsilon.has_value());
}

TEST_CASE("task reward comes from the place task") {
  auto c = parse_run_config({{"task", {{"kind", "partial"}, {"n", 1}}}});
  auto reward = make_reward(c.task, c.env);
  REQUIRE(reward);
  envs::BouncingBall env;
  auto s = env.make_state({0.2, 0.2, 0, 0, 0.5, 0.5, 0, 0, 0.8, 0.5, 0, 0, 0.5, 0.8, 0, 0});
  auto a = env.make_action(0, 0);
  CHECK(reward(s, a, s).reward > 0.0);
  CHECK_FALSE(make_reward(parse_run_config(json::object()).task, c.env));
}
