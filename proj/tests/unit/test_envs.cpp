#include <cmath>

#include "doctest.h"

#include "coda/envs/bouncing_ball.hpp"
#include "coda/envs/collect.hpp"
#include "coda/envs/synthetic_mp.hpp"
#include "coda/envs/two_room.hpp"

using namespace coda;
using namespace coda::envs;

namespace {

double agreement(const LocalMask& a, const LocalMask& b) {
  int same = 0;
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) same += a(r, c) == b(r, c);
  return static_cast<double>(same) / (a.rows() * a.cols());
}

}  // namespace

TEST_CASE("bouncing ball rejects bad configs and actions") {
  CHECK_THROWS(BouncingBall(BouncingBallConfig{.num_sprites = 0}));
  CHECK_THROWS(BouncingBall(BouncingBallConfig{.sprite_radius = 0.6}));
  CHECK_THROWS(BouncingBall(BouncingBallConfig{.num_sprites = 50}));
  BouncingBall env;
  Rng rng(1);
  auto s = env.reset(rng);
  auto other = make_space({{"a", 3}}, {{"u", 3}});
  CHECK_THROWS_AS(env.step(s, FactoredVector::zeros(other, VectorKind::Action)), DimensionError);
}

TEST_CASE("separated stationary sprites factorize") {
  BouncingBall env;
  auto s = env.make_state({0.2, 0.2, 0, 0, 0.8, 0.2, 0, 0, 0.2, 0.8, 0, 0, 0.8, 0.8, 0, 0});
  auto r = env.step(s, env.make_action(0, 0));
  auto p = components(r.mask);
  CHECK(p.num_blocks() == 4);
  CHECK(p == ComponentPartition(5, {{0, 4}, {1}, {2}, {3}}));
  CHECK(r.s_next.bit_equal(s));
}

TEST_CASE("a forced collision couples exactly that pair and matches finite differences") {
  BouncingBall env;
  const double r = env.config().sprite_radius;
  // Sprites 1 and 2 overlap slightly and approach along x; 0 and 3 are far.
  auto s = env.make_state({0.15, 0.85, 0.01, 0.0,   //
                           0.40, 0.40, 0.03, 0.01,  //
                           0.40 + 2 * r - 0.01, 0.41, -0.02, 0.0,  //
                           0.85, 0.85, 0.0, -0.01});
  auto a = env.make_action(0.3, -0.5);
  auto res = env.step(s, a);
  CHECK(env.collisions(s, a) == std::vector<std::pair<int, int>>{{1, 2}});
  auto p = components(res.mask);
  CHECK(p.num_blocks() == 3);
  CHECK(p == ComponentPartition(5, {{0, 4}, {1, 2}, {3}}));
  int ambiguous = 0;
  auto fd = mask_from_jacobian(*env.space(), fd_jacobian(env, s, a), 1e-7, 1e-9, &ambiguous);
  CHECK(ambiguous == 0);
  CHECK(fd == res.mask);
}

TEST_CASE("a chain of collisions carries the action along") {
  BouncingBall env;
  const double r = env.config().sprite_radius;
  auto s = env.make_state({0.30, 0.45, 0.03, 0.0,  //
                           0.30 + 2 * r - 0.01, 0.50, 0.0, 0.0,  //
                           0.30 + 4 * r - 0.03, 0.56, -0.01, 0.0,  //
                           0.85, 0.15, 0.0, 0.0});
  auto a = env.make_action(0.5, 0.2);
  auto res = env.step(s, a);
  REQUIRE(env.collisions(s, a).size() == 2);
  CHECK(res.mask(4, 2));  // action reaches sprite 2 through sprite 1
  CHECK(res.mask(0, 2));
  auto fd = mask_from_jacobian(*env.space(), fd_jacobian(env, s, a));
  CHECK(fd == res.mask);
}

TEST_CASE("bouncing ball is deterministic and respects state invariants") {
  BouncingBall env;
  Rng rng(2);
  auto data = collect(env, 5000, rng);
  const auto& cfg = env.config();
  for (const auto& t : data.transitions) {
    auto again = env.step(t.s, t.a);
    CHECK(again.s_next.bit_equal(t.s_next));
    double total = 0.0;
    for (int i = 0; i < cfg.num_sprites; ++i) {
      auto c = t.s_next.component(i);
      CHECK(c[0] >= cfg.sprite_radius - 1e-12);
      CHECK(c[0] <= 1 - cfg.sprite_radius + 1e-12);
      CHECK(c[1] >= cfg.sprite_radius - 1e-12);
      CHECK(c[1] <= 1 - cfg.sprite_radius + 1e-12);
      const double sp = std::hypot(c[2], c[3]);
      CHECK(sp <= cfg.max_speed * (1 + 1e-12));
      total += sp;
    }
    CHECK(total <= cfg.num_sprites * cfg.max_speed * (1 + 1e-12));
  }
}

TEST_CASE("bouncing ball masks agree with finite-difference Jacobians") {
  BouncingBall env;
  Rng rng(3);
  auto data = collect(env, 1000, rng);
  double agree = 0.0;
  int counted = 0;
  for (std::size_t i = 0; i < data.transitions.size(); ++i) {
    const auto& t = data.transitions[i];
    if (env.near_coupling_boundary(t.s, t.a, data.masks[i])) continue;
    auto fd = mask_from_jacobian(*env.space(), fd_jacobian(env, t.s, t.a));
    agree += agreement(fd, data.masks[i]);
    ++counted;
  }
  CHECK(counted > 900);
  CHECK(agree / counted >= 0.99);
}

TEST_CASE("place-N rewards") {
  BouncingBall env;
  PlaceTask task;
  task.n = 4;
  auto all = env.make_state({0.2, 0.2, 0, 0, 0.8, 0.2, 0, 0, 0.2, 0.8, 0, 0, 0.8, 0.8, 0, 0});
  auto one = env.make_state({0.2, 0.2, 0, 0, 0.5, 0.5, 0, 0, 0.5, 0.2, 0, 0, 0.3, 0.5, 0, 0});
  auto a = env.make_action(0, 0);
  CHECK(task(all, a, all).reward == 1.0);
  CHECK(task(all, a, one).reward == 0.25);
  task.kind = PlaceKind::Sparse;
  CHECK(task(all, a, one).reward == 0.0);
  CHECK(task(all, a, all).reward == 1.0);
  CHECK_FALSE(task(all, a, all).terminal);
  task.terminal_on_success = true;
  CHECK(task(all, a, all).terminal);
  CHECK_THROWS(PlaceTask{.n = 5}.validate(4));

  PlaceTask partial{.n = 3};
  Rng rng(4);
  auto data = collect(env, 2000, rng, 0.05, partial);
  for (const auto& t : data.transitions) {
    const double k = t.reward * 3;
    CHECK(std::fabs(k - std::round(k)) < 1e-12);
  }
}

TEST_CASE("stationary MP has three fixed blocks") {
  SyntheticMP mp;
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto s = mp.reset(rng);
    auto res = mp.step(s);
    auto p = components(res.mask);
    CHECK(p == ComponentPartition(9, {{0, 1, 2, 3}, {4, 5, 6}, {7, 8}}));
    CHECK(mp.step(s).s_next.bit_equal(res.s_next));
  }
  CHECK_THROWS_AS(mp.step(FactoredVector::zeros(make_space({{"x", 8}}, {}), VectorKind::State)), DimensionError);
}

TEST_CASE("nonstationary MP indicator and mask") {
  SyntheticMP mp(SyntheticMPConfig{.epsilon = 1.5});
  auto zero = FactoredVector::zeros(mp.space(), VectorKind::State);
  SyntheticMP stationary;
  CHECK(mp.step(zero).mask == stationary.step(zero).mask);

  std::vector<double> v(9, 0.1);
  v[0] = 2.0;
  v[1] = v[2] = v[3] = 0.0;
  auto s = FactoredVector(mp.space(), VectorKind::State, v);
  CHECK(mp.indicator(s, 0));
  CHECK_FALSE(mp.indicator(s, 1));
  auto res = mp.step(s);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 9; ++c) CHECK(res.mask(r, c));
  CHECK_FALSE(res.mask(4, 0));
  CHECK(res.mask(4, 5));
  CHECK_FALSE(res.mask(7, 4));
  auto fd = mask_from_jacobian(*mp.space(), fd_jacobian(mp, s, FactoredVector::zeros(mp.space(), VectorKind::Action)));
  CHECK(fd == res.mask);
}

TEST_CASE("MP masks agree with finite differences away from the indicator surface") {
  SyntheticMP mp(SyntheticMPConfig{.epsilon = 1.5, .weight_seed = 7});
  Rng rng(6);
  auto none = FactoredVector::zeros(mp.space(), VectorKind::Action);
  double agree = 0.0;
  int counted = 0;
  for (int i = 0; i < 1000; ++i) {
    auto s = mp.reset(rng);
    bool near = false;
    for (int b = 0; b < mp.num_blocks(); ++b) {
      double sq = 0;
      for (int k = mp.block_offset(b); k < mp.block_offset(b + 1); ++k) sq += s[k] * s[k];
      near = near || std::fabs(std::sqrt(sq) - 1.5) < 1e-5;
    }
    if (near) continue;
    agree += agreement(mask_from_jacobian(*mp.space(), fd_jacobian(mp, s, none)), mp.step(s).mask);
    ++counted;
  }
  CHECK(agree / counted >= 0.99);
}

TEST_CASE("MP weights are reproducible from the seed and normalized") {
  SyntheticMP a(SyntheticMPConfig{.weight_seed = 11});
  SyntheticMP b(SyntheticMPConfig{.weight_seed = 11});
  SyntheticMP c(SyntheticMPConfig{.weight_seed = 12});
  Rng rng(7);
  auto s = a.reset(rng);
  CHECK(a.step(s).s_next.bit_equal(b.step(s).s_next));
  CHECK_FALSE(a.step(s).s_next.bit_equal(c.step(s).s_next));
  double sq = 0;
  const int n = 4000;
  for (int i = 0; i < n; ++i) {
    auto next = a.step(a.reset(rng)).s_next;
    for (double v : next.values()) sq += v * v;
  }
  CHECK(sq / (9.0 * n) == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("two-room friction and per-room factorization") {
  TwoRoom env;
  const auto& c = env.config();
  auto normal = env.step(env.make_state(1.5, 0.1, 0.5), env.make_action(0.0));
  CHECK(normal.s_next[1] == doctest::Approx(c.friction_normal * 0.1));
  auto icy = env.step(env.make_state(0.5, 0.1, 0.5), env.make_action(0.0));
  CHECK(icy.s_next[1] == doctest::Approx(c.friction_icy * 0.1));
  CHECK(components(normal.mask) == ComponentPartition(3, {{0, 2}, {1}}));
  CHECK(icy.mask == normal.mask);
  CHECK_THROWS(TwoRoom(TwoRoomConfig{.friction_normal = 0.4, .friction_icy = 0.5}));

  Rng rng(8);
  int agree = 0, total = 0;
  for (int i = 0; i < 500; ++i) {
    auto s = env.reset(rng);
    auto a = env.sample_action(rng);
    if (std::fabs(s[0] - c.room_boundary) < 1e-3) continue;
    const double nx = s[0] + s[1] + a[0];
    if (nx < 0.01 || nx > c.world_width - 0.01) continue;
    agree += mask_from_jacobian(*env.space(), fd_jacobian(env, s, a)) == env.step(s, a).mask;
    ++total;
  }
  CHECK(agree == total);
}

TEST_CASE("collect validates arguments and honours reset probability") {
  TwoRoom env;
  Rng rng(9);
  CHECK_THROWS(collect(env, -1, rng));
  CHECK_THROWS(collect(env, 5, rng, 1.5));
  CHECK(collect(env, 0, rng).transitions.empty());
  auto chain = collect(env, 50, rng, 0.0);
  for (std::size_t i = 1; i < chain.transitions.size(); ++i) {
    CHECK(chain.transitions[i].s.bit_equal(chain.transitions[i - 1].s_next));
  }
  Rng r1(10), r2(10);
  auto d1 = collect(env, 100, r1);
  auto d2 = collect(env, 100, r2);
  for (int i = 0; i < 100; ++i) CHECK(d1.transitions[i].same_sample(d2.transitions[i]));
}
