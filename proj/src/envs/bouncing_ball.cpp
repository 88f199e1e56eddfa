#include "coda/envs/bouncing_ball.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace coda::envs {

namespace {

constexpr int kDim = 4;

void clip_speed(double& vx, double& vy, double max_speed) {
  const double sp = std::hypot(vx, vy);
  if (sp > max_speed) {
    vx *= max_speed / sp;
    vy *= max_speed / sp;
  }
}

void reflect(double& p, double& v, double lo, double hi) {
  if (p < lo) {
    p = 2 * lo - p;
    v = -v;
  } else if (p > hi) {
    p = 2 * hi - p;
    v = -v;
  }
}

}  // namespace

void BouncingBallConfig::validate() const {
  if (num_sprites < 1) throw std::invalid_argument("bouncing ball: num_sprites must be >= 1");
  if (!(sprite_radius > 0.0) || 2 * sprite_radius >= 1.0) {
    throw std::invalid_argument("bouncing ball: sprite_radius must be in (0, 0.5)");
  }
  if (!(max_speed > 0.0) || max_speed >= 1.0 - 2 * sprite_radius) {
    throw std::invalid_argument("bouncing ball: max_speed must be positive and smaller than the free width");
  }
  if (action_gain < 0.0 || collision_margin < 0.0) {
    throw std::invalid_argument("bouncing ball: action_gain and collision_margin must be non-negative");
  }
  const double side = 1.0 - 2 * sprite_radius;
  const int per_row = static_cast<int>(std::floor(side / (2 * sprite_radius))) + 1;
  if (per_row * per_row < num_sprites) throw std::invalid_argument("bouncing ball: sprites do not fit in the canvas");
}

BouncingBall::BouncingBall(BouncingBallConfig config) : config_(config) {
  config_.validate();
  std::vector<ComponentSpec> sprites;
  for (int i = 0; i < config_.num_sprites; ++i) sprites.push_back({"sprite" + std::to_string(i), kDim});
  space_ = make_space(std::move(sprites), {{"accel", 2}});
}

BouncingBall::Internal BouncingBall::simulate(const FactoredVector& s, const FactoredVector& a) const {
  if (s.size() != space_->state_dim() || s.kind() != VectorKind::State) {
    throw DimensionError("bouncing ball: state must have " + std::to_string(space_->state_dim()) + " values");
  }
  if (a.size() != 2 || a.kind() != VectorKind::Action) throw DimensionError("bouncing ball: action must be a 2-vector");
  const int n = config_.num_sprites;
  const double r = config_.sprite_radius;
  const double reach = 2 * r + config_.collision_margin;
  Internal out;
  std::vector<double> x(s.values().begin(), s.values().end());
  x[2] += config_.action_gain * a[0];
  x[3] += config_.action_gain * a[1];
  out.pre_collision = x;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double* pi = &x[i * kDim];
      double* pj = &x[j * kDim];
      const double dx = pj[0] - pi[0];
      const double dy = pj[1] - pi[1];
      const double dist = std::hypot(dx, dy);
      const double closing = (pj[2] - pi[2]) * dx + (pj[3] - pi[3]) * dy;
      if (dist > reach || !(closing < 0.0) || dist == 0.0) continue;
      const double nx = dx / dist;
      const double ny = dy / dist;
      const double u = (pi[2] - pj[2]) * nx + (pi[3] - pj[3]) * ny;
      pi[2] -= u * nx;
      pi[3] -= u * ny;
      pj[2] += u * nx;
      pj[3] += u * ny;
      out.fired.emplace_back(i, j);
    }
  }
  for (int i = 0; i < n; ++i) {
    double* p = &x[i * kDim];
    clip_speed(p[2], p[3], config_.max_speed);
    p[0] += p[2];
    p[1] += p[3];
    reflect(p[0], p[2], r, 1.0 - r);
    reflect(p[1], p[3], r, 1.0 - r);
  }
  out.next = std::move(x);
  return out;
}

StepResult BouncingBall::step(const FactoredVector& s, const FactoredVector& a) const {
  Internal sim = simulate(s, a);
  const int n = config_.num_sprites;
  // deps[i][k]: node k (sprite k, or the action at k == n) influences sprite i.
  std::vector<std::vector<char>> deps(n, std::vector<char>(n + 1, 0));
  for (int i = 0; i < n; ++i) deps[i][i] = 1;
  deps[0][n] = 1;
  for (const auto& [i, j] : sim.fired) {
    for (int k = 0; k <= n; ++k) deps[i][k] = deps[j][k] = deps[i][k] | deps[j][k];
  }
  LocalMask mask(n, 1);
  for (int c = 0; c < n; ++c)
    for (int k = 0; k <= n; ++k)
      if (deps[c][k]) mask.set(k, c);
  return {FactoredVector(space_, VectorKind::State, std::move(sim.next)), mask};
}

std::vector<std::pair<int, int>> BouncingBall::collisions(const FactoredVector& s, const FactoredVector& a) const {
  return simulate(s, a).fired;
}

bool BouncingBall::near_coupling_boundary(const FactoredVector& s, const FactoredVector& a,
                                          const LocalMask& mask) const {
  const auto part = components(mask);
  const auto& x = simulate(s, a).pre_collision;
  const double reach = 2 * config_.sprite_radius + config_.collision_margin;
  for (int i = 0; i < config_.num_sprites; ++i) {
    for (int j = i + 1; j < config_.num_sprites; ++j) {
      if (part.block_of(i) == part.block_of(j)) continue;
      const double dx = x[j * kDim] - x[i * kDim];
      const double dy = x[j * kDim + 1] - x[i * kDim + 1];
      const double closing = (x[j * kDim + 2] - x[i * kDim + 2]) * dx + (x[j * kDim + 3] - x[i * kDim + 3]) * dy;
      if (std::fabs(std::hypot(dx, dy) - reach) <= config_.collision_margin && closing < 0.0) return true;
    }
  }
  return false;
}

FactoredVector BouncingBall::reset(Rng& rng) const {
  const double r = config_.sprite_radius;
  std::uniform_real_distribution<double> pos(r, 1.0 - r);
  std::uniform_real_distribution<double> vel(-config_.max_speed / 2, config_.max_speed / 2);
  std::vector<double> x(space_->state_dim());
  for (int i = 0; i < config_.num_sprites; ++i) {
    x[i * kDim] = pos(rng);
    x[i * kDim + 1] = pos(rng);
    x[i * kDim + 2] = vel(rng);
    x[i * kDim + 3] = vel(rng);
  }
  return FactoredVector(space_, VectorKind::State, std::move(x));
}

FactoredVector BouncingBall::sample_action(Rng& rng) const {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double ax = u(rng);
  const double ay = u(rng);
  return make_action(ax, ay);
}

FactoredVector BouncingBall::make_state(const std::vector<double>& values) const {
  return FactoredVector(space_, VectorKind::State, values);
}

FactoredVector BouncingBall::make_action(double ax, double ay) const {
  return FactoredVector(space_, VectorKind::Action, {ax, ay});
}

void PlaceTask::validate(int num_sprites) const {
  if (n < 1 || n > num_sprites) throw std::invalid_argument("place task: N must be in [1, num_sprites]");
  if (static_cast<int>(targets.size()) < n) throw std::invalid_argument("place task: need a target per placed sprite");
  for (const auto& [tx, ty] : targets) {
    if (tx < 0 || tx > 1 || ty < 0 || ty > 1) throw std::invalid_argument("place task: target outside the canvas");
  }
  if (!(tolerance > 0.0)) throw std::invalid_argument("place task: tolerance must be positive");
}

int PlaceTask::placed(const FactoredVector& s_next) const {
  int count = 0;
  for (int i = 0; i < n; ++i) {
    const auto c = s_next.component(i);
    if (std::hypot(c[0] - targets[i].first, c[1] - targets[i].second) <= tolerance) ++count;
  }
  return count;
}

RewardResult PlaceTask::operator()(const FactoredVector&, const FactoredVector&, const FactoredVector& s_next) const {
  const int k = placed(s_next);
  RewardResult out;
  out.reward = kind == PlaceKind::Partial ? static_cast<double>(k) / n : (k == n ? 1.0 : 0.0);
  out.terminal = terminal_on_success && k == n;
  return out;
}

}  // namespace coda::envs
