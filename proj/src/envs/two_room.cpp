#include "coda/envs/two_room.hpp"

#include <stdexcept>

namespace coda::envs {

void TwoRoomConfig::validate() const {
  if (!(0.0 < friction_icy && friction_icy < friction_normal && friction_normal <= 1.0)) {
    throw std::invalid_argument("two room: need 0 < friction_icy < friction_normal <= 1");
  }
  if (!(world_width > 0.0) || !(room_boundary > 0.0 && room_boundary < world_width)) {
    throw std::invalid_argument("two room: boundary must lie inside the world");
  }
  if (drying_rate < 0.0 || drying_rate > 1.0 || freezing_rate < 0.0 || freezing_rate > 1.0) {
    throw std::invalid_argument("two room: drying and freezing rates must be in [0, 1]");
  }
  if (max_push < 0.0) throw std::invalid_argument("two room: max_push must be non-negative");
}

TwoRoom::TwoRoom(TwoRoomConfig config) : config_(config) {
  config_.validate();
  space_ = make_space({{"motion", 2}, {"ground", 1}}, {{"push", 1}});
}

StepResult TwoRoom::step(const FactoredVector& s, const FactoredVector& a) const {
  if (s.kind() != VectorKind::State || s.size() != 3) throw DimensionError("two room: state must be (x, vx, dryness)");
  if (a.kind() != VectorKind::Action || a.size() != 1) throw DimensionError("two room: action must be a scalar push");
  const double x = s[0];
  const bool ice = icy(x);
  double vx = (ice ? config_.friction_icy : config_.friction_normal) * s[1] + a[0];
  double nx = x + vx;
  if (nx < 0.0) {
    nx = -nx;
    vx = -vx;
  } else if (nx > config_.world_width) {
    nx = 2 * config_.world_width - nx;
    vx = -vx;
  }
  const double dry = ice ? config_.freezing_rate * s[2] : s[2] + config_.drying_rate * (1.0 - s[2]);
  LocalMask mask(2, 1);
  mask.set(0, 0);
  mask.set(2, 0);
  mask.set(1, 1);
  return {make_state(nx, vx, dry), mask};
}

FactoredVector TwoRoom::reset(Rng& rng) const {
  std::uniform_real_distribution<double> pos(0.0, config_.world_width);
  std::uniform_real_distribution<double> vel(-0.1, 0.1);
  std::uniform_real_distribution<double> dry(0.0, 1.0);
  const double x = pos(rng);
  const double v = vel(rng);
  return make_state(x, v, dry(rng));
}

FactoredVector TwoRoom::sample_action(Rng& rng) const {
  std::uniform_real_distribution<double> u(-config_.max_push, config_.max_push);
  return make_action(u(rng));
}

FactoredVector TwoRoom::make_state(double x, double vx, double dryness) const {
  return FactoredVector(space_, VectorKind::State, {x, vx, dryness});
}

FactoredVector TwoRoom::make_action(double push) const { return FactoredVector(space_, VectorKind::Action, {push}); }

}  // namespace coda::envs
