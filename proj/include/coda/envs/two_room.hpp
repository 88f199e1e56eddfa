#pragma once

#include "coda/envs/environment.hpp"

namespace coda::envs {

struct TwoRoomConfig {
  double room_boundary = 1.0;  // x < boundary is the icy room
  double world_width = 2.0;
  double friction_normal = 0.9;
  double friction_icy = 0.5;
  double drying_rate = 0.2;    // normal room: dryness relaxes toward 1
  double freezing_rate = 0.7;  // icy room: dryness decays toward 0
  double max_push = 0.05;      // random-policy action range

  void validate() const;
};

/// A corridor split into two rooms. State components: motion (x, vx) and
/// ground (dryness); one action component (push).
///
///   vx' = friction(room(x)) * vx + a,  x' = x + vx' (reflected at the walls)
///   icy room:    dryness' = freezing_rate * dryness
///   normal room: dryness' = dryness + drying_rate * (1 - dryness)
///
/// Inside either room the ground does not depend on motion, so every local
/// mask separates them, yet the ground equation differs across rooms.
class TwoRoom final : public Environment {
 public:
  explicit TwoRoom(TwoRoomConfig config = {});

  std::string name() const override { return "two_room"; }
  const SpacePtr& space() const override { return space_; }
  StepResult step(const FactoredVector& s, const FactoredVector& a) const override;
  FactoredVector reset(Rng& rng) const override;
  FactoredVector sample_action(Rng& rng) const override;

  const TwoRoomConfig& config() const { return config_; }
  bool icy(double x) const { return x < config_.room_boundary; }
  FactoredVector make_state(double x, double vx, double dryness) const;
  FactoredVector make_action(double push) const;

 private:
  TwoRoomConfig config_;
  SpacePtr space_;
};

}  // namespace coda::envs
