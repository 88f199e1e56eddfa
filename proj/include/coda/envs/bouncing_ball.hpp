#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "coda/core/reward.hpp"
#include "coda/envs/environment.hpp"

namespace coda::envs {

struct BouncingBallConfig {
  int num_sprites = 4;
  double sprite_radius = 0.12;
  double max_speed = 0.06;
  double action_gain = 0.01;
  double collision_margin = 0.002;
  std::uint64_t seed = 0;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
};

/// Sprites in the unit square. State component i is sprite i as (x, y, vx, vy);
/// the single action component is a 2-D acceleration applied to sprite 0.
///
/// One step, in order:
///   1. v0 += action_gain * a
///   2. pairs (i, j), i < j ascending: if |p_j - p_i| <= 2r + margin and the
///      pair is closing, swap the normal velocity components (equal masses)
///   3. every speed is clipped to max_speed
///   4. p += v, then reflection off the walls at r and 1 - r
///
/// The mask follows the dependency sets: sprite i starts with {i} (sprite 0
/// also with the action) and a collision merges the two sets, so later
/// collisions in the same step carry earlier influences along.
class BouncingBall final : public Environment {
 public:
  explicit BouncingBall(BouncingBallConfig config = {});

  std::string name() const override { return "bouncing_ball"; }
  const SpacePtr& space() const override { return space_; }
  StepResult step(const FactoredVector& s, const FactoredVector& a) const override;
  FactoredVector reset(Rng& rng) const override;
  FactoredVector sample_action(Rng& rng) const override;

  const BouncingBallConfig& config() const { return config_; }

  /// Sprite pairs whose collision test fired at (s, a), in resolution order.
  std::vector<std::pair<int, int>> collisions(const FactoredVector& s, const FactoredVector& a) const;

  /// True when some pair from different blocks of `mask` sits within
  /// collision_margin of the collision distance while closing, so a small
  /// perturbation could flip its coupling.
  bool near_coupling_boundary(const FactoredVector& s, const FactoredVector& a, const LocalMask& mask) const;

  FactoredVector make_state(const std::vector<double>& values) const;
  FactoredVector make_action(double ax, double ay) const;

 private:
  struct Internal {
    std::vector<double> next;
    std::vector<std::pair<int, int>> fired;
    std::vector<double> pre_collision;  // state after the action, before collisions
  };
  Internal simulate(const FactoredVector& s, const FactoredVector& a) const;

  BouncingBallConfig config_;
  SpacePtr space_;
};

enum class PlaceKind { Partial, Sparse };

/// Place-N: move sprites 0..N-1 to their targets (within `tolerance`, judged on s').
struct PlaceTask {
  PlaceKind kind = PlaceKind::Partial;
  int n = 1;
  std::vector<std::pair<double, double>> targets = {{0.2, 0.2}, {0.8, 0.2}, {0.2, 0.8}, {0.8, 0.8}};
  double tolerance = 0.1;
  /// When set, s' ends the episode once every one of the N sprites is placed.
  bool terminal_on_success = false;

  void validate(int num_sprites) const;
  int placed(const FactoredVector& s_next) const;
  RewardResult operator()(const FactoredVector& s, const FactoredVector& a, const FactoredVector& s_next) const;
};

}  // namespace coda::envs
