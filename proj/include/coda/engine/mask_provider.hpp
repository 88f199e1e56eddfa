#pragma once

#include <memory>
#include <string>
#include <vector>

#include "coda/core/mask.hpp"
#include "coda/core/space.hpp"
#include "coda/envs/environment.hpp"

namespace coda::engine {

/// Source of local masks M(s, a). Implementations must be safe to call from
/// several threads at once.
class MaskProvider {
 public:
  virtual ~MaskProvider() = default;
  virtual std::string name() const = 0;
  virtual LocalMask mask(const FactoredVector& s, const FactoredVector& a) const = 0;
  /// Provenance stamped on counterfactuals produced with this provider.
  virtual Provenance provenance() const { return Provenance::Coda; }
};

/// The environment's own mask oracle.
class GroundTruthProvider final : public MaskProvider {
 public:
  explicit GroundTruthProvider(std::shared_ptr<const envs::Environment> env) : env_(std::move(env)) {}
  std::string name() const override { return "ground_truth"; }
  LocalMask mask(const FactoredVector& s, const FactoredVector& a) const override { return env_->mask(s, a); }

 private:
  std::shared_ptr<const envs::Environment> env_;
};

/// M = I everywhere: every component (and every action) is its own block,
/// so any swap passes validation.
class IdentityProvider final : public MaskProvider {
 public:
  std::string name() const override { return "identity"; }
  LocalMask mask(const FactoredVector& s, const FactoredVector& a) const override;
  Provenance provenance() const override { return Provenance::IdentityCoda; }
};

/// Where each state component keeps its 2-D position, and which component
/// the action drives.
struct PositionLayout {
  std::vector<int> offsets;  // per state component, offset of (x, y) inside it; -1 = none
  int effector = 0;

  static PositionLayout leading_xy(int num_state, int effector = 0);
};

/// Objects i and j are coupled iff their positions are within `threshold`
/// (distance <= threshold couples). The action is always coupled to the
/// effector and to any object within `threshold` of it.
LocalMask heuristic_distance_mask(const FactoredVector& s, const FactoredVector& a, double threshold,
                                  const PositionLayout& layout);

class DistanceHeuristicProvider final : public MaskProvider {
 public:
  DistanceHeuristicProvider(double threshold, PositionLayout layout)
      : threshold_(threshold), layout_(std::move(layout)) {}
  std::string name() const override { return "distance_heuristic"; }
  LocalMask mask(const FactoredVector& s, const FactoredVector& a) const override {
    return heuristic_distance_mask(s, a, threshold_, layout_);
  }

 private:
  double threshold_;
  PositionLayout layout_;
};

}  // namespace coda::engine
