#pragma once

#include <string>
#include <vector>

#include "coda/core/mask.hpp"
#include "coda/core/partition.hpp"
#include "coda/core/space.hpp"

namespace coda::envs {

struct StepResult {
  FactoredVector s_next;
  LocalMask mask;  // ground-truth local mask at (s, a)
};

/// Deterministic, locally factored dynamics with a ground-truth mask oracle.
/// Implementations are immutable after construction, so step() may be called
/// concurrently.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual std::string name() const = 0;
  virtual const SpacePtr& space() const = 0;
  virtual StepResult step(const FactoredVector& s, const FactoredVector& a) const = 0;
  virtual FactoredVector reset(Rng& rng) const = 0;
  /// One action of the uniform random policy.
  virtual FactoredVector sample_action(Rng& rng) const = 0;

  LocalMask mask(const FactoredVector& s, const FactoredVector& a) const { return step(s, a).mask; }
};

/// Central finite-difference Jacobian of step(): row k is the flat input
/// coordinate (state then action), column l the flat next-state coordinate.
std::vector<std::vector<double>> fd_jacobian(const Environment& env, const FactoredVector& s,
                                             const FactoredVector& a, double h = 1e-6);

/// Component-level pattern of a flat Jacobian. An entry is on when some
/// coordinate pair exceeds `on`, off when all are below `off`, and ambiguous
/// otherwise (reported through `ambiguous`, left off in the mask).
LocalMask mask_from_jacobian(const FactoredSpace& space, const std::vector<std::vector<double>>& jac,
                             double on = 1e-7, double off = 1e-9, int* ambiguous = nullptr);

}  // namespace coda::envs
