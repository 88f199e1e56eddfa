#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "coda/envs/environment.hpp"

namespace coda::engine {

/// Max per-coordinate |step(s, a) - s'|.
double resimulation_error(const envs::Environment& env, const Transition& t);

struct SoundnessReport {
  std::int64_t checked = 0;
  std::int64_t boundary = 0;           // flagged by the boundary predicate
  std::int64_t interior_failures = 0;  // outside the boundary class and error >= tolerance
  std::int64_t boundary_failures = 0;
  double max_interior_error = 0.0;

  double boundary_fraction() const { return checked ? static_cast<double>(boundary) / checked : 0.0; }
};

/// Re-simulates every transition. `is_boundary` (optional) marks samples
/// whose coupling could flip under a tiny perturbation; they are counted apart.
SoundnessReport check_soundness(const envs::Environment& env, const std::vector<Transition>& samples,
                                double tolerance = 1e-9,
                                const std::function<bool(const Transition&)>& is_boundary = nullptr);

}  // namespace coda::engine
