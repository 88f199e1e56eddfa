#include "coda/engine/soundness.hpp"

#include <algorithm>
#include <cmath>

namespace coda::engine {

double resimulation_error(const envs::Environment& env, const Transition& t) {
  const FactoredVector next = env.step(t.s, t.a).s_next;
  if (next.size() != t.s_next.size()) throw DimensionError("resimulation_error: next-state size mismatch");
  double err = 0.0;
  for (int k = 0; k < next.size(); ++k) {
    const double e = std::fabs(next[k] - t.s_next[k]);
    err = std::isnan(e) ? INFINITY : std::max(err, e);
  }
  return err;
}

SoundnessReport check_soundness(const envs::Environment& env, const std::vector<Transition>& samples,
                                double tolerance, const std::function<bool(const Transition&)>& is_boundary) {
  SoundnessReport r;
  for (const auto& t : samples) {
    ++r.checked;
    const double err = resimulation_error(env, t);
    const bool boundary = is_boundary && is_boundary(t);
    if (boundary) {
      ++r.boundary;
      if (err >= tolerance) ++r.boundary_failures;
      continue;
    }
    r.max_interior_error = std::max(r.max_interior_error, err);
    if (err >= tolerance) ++r.interior_failures;
  }
  return r;
}

}  // namespace coda::engine
