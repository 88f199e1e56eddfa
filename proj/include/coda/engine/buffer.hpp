#pragma once

#include <vector>

#include "coda/core/partition.hpp"
#include "coda/core/space.hpp"

namespace coda::engine {

/// Real and counterfactual transitions kept apart. Batches mix the two so
/// that, in expectation, coda:real = ratio (when both are non-empty).
/// Single writer; concurrent const reads are fine.
class AugmentedBuffer {
 public:
  explicit AugmentedBuffer(double ratio = 1.0);

  void add_real(Transition t);
  void add_coda(Transition t);
  void add_coda(std::vector<Transition> ts);

  const std::vector<Transition>& real() const { return real_; }
  const std::vector<Transition>& coda() const { return coda_; }
  std::size_t size() const { return real_.size() + coda_.size(); }
  double ratio() const { return ratio_; }
  void set_ratio(double ratio);

  /// Probability that one draw comes from the counterfactual pool.
  double coda_fraction() const;
  /// Draws with replacement.
  std::vector<Transition> sample(std::size_t count, Rng& rng) const;

 private:
  double ratio_;
  std::vector<Transition> real_;
  std::vector<Transition> coda_;
};

}  // namespace coda::engine
