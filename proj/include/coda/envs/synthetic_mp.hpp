#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "coda/envs/environment.hpp"

namespace coda::envs {

struct SyntheticMPConfig {
  std::vector<int> block_dims = {4, 3, 2};
  int hidden_units = 32;
  std::optional<double> epsilon;  // unset: stationary
  std::uint64_t weight_seed = 0;
  int probe_samples = 4096;  // states used to normalize output scale

  void validate() const;
};

/// Markov process over scalar components grouped into blocks. Each block b
/// has a local map g_b: R^{d_b} -> R^{d_b}; with epsilon set, a global map
/// G_b: R^{d_b} -> R^{total} is added whenever ||s_b||_2 > epsilon.
///
/// Every map is a single-hidden-layer exact-GELU network with N(0, 1/fan_in)
/// weights, rescaled so its output has unit mean square per coordinate over
/// standard-normal probe states. There is no action (m = 0); reset draws
/// from the standard normal prior.
class SyntheticMP final : public Environment {
 public:
  explicit SyntheticMP(SyntheticMPConfig config = {});

  std::string name() const override { return config_.epsilon ? "nonstationary_mp" : "stationary_mp"; }
  const SpacePtr& space() const override { return space_; }
  StepResult step(const FactoredVector& s, const FactoredVector& a) const override;
  FactoredVector reset(Rng& rng) const override;
  FactoredVector sample_action(Rng& rng) const override;

  const SyntheticMPConfig& config() const { return config_; }
  int num_blocks() const { return static_cast<int>(config_.block_dims.size()); }
  int block_offset(int b) const { return offsets_.at(b); }
  /// Whether block b's global map is active at s.
  bool indicator(const FactoredVector& s, int b) const;
  /// Convenience: step without an action argument.
  StepResult step(const FactoredVector& s) const;

 private:
  struct Net {
    int in = 0, hidden = 0, out = 0;
    std::vector<double> w1, b1, w2, b2;  // row-major [in,hidden], [hidden], [hidden,out], [out]
    double scale = 1.0;
    void eval(const double* x, double* y) const;  // y += scale * net(x)
  };
  Net make_net(int in, int out, Rng& rng) const;
  void normalize(Net& net, Rng& probe) const;

  SyntheticMPConfig config_;
  SpacePtr space_;
  std::vector<int> offsets_;
  std::vector<Net> local_;
  std::vector<Net> global_;
};

}  // namespace coda::envs
