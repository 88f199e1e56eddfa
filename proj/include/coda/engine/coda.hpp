#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coda/core/partition.hpp"
#include "coda/core/reward.hpp"
#include "coda/core/space.hpp"
#include "coda/engine/mask_provider.hpp"

namespace coda::engine {

struct CodaConfig {
  int pairs_per_round = 2000;
  int max_samples_per_pair = 5;
  bool relabel_reward = true;
  /// When false, d may also be empty or every node (a plain copy of t1 or t2).
  bool require_proper_subset = true;
  std::uint64_t seed = 0;
  int threads = 1;

  void validate() const;
};

/// Copy of t1 with the s, a and s' slices of every node in d taken from t2.
/// Reward, terminal and provenance are copied from t1.
Transition swap_nodes(const Transition& t1, const Transition& t2, const IndependentComponentSet& d);

/// Validation step: accept iff d is a union of blocks of the components of
/// the provider's mask at (s~, a~). On acceptance the reward is relabeled (when
/// `relabel` and `reward_fn` are set) and the provenance is stamped.
std::optional<Transition> validate_swap(Transition candidate, const IndependentComponentSet& d,
                                        const MaskProvider& provider, const RewardFn& reward_fn, bool relabel);

/// One counterfactual proposal from (t1, t2): draws d uniformly from the
/// shared independent sets of the two source masks, swaps, validates.
/// Returns nothing when there is no shared set or validation rejects.
///
/// Without a reward function (or with relabel off) the reward is copied from
/// t1 and the output is never terminal.
std::optional<Transition> coda(const Transition& t1, const Transition& t2, const MaskProvider& provider,
                               const RewardFn& reward_fn, Rng& rng, bool relabel = true);

/// Byte key of (s, a, s'), used for exact deduplication.
std::string sample_key(const Transition& t);

struct BatchStats {
  std::int64_t pairs = 0;
  std::int64_t proposals = 0;  // d draws that reached validation
  std::int64_t accepted = 0;   // accepted before per-pair deduplication
  std::int64_t empty_families = 0;

  double acceptance_rate() const { return proposals ? static_cast<double>(accepted) / proposals : 0.0; }
};

/// One round of augmentation: `pairs_per_round` random ordered pairs (i != j),
/// up to `max_samples_per_pair` distinct d per pair, outputs deduplicated per
/// pair. Pair p uses an RNG derived from (config.seed, round, p), so the
/// result does not depend on the thread count. Masks of the buffer are
/// computed once up front.
std::vector<Transition> coda_batch(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                   const RewardFn& reward_fn, const CodaConfig& config, std::uint64_t round = 0,
                                   BatchStats* stats = nullptr);

/// Runs rounds of coda_batch until `target` globally unique counterfactuals
/// exist (or `max_rounds` is hit) and returns exactly min(target, found) of them.
/// Outputs that reproduce a buffer sample are not counterfactuals and are dropped.
std::vector<Transition> coda_augment(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                     const RewardFn& reward_fn, const CodaConfig& config, std::size_t target,
                                     int max_rounds = 1000, BatchStats* stats = nullptr);

/// Every accepted output over all ordered pairs and every shared set,
/// deduplicated, excluding outputs equal to a source.
std::vector<Transition> coda_exhaustive(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                        const RewardFn& reward_fn = nullptr, bool relabel = false);

/// Closure of the buffer under accepted swaps, sources included. Throws
/// std::length_error once the set would exceed `max_size`.
std::vector<Transition> swap_closure(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                     std::size_t max_size = 100000);

}  // namespace coda::engine
