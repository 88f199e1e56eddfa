#include "coda/engine/coda.hpp"

#include <algorithm>
#include <cstring>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_set>

#include "coda/core/seed.hpp"

namespace coda::engine {

namespace {

void check_same_space(const Transition& t1, const Transition& t2) {
  if (!(t1.space() == t2.space())) throw DimensionError("coda: transitions come from different spaces");
}

// Number of members of the swap family, or 0 when there is none.
std::uint64_t family_size(const SharedSwapSets& f, bool proper) {
  const int k = f.join_partition().num_blocks();
  if (proper) return f.empty() ? 0 : f.size();
  if (k > 63) return std::numeric_limits<std::uint64_t>::max();
  return std::uint64_t{1} << k;
}

IndependentComponentSet draw(const SharedSwapSets& f, bool proper, Rng& rng) {
  if (proper) return f.sample(rng);
  const int k = f.join_partition().num_blocks();
  if (k <= 62) {
    std::uniform_int_distribution<std::uint64_t> pick(0, (std::uint64_t{1} << k) - 1);
    return f.from_block_bits(pick(rng));
  }
  std::bernoulli_distribution coin(0.5);
  IndependentComponentSet d;
  for (int b = 0; b < k; ++b) {
    if (coin(rng)) {
      const auto& block = f.join_partition().blocks()[b];
      d.members.insert(d.members.end(), block.begin(), block.end());
    }
  }
  std::sort(d.members.begin(), d.members.end());
  return d;
}

template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  const std::size_t t = std::clamp<std::size_t>(threads < 1 ? 1 : threads, 1, std::max<std::size_t>(count, 1));
  if (t == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(t);
  for (std::size_t w = 0; w < t; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += t) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<ComponentPartition> buffer_components(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                                  int threads) {
  std::vector<std::optional<ComponentPartition>> parts(buffer.size());
  parallel_for(buffer.size(), threads, [&](std::size_t i) {
    parts[i] = components(provider.mask(buffer[i].s, buffer[i].a), buffer[i].space());
  });
  std::vector<ComponentPartition> out;
  out.reserve(parts.size());
  for (auto& p : parts) out.push_back(std::move(*p));
  return out;
}

}  // namespace

void CodaConfig::validate() const {
  if (pairs_per_round < 1) throw std::invalid_argument("coda: pairs_per_round must be positive");
  if (max_samples_per_pair < 1) throw std::invalid_argument("coda: max_samples_per_pair must be positive");
  if (threads < 1) throw std::invalid_argument("coda: threads must be positive");
}

Transition swap_nodes(const Transition& t1, const Transition& t2, const IndependentComponentSet& d) {
  check_same_space(t1, t2);
  const FactoredSpace& space = t1.space();
  const int n = space.num_state_components();
  Transition out = t1;
  for (int node : d.members) {
    if (node < 0 || node >= space.num_nodes()) throw DimensionError("coda: swap set names an unknown node");
    if (node < n) {
      std::ranges::copy(t2.s.component(node), out.s.component(node).begin());
      std::ranges::copy(t2.s_next.component(node), out.s_next.component(node).begin());
    } else {
      std::ranges::copy(t2.a.component(node - n), out.a.component(node - n).begin());
    }
  }
  return out;
}

std::optional<Transition> validate_swap(Transition candidate, const IndependentComponentSet& d,
                                        const MaskProvider& provider, const RewardFn& reward_fn, bool relabel) {
  const LocalMask m = provider.mask(candidate.s, candidate.a);
  const ComponentPartition c = components(m, candidate.space());
  if (!c.is_union_of_blocks(d.members)) return std::nullopt;
  if (relabel && reward_fn) {
    const RewardResult r = reward_fn(candidate.s, candidate.a, candidate.s_next);
    candidate.reward = r.reward;
    candidate.terminal = r.terminal;
  } else {
    candidate.terminal = false;
  }
  candidate.provenance = provider.provenance();
  return candidate;
}

std::optional<Transition> coda(const Transition& t1, const Transition& t2, const MaskProvider& provider,
                               const RewardFn& reward_fn, Rng& rng, bool relabel) {
  check_same_space(t1, t2);
  const auto c1 = components(provider.mask(t1.s, t1.a), t1.space());
  const auto c2 = components(provider.mask(t2.s, t2.a), t2.space());
  const SharedSwapSets family(c1, c2);
  if (family.empty()) return std::nullopt;
  const IndependentComponentSet d = family.sample(rng);
  return validate_swap(swap_nodes(t1, t2, d), d, provider, reward_fn, relabel);
}

std::string sample_key(const Transition& t) {
  std::string key;
  key.reserve(sizeof(double) * static_cast<std::size_t>(t.s.size() * 2 + t.a.size()));
  for (const FactoredVector* v : {&t.s, &t.a, &t.s_next}) {
    const auto vals = v->values();
    key.append(reinterpret_cast<const char*>(vals.data()), vals.size_bytes());
  }
  return key;
}

std::vector<Transition> coda_batch(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                   const RewardFn& reward_fn, const CodaConfig& config, std::uint64_t round,
                                   BatchStats* stats) {
  config.validate();
  if (buffer.size() < 2) throw std::invalid_argument("coda_batch: need at least two transitions");
  for (const auto& t : buffer) check_same_space(buffer.front(), t);
  const auto parts = buffer_components(buffer, provider, config.threads);

  const auto pairs = static_cast<std::size_t>(config.pairs_per_round);
  std::vector<std::vector<Transition>> per_pair(pairs);
  std::vector<BatchStats> per_stats(pairs);
  parallel_for(pairs, config.threads, [&](std::size_t p) {
    Rng rng(derive_seed(config.seed, round, p));
    std::uniform_int_distribution<std::size_t> pick(0, buffer.size() - 1);
    const std::size_t i = pick(rng);
    std::size_t j = pick(rng);
    while (j == i) j = pick(rng);
    BatchStats& st = per_stats[p];
    st.pairs = 1;
    const SharedSwapSets family(parts[i], parts[j]);
    const std::uint64_t size = family_size(family, config.require_proper_subset);
    if (size == 0) {
      st.empty_families = 1;
      return;
    }
    const auto want = static_cast<std::size_t>(std::min<std::uint64_t>(size, config.max_samples_per_pair));
    std::set<std::vector<int>> tried;
    std::unordered_set<std::string> seen;
    for (std::size_t attempt = 0; tried.size() < want && attempt < 20 * want; ++attempt) {
      IndependentComponentSet d = draw(family, config.require_proper_subset, rng);
      if (!tried.insert(d.members).second) continue;
      ++st.proposals;
      auto out = validate_swap(swap_nodes(buffer[i], buffer[j], d), d, provider, reward_fn, config.relabel_reward);
      if (!out) continue;
      ++st.accepted;
      if (seen.insert(sample_key(*out)).second) per_pair[p].push_back(std::move(*out));
    }
  });

  std::vector<Transition> out;
  for (std::size_t p = 0; p < pairs; ++p) {
    for (auto& t : per_pair[p]) out.push_back(std::move(t));
    if (stats) {
      stats->pairs += per_stats[p].pairs;
      stats->proposals += per_stats[p].proposals;
      stats->accepted += per_stats[p].accepted;
      stats->empty_families += per_stats[p].empty_families;
    }
  }
  return out;
}

std::vector<Transition> coda_augment(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                     const RewardFn& reward_fn, const CodaConfig& config, std::size_t target,
                                     int max_rounds, BatchStats* stats) {
  std::vector<Transition> out;
  std::unordered_set<std::string> seen;
  for (const auto& t : buffer) seen.insert(sample_key(t));
  for (int round = 0; round < max_rounds && out.size() < target; ++round) {
    for (auto& t : coda_batch(buffer, provider, reward_fn, config, static_cast<std::uint64_t>(round), stats)) {
      if (out.size() >= target) break;
      if (seen.insert(sample_key(t)).second) out.push_back(std::move(t));
    }
  }
  return out;
}

std::vector<Transition> coda_exhaustive(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                        const RewardFn& reward_fn, bool relabel) {
  for (const auto& t : buffer) check_same_space(buffer.front(), t);
  const auto parts = buffer_components(buffer, provider, 1);
  std::unordered_set<std::string> seen;
  for (const auto& t : buffer) seen.insert(sample_key(t));
  std::vector<Transition> out;
  for (std::size_t i = 0; i < buffer.size(); ++i) {
    for (std::size_t j = 0; j < buffer.size(); ++j) {
      if (i == j) continue;
      for (const auto& d : SharedSwapSets(parts[i], parts[j]).enumerate()) {
        auto t = validate_swap(swap_nodes(buffer[i], buffer[j], d), d, provider, reward_fn, relabel);
        if (t && seen.insert(sample_key(*t)).second) out.push_back(std::move(*t));
      }
    }
  }
  return out;
}

std::vector<Transition> swap_closure(const std::vector<Transition>& buffer, const MaskProvider& provider,
                                     std::size_t max_size) {
  std::vector<Transition> all = buffer;
  std::unordered_set<std::string> seen;
  std::vector<Transition> unique;
  for (auto& t : all)
    if (seen.insert(sample_key(t)).second) unique.push_back(t);
  all = std::move(unique);
  for (;;) {
    auto fresh = coda_exhaustive(all, provider);
    if (fresh.empty()) return all;
    if (all.size() + fresh.size() > max_size) throw std::length_error("swap_closure: closure exceeds max_size");
    for (auto& t : fresh) all.push_back(std::move(t));
  }
}

}  // namespace coda::engine
