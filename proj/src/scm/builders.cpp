#include "coda/scm/builders.hpp"

#include <algorithm>
#include <mutex>
#include <thread>

namespace coda::scm {

DiscreteSCM make_scm(std::vector<Variable> variables, int num_state, std::vector<NoiseVar> noise,
                     const StructuralFn& fn, std::vector<std::vector<int>> declared_parents) {
  std::vector<int> cards;
  for (const auto& v : variables) cards.push_back(v.card);
  const JointIndex idx(cards);
  if (static_cast<int>(noise.size()) != num_state) throw ScmError("need one noise variable per state variable");
  std::vector<DiscreteSCM::Table> tables(num_state);
  for (int l = 0; l < num_state; ++l) {
    const int u = noise[l].card();
    tables[l].resize(static_cast<std::size_t>(idx.size()) * u);
    for (int x = 0; x < idx.size(); ++x) {
      const auto values = idx.decode(x);
      for (int k = 0; k < u; ++k) tables[l][static_cast<std::size_t>(x) * u + k] = fn(l, values, k);
    }
  }
  return DiscreteSCM(std::move(variables), num_state, std::move(noise), std::move(tables),
                     std::move(declared_parents));
}

NoiseVar no_noise(const std::string& name) { return NoiseVar{name, {1.0}}; }

DiscreteSCM xor_scm() {
  return make_scm({{"s1", 2}, {"s2", 2}}, 2, {no_noise("u1"), no_noise("u2")},
                  [](int l, const std::vector<int>& x, int) { return l == 0 ? x[0] ^ x[1] : x[1]; }, {{0, 1}, {1}});
}

DiscreteSCM two_room_scm() {
  return make_scm({{"room", 2}, {"vel", 2}, {"ground", 2}, {"push", 2}}, 3,
                  {no_noise("u_room"), no_noise("u_vel"), no_noise("u_ground")},
                  [](int l, const std::vector<int>& x, int) {
                    const bool icy = x[0] == 0;
                    switch (l) {
                      case 0: return x[1] == 1 ? 1 - x[0] : x[0];  // moving carries you across
                      case 1: return icy ? x[1] : x[3];            // ice keeps velocity, floor obeys the push
                      default: return icy ? 0 : x[2];
                    }
                  },
                  {{0, 1}, {0, 1, 3}, {0, 2}});
}

DiscreteSCM two_arm_scm() {
  return make_scm({{"armL", 2}, {"armR", 2}, {"actL", 2}, {"actR", 2}}, 2, {no_noise("uL"), no_noise("uR")},
                  [](int l, const std::vector<int>& x, int) {
                    if (x[0] == 1 && x[1] == 1) return 0;
                    return l == 0 ? x[2] : x[3];
                  },
                  {{0, 1, 2}, {0, 1, 3}});
}

DiscreteSCM random_scm(const RandomScmConfig& c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nvars(c.min_state_vars, c.max_state_vars);
  const int n = nvars(rng);
  const int total = n + c.num_action_vars;
  std::vector<Variable> vars;
  for (int i = 0; i < n; ++i) vars.push_back({"s" + std::to_string(i), c.card});
  for (int i = 0; i < c.num_action_vars; ++i) vars.push_back({"a" + std::to_string(i), c.card});
  std::bernoulli_distribution pick(c.parent_prob);
  std::uniform_int_distribution<int> noise_card(1, c.max_noise_card);
  std::uniform_int_distribution<int> value(0, c.card - 1);
  std::uniform_real_distribution<double> weight(0.1, 1.0);

  std::vector<NoiseVar> noise;
  std::vector<std::vector<int>> parents(n);
  // Tables keyed by (parent values, noise) so declared parents are respected.
  std::vector<std::vector<int>> compact(n);
  for (int l = 0; l < n; ++l) {
    for (int j = 0; j < total; ++j)
      if (pick(rng)) parents[l].push_back(j);
    NoiseVar u{"u" + std::to_string(l), {}};
    const int uc = noise_card(rng);
    double sum = 0.0;
    for (int k = 0; k < uc; ++k) {
      u.probs.push_back(weight(rng));
      sum += u.probs.back();
    }
    for (auto& p : u.probs) p /= sum;
    double head = 0.0;
    for (int k = 0; k + 1 < uc; ++k) head += u.probs[k];
    u.probs.back() = 1.0 - head;
    noise.push_back(u);
    int combos = 1;
    for (std::size_t k = 0; k < parents[l].size(); ++k) combos *= c.card;
    compact[l].resize(static_cast<std::size_t>(combos) * uc);
    for (auto& v : compact[l]) v = value(rng);
  }
  auto fn = [&](int l, const std::vector<int>& x, int u) {
    int key = 0;
    for (int p : parents[l]) key = key * c.card + x[p];
    return compact[l][static_cast<std::size_t>(key) * noise[l].card() + u];
  };
  return make_scm(std::move(vars), n, noise, fn, parents);
}

Subspace random_subspace(const JointIndex& index, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.5);
  while (true) {
    Subspace s = Subspace::full(index);
    if (coin(rng)) {
      std::bernoulli_distribution pin(0.4);
      std::vector<std::vector<int>> allowed(index.num_vars());
      for (int k = 0; k < index.num_vars(); ++k) {
        if (pin(rng)) allowed[k] = {std::uniform_int_distribution<int>(0, index.cards()[k] - 1)(rng)};
      }
      s = Subspace::box(index, allowed);
    } else {
      const double density = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
      std::bernoulli_distribution keep(density);
      std::vector<char> m(index.size());
      for (auto& v : m) v = keep(rng);
      s = Subspace(index, std::move(m));
    }
    if (!s.empty()) return s;
  }
}

std::pair<Subspace, Subspace> random_subspace_pair(const JointIndex& index, std::mt19937_64& rng) {
  if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) {
    std::vector<std::vector<int>> shared(index.num_vars());
    std::bernoulli_distribution pin(0.25);
    for (int k = 0; k < index.num_vars(); ++k)
      if (pin(rng)) shared[k] = {std::uniform_int_distribution<int>(0, index.cards()[k] - 1)(rng)};
    const int split = std::uniform_int_distribution<int>(0, index.num_vars() - 1)(rng);
    if (index.cards()[split] >= 2) {
      const int v1 = std::uniform_int_distribution<int>(0, index.cards()[split] - 1)(rng);
      const int v2 = (v1 + std::uniform_int_distribution<int>(1, index.cards()[split] - 1)(rng)) % index.cards()[split];
      auto a = shared, b = shared;
      a[split] = {v1};
      b[split] = {v2};
      Subspace l1 = Subspace::box(index, a);
      Subspace l2 = Subspace::box(index, b);
      if (!l1.empty() && !l2.empty()) return {l1, l2};
    }
  }
  Subspace l1 = random_subspace(index, rng);
  return {l1, random_subspace(index, rng)};
}

std::pair<NodeSet, NodeSet> random_parts(int num_vars, std::mt19937_64& rng) {
  if (num_vars < 2) throw ScmError("random_parts needs at least two variables");
  std::uniform_int_distribution<int> side(0, 4);
  while (true) {
    NodeSet a, b;
    for (int v = 0; v < num_vars; ++v) {
      const int s = side(rng);
      if (s < 2) a.push_back(v);
      else if (s < 4) b.push_back(v);
    }
    if (!a.empty() && !b.empty()) return {a, b};
  }
}

std::uint64_t instance_seed(std::uint64_t base, int instance) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(instance + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

CampaignReport run_prop1_campaign(const CampaignConfig& config) {
  const int threads = std::max(1, config.threads);
  std::vector<CampaignReport> parts(threads);
  auto worker = [&](int t) {
    CampaignReport& r = parts[t];
    for (int k = t; k < config.instances; k += threads) {
      const std::uint64_t seed = instance_seed(config.seed, k);
      std::mt19937_64 rng(seed);
      const DiscreteSCM scm = random_scm(config.scm, rng);
      const auto [L1, L2] = random_subspace_pair(scm.index(), rng);
      const auto [pi, pj] = random_parts(scm.num_vars(), rng);
      const Prop1Verdict v = check_prop1(scm, L1, L2, pi, pj);
      const Subspace X = L1.unite(L2);
      const bool lemma = check_lemma1(scm, L1, X) && check_lemma1(scm, L2, X) &&
                         check_lemma1(scm, X, Subspace::full(scm.index()));
      const CausalGraph gl = minimal_graph(scm, L1);
      const CausalGraph gx = minimal_graph(scm, Subspace::full(scm.index()));
      const bool corollary = gl.subset_of(gx) && gl.edge_count() <= gx.edge_count();
      ++r.instances;
      r.prop1_holds += v.holds;
      r.lemma1_holds += lemma;
      r.corollary_holds += corollary;
      r.union_independent += v.independent_union;
      r.both_local_independent += v.independent_l1 && v.independent_l2;
      r.local_independent_but_union_not += v.independent_l1 && v.independent_l2 && !v.independent_union;
      r.strict_sparsity += gl.edge_count() < gx.edge_count();
      if (!v.holds || !lemma || !corollary) r.failing_seeds.push_back(seed);
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, t);
    for (auto& th : pool) th.join();
  }
  CampaignReport total;
  for (const auto& r : parts) {
    total.instances += r.instances;
    total.prop1_holds += r.prop1_holds;
    total.lemma1_holds += r.lemma1_holds;
    total.corollary_holds += r.corollary_holds;
    total.union_independent += r.union_independent;
    total.both_local_independent += r.both_local_independent;
    total.local_independent_but_union_not += r.local_independent_but_union_not;
    total.strict_sparsity += r.strict_sparsity;
    total.failing_seeds.insert(total.failing_seeds.end(), r.failing_seeds.begin(), r.failing_seeds.end());
  }
  std::sort(total.failing_seeds.begin(), total.failing_seeds.end());
  return total;
}

}  // namespace coda::scm
