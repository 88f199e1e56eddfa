#include <algorithm>
#include <chrono>
#include <numeric>

#include "doctest.h"

#include "coda/core/partition.hpp"
#include "coda/scm/builders.hpp"
#include "coda/scm/serialize.hpp"
#include "coda/scm/theory.hpp"

using namespace coda::scm;

namespace {

coda::LocalMask as_mask(const DiscreteSCM& scm, const CausalGraph& g) {
  coda::LocalMask m(scm.num_state(), scm.num_action());
  for (const auto& [s, t] : g.edges()) m.set(s, t);
  return m;
}

Subspace pin(const DiscreteSCM& scm, int var, int value) {
  std::vector<std::vector<int>> allowed(scm.num_vars());
  allowed[var] = {value};
  return Subspace::box(scm.index(), allowed);
}

}  // namespace

TEST_CASE("joint index round trip") {
  JointIndex idx({2, 3, 2});
  CHECK(idx.size() == 12);
  for (int j = 0; j < idx.size(); ++j) CHECK(idx.encode(idx.decode(j)) == j);
  CHECK(idx.with_value(idx.encode({1, 2, 0}), 1, 0) == idx.encode({1, 0, 0}));
  CHECK_THROWS_AS(idx.encode({2, 0, 0}), ScmError);
  CHECK_THROWS_AS(JointIndex({0}), ScmError);
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(make_scm({{"a", 2}}, 1, {NoiseVar{"u", {0.5, 0.4}}}, [](int, auto&, int) { return 0; }, {{}}),
                  ScmError);
  // Uses its own value but declares no parents.
  CHECK_THROWS_AS(make_scm({{"a", 2}}, 1, {no_noise("u")}, [](int, auto& x, int) { return x[0]; }, {{}}), ScmError);
  CHECK_THROWS_AS(make_scm({{"a", 2}}, 1, {no_noise("u")}, [](int, auto&, int) { return 2; }, {{}}), ScmError);
  auto scm = xor_scm();
  CHECK_THROWS_AS(induce_local(scm, Subspace(scm.index(), std::vector<char>(4, 0))), ScmError);
}

TEST_CASE("minimal graph examples") {
  auto scm = xor_scm();
  auto full = minimal_graph(scm, Subspace::full(scm.index()));
  CHECK(full.has_edge(0, 0));
  CHECK(full.has_edge(1, 0));
  CHECK_FALSE(full.has_edge(0, 1));
  auto local = minimal_graph(scm, pin(scm, 1, 0));
  CHECK(local.has_edge(0, 0));
  CHECK_FALSE(local.has_edge(1, 0));
  // f ignores a variable everywhere.
  auto ignore = make_scm({{"a", 2}, {"b", 3}}, 2, {no_noise("u"), no_noise("v")},
                         [](int l, auto& x, int) { return l == 0 ? x[0] : x[1]; }, {{0}, {1}});
  auto g = minimal_graph(ignore, Subspace::full(ignore.index()));
  CHECK(g.edge_count() == 2);
  CHECK_FALSE(g.has_edge(1, 0));
}

TEST_CASE("non-product subspaces only use completions inside L") {
  auto scm = xor_scm();
  // L = {(0,0), (1,1)}: no two members differ in exactly one variable.
  std::vector<char> m(4, 0);
  m[scm.index().encode({0, 0})] = 1;
  m[scm.index().encode({1, 1})] = 1;
  CHECK(minimal_graph(scm, Subspace(scm.index(), m)).edge_count() == 0);
}

TEST_CASE("minimal graph is equivariant under variable relabeling") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 50; ++trial) {
    auto scm = random_scm(RandomScmConfig{.num_action_vars = 0}, rng);
    const int n = scm.num_vars();
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Variable> vars(n);
    std::vector<NoiseVar> noise(n);
    std::vector<std::vector<int>> parents(n);
    for (int v = 0; v < n; ++v) {
      vars[perm[v]] = scm.variables()[v];
      noise[perm[v]] = scm.noise()[v];
      for (int p : scm.declared_parents()[v]) parents[perm[v]].push_back(perm[p]);
    }
    auto relabeled = make_scm(vars, n, noise,
                              [&](int l, const std::vector<int>& x, int u) {
                                std::vector<int> orig(n);
                                for (int v = 0; v < n; ++v) orig[v] = x[perm[v]];
                                int src = std::find(perm.begin(), perm.end(), l) - perm.begin();
                                return scm.eval(src, scm.index().encode(orig), u);
                              },
                              parents);
    auto g = minimal_graph(scm, Subspace::full(scm.index()));
    auto h = minimal_graph(relabeled, Subspace::full(relabeled.index()));
    for (const auto& [s, t] : g.edges()) CHECK(h.has_edge(perm[s], perm[t]));
    CHECK(g.edge_count() == h.edge_count());
  }
}

TEST_CASE("induce_local examples") {
  auto arms = two_arm_scm();
  auto full = induce_local(arms, Subspace::full(arms.index()));
  CHECK(minimal_graph(full, full.domain()) == minimal_graph(arms, Subspace::full(arms.index())));
  CHECK(coda::components(as_mask(arms, minimal_graph(arms, Subspace::full(arms.index())))).num_blocks() == 1);

  std::vector<char> m(arms.index().size());
  for (int x = 0; x < arms.index().size(); ++x) m[x] = !(arms.index().value(x, 0) == 1 && arms.index().value(x, 1) == 1);
  Subspace no_contact(arms.index(), m);
  auto local = induce_local(arms, no_contact);
  auto p = coda::components(as_mask(arms, minimal_graph(local, local.domain())));
  CHECK(p == coda::ComponentPartition(4, {{0, 2}, {1, 3}}));
  CHECK(local.declared_parents()[0] == std::vector<int>{2});
  CHECK_THROWS_AS(local.eval(0, arms.index().encode({1, 1, 0, 0}), 0), ScmError);
}

TEST_CASE("local graphs are sparser and monotone in the subspace") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 300; ++trial) {
    auto scm = random_scm({}, rng);
    auto a = random_subspace(scm.index(), rng);
    auto b = a.unite(random_subspace(scm.index(), rng));
    auto ga = minimal_graph(scm, a);
    auto gb = minimal_graph(scm, b);
    CHECK(ga.subset_of(gb));
    CHECK(ga.edge_count() <= gb.edge_count());
    CHECK(check_lemma1(scm, a, b));
  }
}

TEST_CASE("lemma 1 examples and precondition") {
  auto scm = xor_scm();
  auto full = Subspace::full(scm.index());
  CHECK(check_lemma1(scm, full, full));
  CHECK(check_lemma1(scm, pin(scm, 1, 0), full));
  CHECK_THROWS_AS(check_lemma1(scm, full, pin(scm, 1, 0)), ScmError);
}

TEST_CASE("proposition 1 examples") {
  auto scm = two_room_scm();
  auto icy = pin(scm, 0, 0);
  auto normal = pin(scm, 0, 1);
  auto same = check_prop1(scm, icy, icy, kTwoRoomMotion, kTwoRoomGround);
  CHECK(same.holds);
  CHECK(same.independent_union == same.independent_l1);

  auto v = check_prop1(scm, icy, normal, kTwoRoomMotion, kTwoRoomGround);
  CHECK(v.independent_l1);
  CHECK(v.independent_l2);
  CHECK_FALSE(v.equal_j);
  CHECK_FALSE(v.independent_union);
  CHECK(v.holds);
  CHECK_THROWS_AS(check_prop1(scm, icy, normal, {0, 2}, {2}), ScmError);
}

TEST_CASE("proposition 1 campaign over random models") {
  auto start = std::chrono::steady_clock::now();
  auto report = run_prop1_campaign(CampaignConfig{.instances = 1000, .seed = 17});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(report.instances == 1000);
  CHECK(report.prop1_holds == 1000);
  CHECK(report.lemma1_holds == 1000);
  CHECK(report.corollary_holds == 1000);
  CHECK(report.failing_seeds.empty());
  // Both sides of the equivalence must actually be exercised.
  CHECK(report.union_independent > 50);
  CHECK(report.local_independent_but_union_not > 20);
  CHECK(report.strict_sparsity > 50);
  CHECK(secs < 60.0);

  auto threaded = run_prop1_campaign(CampaignConfig{.instances = 200, .seed = 17, .threads = 3});
  auto serial = run_prop1_campaign(CampaignConfig{.instances = 200, .seed = 17});
  CHECK(threaded.union_independent == serial.union_independent);
  CHECK(threaded.local_independent_but_union_not == serial.local_independent_but_union_not);
}

TEST_CASE("interventions inside L agree between local and global models") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto scm = random_scm(RandomScmConfig{.min_state_vars = 3, .max_state_vars = 5, .num_action_vars = 1}, rng);
    auto L = random_subspace(scm.index(), rng);
    auto r = check_do_consistency(scm, L);
    CHECK(r.consistent);
    CHECK(r.comparisons >= L.size());
  }
  auto scm = xor_scm();
  auto dist = next_state_distribution(scm, scm.index().encode({1, 0}));
  CHECK(dist[JointIndex({2, 2}).encode({1, 0})] == 1.0);
}

TEST_CASE("noise distributions multiply out") {
  auto scm = make_scm({{"a", 2}, {"b", 2}}, 2, {NoiseVar{"u", {0.25, 0.75}}, NoiseVar{"v", {0.5, 0.5}}},
                      [](int, auto&, int u) { return u; }, {{}, {}});
  auto d = next_state_distribution(scm, 0);
  CHECK(d[0] == doctest::Approx(0.125));
  CHECK(d[1] == doctest::Approx(0.375));
  CHECK(std::accumulate(d.begin(), d.end(), 0.0) == doctest::Approx(1.0));
}

TEST_CASE("json round trip") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    auto scm = random_scm({}, rng);
    CHECK(scm_from_json(to_json(scm)) == scm);
    auto local = induce_local(scm, random_subspace(scm.index(), rng));
    CHECK(scm_from_json(nlohmann::json::parse(to_json(local).dump())) == local);
  }
  CHECK_THROWS_AS(scm_from_json(nlohmann::json::object()), ScmError);
}
