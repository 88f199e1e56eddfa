#include <algorithm>
#include <numeric>
#include <queue>
#include <map>
#include <set>

#include "doctest.h"

#include "coda/core/mask.hpp"
#include "coda/core/partition.hpp"
#include "coda/core/space.hpp"

using namespace coda;

namespace {

// BFS over the symmetrized node graph, written independently of the union-find.
std::vector<int> bfs_labels(const LocalMask& m) {
  const int n = m.rows();
  std::vector<std::vector<int>> adj(n);
  for (int r = 0; r < m.rows(); ++r) {
    for (int c = 0; c < m.cols(); ++c) {
      if (m(r, c) && r != c) {
        adj[r].push_back(c);
        adj[c].push_back(r);
      }
    }
  }
  std::vector<int> label(n, -1);
  int next = 0;
  for (int s = 0; s < n; ++s) {
    if (label[s] >= 0) continue;
    std::queue<int> q;
    q.push(s);
    label[s] = next;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (label[v] < 0) {
          label[v] = next;
          q.push(v);
        }
      }
    }
    ++next;
  }
  return label;
}

bool is_union(const ComponentPartition& p, const std::vector<int>& set) {
  std::vector<char> in(p.num_nodes(), 0);
  for (int x : set) in[x] = 1;
  for (const auto& b : p.blocks()) {
    int hits = 0;
    for (int x : b) hits += in[x];
    if (hits != 0 && hits != static_cast<int>(b.size())) return false;
  }
  return true;
}

// Powerset oracle for D1 ∩ D2.
std::set<std::vector<int>> powerset_oracle(const ComponentPartition& p1, const ComponentPartition& p2) {
  const int n = p1.num_nodes();
  std::set<std::vector<int>> out;
  for (unsigned bits = 1; bits + 1 < (1u << n); ++bits) {
    std::vector<int> s;
    for (int i = 0; i < n; ++i)
      if (bits & (1u << i)) s.push_back(i);
    if (is_union(p1, s) && is_union(p2, s)) out.insert(s);
  }
  return out;
}

LocalMask random_mask(int ns, int na, double density, Rng& rng) {
  LocalMask m(ns, na);
  std::bernoulli_distribution on(density);
  for (int r = 0; r < ns + na; ++r)
    for (int c = 0; c < ns; ++c)
      if (r == c || on(rng)) m.set(r, c);
  return m;
}

ComponentPartition random_partition(int n, Rng& rng) {
  std::uniform_int_distribution<int> lab(0, n - 1);
  std::vector<int> labels(n);
  for (auto& l : labels) l = lab(rng);
  return ComponentPartition::from_labels(labels);
}

}  // namespace

TEST_CASE("space offsets and vector slices") {
  auto sp = make_space({{"a", 2}, {"b", 3}}, {{"u", 1}});
  CHECK(sp->state_dim() == 5);
  CHECK(sp->action_dim() == 1);
  CHECK(sp->state_offset(1) == 2);
  CHECK(sp->node_dim(2) == 1);
  CHECK(sp->is_action_node(2));
  FactoredVector v(sp, VectorKind::State, {0, 1, 2, 3, 4});
  CHECK(v.component(1).size() == 3);
  CHECK(v.component(1)[0] == 2);
  CHECK_THROWS_AS(FactoredVector(sp, VectorKind::State, {1, 2}), DimensionError);
  CHECK_THROWS_AS(make_space({}, {}), DimensionError);
  CHECK_THROWS_AS(make_space({{"z", 0}}, {}), DimensionError);
}

TEST_CASE("transition validates shared space and finite reward") {
  auto sp = make_space({{"a", 1}}, {});
  auto other = make_space({{"a", 1}}, {});
  auto s = FactoredVector::zeros(sp, VectorKind::State);
  auto a = FactoredVector::zeros(sp, VectorKind::Action);
  CHECK_NOTHROW(Transition(s, a, s, 1.0));
  CHECK_THROWS_AS(Transition(s, a, FactoredVector::zeros(make_space({{"b", 2}}, {}), VectorKind::State)),
                  DimensionError);
  CHECK_THROWS(Transition(s, a, s, std::numeric_limits<double>::infinity()));
  (void)other;
}

TEST_CASE("mask construction rejects bad shapes") {
  CHECK_THROWS_AS(LocalMask::from_rows({{1, 0}, {0}}), InvalidMaskError);
  CHECK_THROWS_AS(LocalMask::from_rows({{1, 2}, {0, 1}}), InvalidMaskError);
  CHECK_THROWS_AS(LocalMask::from_rows({{1, 0}}), InvalidMaskError);
  auto sp = make_space({{"a", 1}, {"b", 1}}, {});
  CHECK_THROWS_AS(LocalMask::identity(3, 0).check_matches(*sp), InvalidMaskError);
  CHECK_THROWS_AS(components(LocalMask::identity(3, 0), *sp), InvalidMaskError);
}

TEST_CASE("components examples") {
  CHECK(components(LocalMask::identity(3, 0)) == ComponentPartition(3, {{0}, {1}, {2}}));
  auto m = LocalMask::from_rows({{1, 1}, {0, 1}, {1, 0}});
  CHECK(components(m) == ComponentPartition(3, {{0, 1, 2}}));
  // Two arms: left {S^L, A^L} = nodes {0, 2}, right {S^R, A^R} = nodes {1, 3}.
  auto arms = LocalMask::from_rows({{1, 0}, {0, 1}, {1, 0}, {0, 1}});
  auto p = components(arms);
  CHECK(p.num_blocks() == 2);
  CHECK(p == ComponentPartition(4, {{0, 2}, {1, 3}}));
  // Action node with no row entries stays alone.
  CHECK(components(LocalMask::identity(2, 1)).num_blocks() == 3);
}

TEST_CASE("components agrees with a BFS oracle on random masks") {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    int ns = 1 + static_cast<int>(rng() % 6);
    int na = static_cast<int>(rng() % 3);
    auto m = random_mask(ns, na, 0.15, rng);
    CHECK(components(m) == ComponentPartition::from_labels(bfs_labels(m)));
  }
}

TEST_CASE("components is permutation-equivariant") {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const int ns = 5, na = 2, n = ns + na;
    auto m = random_mask(ns, na, 0.2, rng);
    std::vector<int> perm_s(ns);
    std::iota(perm_s.begin(), perm_s.end(), 0);
    std::shuffle(perm_s.begin(), perm_s.end(), rng);
    std::vector<int> perm(n);
    for (int i = 0; i < ns; ++i) perm[i] = perm_s[i];
    for (int j = ns; j < n; ++j) perm[j] = j;
    LocalMask pm(ns, na);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < ns; ++c)
        if (m(r, c)) pm.set(perm[r], perm[c]);
    auto p = components(m);
    std::vector<std::vector<int>> mapped;
    for (const auto& b : p.blocks()) {
      std::vector<int> nb;
      for (int x : b) nb.push_back(perm[x]);
      mapped.push_back(nb);
    }
    CHECK(components(pm) == ComponentPartition(n, mapped));
  }
}

TEST_CASE("join examples and errors") {
  auto s2 = ComponentPartition::singletons(2);
  CHECK(join(s2, s2) == s2);
  CHECK(join(ComponentPartition(3, {{0, 1}, {2}}), ComponentPartition(3, {{0}, {1, 2}})) ==
        ComponentPartition(3, {{0, 1, 2}}));
  CHECK(join(ComponentPartition::singletons(4), ComponentPartition(4, {{0, 1}, {2}, {3}})) ==
        ComponentPartition(4, {{0, 1}, {2}, {3}}));
  CHECK_THROWS(join(s2, ComponentPartition::singletons(3)));
}

TEST_CASE("join is idempotent, commutative and associative") {
  Rng rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 1 + static_cast<int>(rng() % 10);
    auto a = random_partition(n, rng), b = random_partition(n, rng), c = random_partition(n, rng);
    CHECK(join(a, a) == a);
    CHECK(join(a, b) == join(b, a));
    CHECK(join(join(a, b), c) == join(a, join(b, c)));
  }
}

TEST_CASE("shared independent sets examples") {
  auto s2 = ComponentPartition::singletons(2);
  auto d = shared_independent_sets(s2, s2);
  REQUIRE(d.size() == 2);
  CHECK(d[0].members == std::vector<int>{0});
  CHECK(d[1].members == std::vector<int>{1});
  CHECK(shared_independent_sets(ComponentPartition(3, {{0, 1, 2}}), ComponentPartition::singletons(3)).empty());
  auto d3 = shared_independent_sets(ComponentPartition::singletons(3), ComponentPartition(3, {{0, 1}, {2}}));
  REQUIRE(d3.size() == 2);
  std::set<std::vector<int>> got{d3[0].members, d3[1].members};
  CHECK(got == std::set<std::vector<int>>{{0, 1}, {2}});
}

TEST_CASE("shared independent sets match the powerset oracle exhaustively") {
  Rng rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    int ns = 1 + static_cast<int>(rng() % 6);
    int na = static_cast<int>(rng() % (9 - ns));
    na = std::min(na, 8 - ns);
    auto p1 = components(random_mask(ns, na, 0.12, rng));
    auto p2 = components(random_mask(ns, na, 0.12, rng));
    auto got = shared_independent_sets(p1, p2);
    std::set<std::vector<int>> got_set;
    for (const auto& d : got) {
      CHECK(p1.is_union_of_blocks(d.members));
      CHECK(p2.is_union_of_blocks(d.members));
      got_set.insert(d.members);
    }
    CHECK(got_set.size() == got.size());
    CHECK(got_set == powerset_oracle(p1, p2));
    SharedSwapSets lazy(p1, p2);
    CHECK(lazy.size() == got.size());
  }
}

TEST_CASE("swap-set sampling is uniform over the family") {
  SharedSwapSets sets(ComponentPartition::singletons(3), ComponentPartition::singletons(3));
  REQUIRE(sets.size() == 6);
  Rng rng(9);
  std::map<std::vector<int>, int> counts;
  const int draws = 60000;
  for (int i = 0; i < draws; ++i) ++counts[sets.sample(rng).members];
  CHECK(counts.size() == 6);
  for (const auto& [k, v] : counts) CHECK(std::abs(v - draws / 6) < 600);
  SharedSwapSets none(ComponentPartition(2, {{0, 1}}), ComponentPartition::singletons(2));
  CHECK(none.empty());
  CHECK(none.size() == 0);
  CHECK_THROWS(none.sample(rng));
}
