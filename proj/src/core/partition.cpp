#include "coda/core/partition.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>

namespace coda {

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

  std::vector<int> labels() {
    std::vector<int> out(parent_.size());
    for (int i = 0; i < static_cast<int>(parent_.size()); ++i) out[i] = find(i);
    return out;
  }

 private:
  std::vector<int> parent_;
  std::vector<int> size_;
};

}  // namespace

ComponentPartition::ComponentPartition(int num_nodes, std::vector<std::vector<int>> blocks) {
  if (num_nodes < 1) throw std::invalid_argument("ComponentPartition: need at least one node");
  block_of_.assign(num_nodes, -1);
  for (auto& b : blocks) {
    if (b.empty()) throw std::invalid_argument("ComponentPartition: empty block");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks.begin(), blocks.end(), [](const auto& x, const auto& y) { return x.front() < y.front(); });
  for (int k = 0; k < static_cast<int>(blocks.size()); ++k) {
    for (int node : blocks[k]) {
      if (node < 0 || node >= num_nodes) throw std::invalid_argument("ComponentPartition: node out of range");
      if (block_of_[node] != -1) throw std::invalid_argument("ComponentPartition: blocks overlap");
      block_of_[node] = k;
    }
  }
  if (std::find(block_of_.begin(), block_of_.end(), -1) != block_of_.end()) {
    throw std::invalid_argument("ComponentPartition: blocks do not cover all nodes");
  }
  blocks_ = std::move(blocks);
}

ComponentPartition ComponentPartition::from_labels(std::span<const int> labels) {
  std::map<int, std::vector<int>> groups;
  for (int i = 0; i < static_cast<int>(labels.size()); ++i) groups[labels[i]].push_back(i);
  std::vector<std::vector<int>> blocks;
  blocks.reserve(groups.size());
  for (auto& [label, members] : groups) blocks.push_back(std::move(members));
  return ComponentPartition(static_cast<int>(labels.size()), std::move(blocks));
}

ComponentPartition ComponentPartition::singletons(int num_nodes) {
  std::vector<std::vector<int>> blocks(num_nodes);
  for (int i = 0; i < num_nodes; ++i) blocks[i] = {i};
  return ComponentPartition(num_nodes, std::move(blocks));
}

bool ComponentPartition::is_union_of_blocks(std::span<const int> nodes) const {
  std::vector<char> in(num_nodes(), 0);
  for (int v : nodes) {
    if (v < 0 || v >= num_nodes()) return false;
    in[v] = 1;
  }
  for (const auto& b : blocks_) {
    const char first = in[b.front()];
    for (int v : b) {
      if (in[v] != first) return false;
    }
  }
  return true;
}

bool IndependentComponentSet::contains(int node) const {
  return std::binary_search(members.begin(), members.end(), node);
}

ComponentPartition components(const LocalMask& mask) {
  DisjointSets sets(mask.rows());
  for (int r = 0; r < mask.rows(); ++r) {
    for (int c = 0; c < mask.cols(); ++c) {
      if (mask(r, c)) sets.unite(r, c);
    }
  }
  const auto labels = sets.labels();
  return ComponentPartition::from_labels(labels);
}

ComponentPartition components(const LocalMask& mask, const FactoredSpace& space) {
  mask.check_matches(space);
  return components(mask);
}

ComponentPartition join(const ComponentPartition& p1, const ComponentPartition& p2) {
  if (p1.num_nodes() != p2.num_nodes()) throw std::invalid_argument("join: node count mismatch");
  DisjointSets sets(p1.num_nodes());
  for (const auto* p : {&p1, &p2}) {
    for (const auto& b : p->blocks()) {
      for (int v : b) sets.unite(b.front(), v);
    }
  }
  const auto labels = sets.labels();
  return ComponentPartition::from_labels(labels);
}

SharedSwapSets::SharedSwapSets(const ComponentPartition& p1, const ComponentPartition& p2) : join_(join(p1, p2)) {}

std::uint64_t SharedSwapSets::size() const {
  const int k = join_.num_blocks();
  if (k > 63) return std::numeric_limits<std::uint64_t>::max();
  return (std::uint64_t{1} << k) - 2;
}

IndependentComponentSet SharedSwapSets::from_block_bits(std::uint64_t bits) const {
  IndependentComponentSet d;
  for (int b = 0; b < join_.num_blocks() && b < 64; ++b) {
    if ((bits >> b) & 1U) {
      const auto& block = join_.blocks()[b];
      d.members.insert(d.members.end(), block.begin(), block.end());
    }
  }
  std::sort(d.members.begin(), d.members.end());
  return d;
}

IndependentComponentSet SharedSwapSets::sample(Rng& rng) const {
  if (empty()) throw std::logic_error("SharedSwapSets::sample: family is empty");
  const int k = join_.num_blocks();
  if (k <= 62) {
    std::uniform_int_distribution<std::uint64_t> pick(1, (std::uint64_t{1} << k) - 2);
    return from_block_bits(pick(rng));
  }
  // Rejection sampling over independent fair bits.
  std::bernoulli_distribution coin(0.5);
  for (;;) {
    std::vector<char> chosen(k);
    int count = 0;
    for (int b = 0; b < k; ++b) count += (chosen[b] = coin(rng) ? 1 : 0);
    if (count == 0 || count == k) continue;
    IndependentComponentSet d;
    for (int b = 0; b < k; ++b) {
      if (chosen[b]) d.members.insert(d.members.end(), join_.blocks()[b].begin(), join_.blocks()[b].end());
    }
    std::sort(d.members.begin(), d.members.end());
    return d;
  }
}

std::vector<IndependentComponentSet> SharedSwapSets::enumerate() const {
  const int k = join_.num_blocks();
  if (k > 20) throw std::length_error("SharedSwapSets::enumerate: too many join blocks to materialize");
  std::vector<IndependentComponentSet> out;
  if (k < 2) return out;
  const std::uint64_t total = std::uint64_t{1} << k;
  out.reserve(total - 2);
  for (std::uint64_t bits = 1; bits + 1 < total; ++bits) out.push_back(from_block_bits(bits));
  return out;
}

std::vector<IndependentComponentSet> shared_independent_sets(const ComponentPartition& p1,
                                                             const ComponentPartition& p2) {
  return SharedSwapSets(p1, p2).enumerate();
}

}  // namespace coda
