#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "coda/core/mask.hpp"

namespace coda {

using Rng = std::mt19937_64;

/// A partition of nodes {0, ..., N-1} into disjoint, non-empty blocks.
///
/// Stored canonically: every block sorted ascending, blocks ordered by their
/// smallest member. Two partitions are equal iff their canonical forms are.
class ComponentPartition {
 public:
  ComponentPartition(int num_nodes, std::vector<std::vector<int>> blocks);
  /// Partition from a block label per node (labels need not be contiguous).
  static ComponentPartition from_labels(std::span<const int> labels);
  static ComponentPartition singletons(int num_nodes);

  int num_nodes() const { return static_cast<int>(block_of_.size()); }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_of(int node) const { return block_of_.at(node); }

  /// True iff `nodes` is exactly a union of blocks of this partition.
  bool is_union_of_blocks(std::span<const int> nodes) const;

  bool operator==(const ComponentPartition& other) const { return blocks_ == other.blocks_; }

 private:
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_of_;
};

/// A candidate swap set d: sorted node indices, always a union of blocks of
/// the partition(s) it was drawn from.
struct IndependentComponentSet {
  std::vector<int> members;

  bool contains(int node) const;
  bool operator==(const IndependentComponentSet&) const = default;
  auto operator<=>(const IndependentComponentSet&) const = default;
};

/// Connected components of the collapsed time-slice graph of `mask`.
///
/// Node i at time t and node i at time t+1 are one node; action rows are
/// padded with all-zero columns, so an action joins a block only through its
/// own row. Edge (r, c) joins r and c.
ComponentPartition components(const LocalMask& mask);
/// Same as above, additionally checking the mask against `space`.
ComponentPartition components(const LocalMask& mask, const FactoredSpace& space);

/// Finest partition coarser than both inputs (transitive closure of block overlap).
ComponentPartition join(const ComponentPartition& p1, const ComponentPartition& p2);

/// Lazy view of D1 ∩ D2: all non-empty proper node sets that are unions of
/// blocks of both p1 and p2.
///
/// A set is a union of blocks of p iff it is closed under p's "same block"
/// relation. Being closed under two relations is the same as being closed
/// under the transitive closure of their union, whose classes are exactly the
/// blocks of join(p1, p2). So D1 ∩ D2 is the family of non-empty proper
/// unions of join blocks, which has 2^k - 2 members for k join blocks.
class SharedSwapSets {
 public:
  SharedSwapSets(const ComponentPartition& p1, const ComponentPartition& p2);

  const ComponentPartition& join_partition() const { return join_; }
  bool empty() const { return join_.num_blocks() < 2; }
  /// Number of members; saturates at UINT64_MAX for more than 63 join blocks.
  std::uint64_t size() const;

  /// Uniform draw over the family (uniform non-empty proper subset of join blocks).
  IndependentComponentSet sample(Rng& rng) const;
  /// Member selected by a bit pattern over join blocks (bit b = block b).
  IndependentComponentSet from_block_bits(std::uint64_t bits) const;
  /// Materialized family, in increasing bit-pattern order. Throws for more than 20 join blocks.
  std::vector<IndependentComponentSet> enumerate() const;

 private:
  ComponentPartition join_;
};

/// Materialized D1 ∩ D2 (see SharedSwapSets).
std::vector<IndependentComponentSet> shared_independent_sets(const ComponentPartition& p1,
                                                             const ComponentPartition& p2);

}  // namespace coda
