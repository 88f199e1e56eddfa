#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace coda {

/// Raised when a vector, mask or transition does not match the space it claims.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ComponentSpec {
  std::string name;
  int dim = 1;

  bool operator==(const ComponentSpec&) const = default;
};

/// A state space S = S^1 + ... + S^n and action space A = A^1 + ... + A^m,
/// each stored as one flat real vector with named contiguous slices.
///
/// Nodes are numbered state components first (0..n-1), then action
/// components (n..n+m-1). Every other module uses that numbering.
class FactoredSpace {
 public:
  FactoredSpace(std::vector<ComponentSpec> state, std::vector<ComponentSpec> action);

  int num_state_components() const { return static_cast<int>(state_.size()); }
  int num_action_components() const { return static_cast<int>(action_.size()); }
  int num_nodes() const { return num_state_components() + num_action_components(); }

  int state_dim() const { return state_offsets_.back(); }
  int action_dim() const { return action_offsets_.back(); }

  const ComponentSpec& state_component(int i) const { return state_.at(i); }
  const ComponentSpec& action_component(int j) const { return action_.at(j); }
  const std::vector<ComponentSpec>& state_components() const { return state_; }
  const std::vector<ComponentSpec>& action_components() const { return action_; }

  int state_offset(int i) const { return state_offsets_.at(i); }
  int action_offset(int j) const { return action_offsets_.at(j); }

  /// Dimension of node k in the combined (state, action) numbering.
  int node_dim(int k) const;
  bool is_action_node(int k) const { return k >= num_state_components(); }

  bool operator==(const FactoredSpace& other) const {
    return state_ == other.state_ && action_ == other.action_;
  }

 private:
  std::vector<ComponentSpec> state_;
  std::vector<ComponentSpec> action_;
  std::vector<int> state_offsets_;   // size n+1
  std::vector<int> action_offsets_;  // size m+1
};

using SpacePtr = std::shared_ptr<const FactoredSpace>;

SpacePtr make_space(std::vector<ComponentSpec> state, std::vector<ComponentSpec> action);

enum class VectorKind : std::uint8_t { State, Action };

/// Flat vector tied to a space; component slices follow the space offsets.
class FactoredVector {
 public:
  FactoredVector(SpacePtr space, VectorKind kind, std::vector<double> values);

  static FactoredVector zeros(SpacePtr space, VectorKind kind);

  const FactoredSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  VectorKind kind() const { return kind_; }
  int size() const { return static_cast<int>(values_.size()); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }

  /// Slice of component i (state or action component, according to kind()).
  std::span<const double> component(int i) const;
  std::span<double> component(int i);

  /// Exact bitwise equality of the stored doubles.
  bool bit_equal(const FactoredVector& other) const;

 private:
  SpacePtr space_;
  VectorKind kind_;
  std::vector<double> values_;
};

enum class Provenance : std::uint8_t { Real = 0, Coda = 1, IdentityCoda = 2 };

const char* to_string(Provenance p);

struct Transition {
  FactoredVector s;
  FactoredVector a;
  FactoredVector s_next;
  double reward = 0.0;
  bool terminal = false;
  Provenance provenance = Provenance::Real;

  Transition(FactoredVector s_, FactoredVector a_, FactoredVector s_next_, double reward_ = 0.0,
             bool terminal_ = false, Provenance provenance_ = Provenance::Real);

  const FactoredSpace& space() const { return s.space(); }

  /// Bitwise equality of (s, a, s'); reward and flags are ignored.
  bool same_sample(const Transition& other) const;
};

}  // namespace coda
