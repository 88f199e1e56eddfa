#include "coda/core/space.hpp"

#include <cmath>
#include <cstring>

namespace coda {

FactoredSpace::FactoredSpace(std::vector<ComponentSpec> state, std::vector<ComponentSpec> action)
    : state_(std::move(state)), action_(std::move(action)) {
  if (state_.empty()) throw DimensionError("FactoredSpace: at least one state component required");
  state_offsets_.assign(1, 0);
  for (const auto& c : state_) {
    if (c.dim < 1) throw DimensionError("FactoredSpace: component '" + c.name + "' has dim < 1");
    state_offsets_.push_back(state_offsets_.back() + c.dim);
  }
  action_offsets_.assign(1, 0);
  for (const auto& c : action_) {
    if (c.dim < 1) throw DimensionError("FactoredSpace: component '" + c.name + "' has dim < 1");
    action_offsets_.push_back(action_offsets_.back() + c.dim);
  }
}

int FactoredSpace::node_dim(int k) const {
  if (k < 0 || k >= num_nodes()) throw DimensionError("FactoredSpace::node_dim: node out of range");
  return is_action_node(k) ? action_[k - num_state_components()].dim : state_[k].dim;
}

SpacePtr make_space(std::vector<ComponentSpec> state, std::vector<ComponentSpec> action) {
  return std::make_shared<const FactoredSpace>(std::move(state), std::move(action));
}

FactoredVector::FactoredVector(SpacePtr space, VectorKind kind, std::vector<double> values)
    : space_(std::move(space)), kind_(kind), values_(std::move(values)) {
  if (!space_) throw DimensionError("FactoredVector: null space");
  const int expected = kind_ == VectorKind::State ? space_->state_dim() : space_->action_dim();
  if (static_cast<int>(values_.size()) != expected) {
    throw DimensionError("FactoredVector: expected " + std::to_string(expected) + " values, got " +
                         std::to_string(values_.size()));
  }
}

FactoredVector FactoredVector::zeros(SpacePtr space, VectorKind kind) {
  const int n = kind == VectorKind::State ? space->state_dim() : space->action_dim();
  return FactoredVector(std::move(space), kind, std::vector<double>(n, 0.0));
}

std::span<const double> FactoredVector::component(int i) const {
  if (kind_ == VectorKind::State) {
    return std::span<const double>(values_).subspan(space_->state_offset(i), space_->state_component(i).dim);
  }
  return std::span<const double>(values_).subspan(space_->action_offset(i), space_->action_component(i).dim);
}

std::span<double> FactoredVector::component(int i) {
  if (kind_ == VectorKind::State) {
    return std::span<double>(values_).subspan(space_->state_offset(i), space_->state_component(i).dim);
  }
  return std::span<double>(values_).subspan(space_->action_offset(i), space_->action_component(i).dim);
}

bool FactoredVector::bit_equal(const FactoredVector& other) const {
  return values_.size() == other.values_.size() &&
         (values_.empty() ||
          std::memcmp(values_.data(), other.values_.data(), values_.size() * sizeof(double)) == 0);
}

const char* to_string(Provenance p) {
  switch (p) {
    case Provenance::Real: return "real";
    case Provenance::Coda: return "coda";
    case Provenance::IdentityCoda: return "identity-coda";
  }
  return "unknown";
}

Transition::Transition(FactoredVector s_, FactoredVector a_, FactoredVector s_next_, double reward_,
                       bool terminal_, Provenance provenance_)
    : s(std::move(s_)),
      a(std::move(a_)),
      s_next(std::move(s_next_)),
      reward(reward_),
      terminal(terminal_),
      provenance(provenance_) {
  if (s.kind() != VectorKind::State || s_next.kind() != VectorKind::State || a.kind() != VectorKind::Action) {
    throw DimensionError("Transition: wrong vector kinds");
  }
  if (!(s.space() == s_next.space()) || !(s.space() == a.space())) {
    throw DimensionError("Transition: s, a and s' must share one space");
  }
  if (!std::isfinite(reward)) throw DimensionError("Transition: reward must be finite");
}

bool Transition::same_sample(const Transition& other) const {
  return s.bit_equal(other.s) && a.bit_equal(other.a) && s_next.bit_equal(other.s_next);
}

}  // namespace coda
