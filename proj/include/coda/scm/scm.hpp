#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coda::scm {

class ScmError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Variable {
  std::string name;
  int card = 2;  // values are 0 .. card-1

  bool operator==(const Variable&) const = default;
};

/// Exogenous noise for one next-state variable, stored as its own marginal.
struct NoiseVar {
  std::string name;
  std::vector<double> probs;

  int card() const { return static_cast<int>(probs.size()); }
  bool operator==(const NoiseVar&) const = default;
};

/// Mixed-radix indexing of joint assignments to the time-t variables.
/// Variable 0 is the fastest-moving digit.
class JointIndex {
 public:
  JointIndex() = default;
  explicit JointIndex(std::vector<int> cards);

  int num_vars() const { return static_cast<int>(cards_.size()); }
  int size() const { return size_; }
  const std::vector<int>& cards() const { return cards_; }

  int value(int joint, int var) const { return (joint / stride_[var]) % cards_[var]; }
  std::vector<int> decode(int joint) const;
  int encode(const std::vector<int>& values) const;
  /// `joint` with variable `var` set to `v`.
  int with_value(int joint, int var, int v) const { return joint + (v - value(joint, var)) * stride_[var]; }

  bool operator==(const JointIndex& other) const { return cards_ == other.cards_; }

 private:
  std::vector<int> cards_;
  std::vector<int> stride_;
  int size_ = 1;
};

/// A set L of joint (state, action) assignments.
class Subspace {
 public:
  Subspace(JointIndex index, std::vector<char> members);
  static Subspace full(const JointIndex& index);
  /// Product set: variable k restricted to allowed[k] (empty list = unrestricted).
  static Subspace box(const JointIndex& index, const std::vector<std::vector<int>>& allowed);

  const JointIndex& index() const { return index_; }
  bool contains(int joint) const { return members_[joint] != 0; }
  int size() const;
  bool empty() const { return size() == 0; }
  const std::vector<char>& members() const { return members_; }

  bool subset_of(const Subspace& other) const;
  Subspace unite(const Subspace& other) const;
  Subspace intersect(const Subspace& other) const;

  bool operator==(const Subspace& other) const { return index_ == other.index_ && members_ == other.members_; }

 private:
  JointIndex index_;
  std::vector<char> members_;
};

/// One-step structural causal model over finite variables.
///
/// Time-t variables are the n state variables followed by the action
/// variables. Next-state variable l shares the range of state variable l and
/// is computed as f_l(x, u_l) from the full time-t assignment x and its own
/// noise u_l. Tables are stored over the full joint index; entries outside
/// `domain` are -1 (a locally induced model is undefined there).
class DiscreteSCM {
 public:
  using Table = std::vector<int>;  // [joint * noise_card + u]

  DiscreteSCM(std::vector<Variable> variables, int num_state, std::vector<NoiseVar> noise, std::vector<Table> tables,
              std::vector<std::vector<int>> declared_parents, std::optional<Subspace> domain = std::nullopt);

  int num_vars() const { return static_cast<int>(variables_.size()); }
  int num_state() const { return num_state_; }
  int num_action() const { return num_vars() - num_state_; }
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<NoiseVar>& noise() const { return noise_; }
  const std::vector<Table>& tables() const { return tables_; }
  const std::vector<std::vector<int>>& declared_parents() const { return parents_; }
  const JointIndex& index() const { return index_; }
  const Subspace& domain() const { return domain_; }

  /// f_l(x, u); throws ScmError for x outside the domain.
  int eval(int l, int joint, int u) const;

  bool operator==(const DiscreteSCM& other) const;

 private:
  std::vector<Variable> variables_;
  int num_state_;
  std::vector<NoiseVar> noise_;
  std::vector<Table> tables_;
  std::vector<std::vector<int>> parents_;
  JointIndex index_;
  Subspace domain_;
};

/// Edge set from time-t variables (sources) to next-state variables (targets).
class CausalGraph {
 public:
  CausalGraph(int num_sources, int num_targets);

  int num_sources() const { return sources_; }
  int num_targets() const { return targets_; }
  bool has_edge(int src, int tgt) const { return edges_[static_cast<std::size_t>(src) * targets_ + tgt] != 0; }
  void set_edge(int src, int tgt, bool on = true);
  int edge_count() const;
  bool subset_of(const CausalGraph& other) const;
  std::vector<std::pair<int, int>> edges() const;
  std::vector<int> parents(int tgt) const;

  bool operator==(const CausalGraph&) const = default;

 private:
  int sources_;
  int targets_;
  std::vector<char> edges_;
};

}  // namespace coda::scm
