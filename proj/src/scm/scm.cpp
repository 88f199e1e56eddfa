#include "coda/scm/scm.hpp"

#include <algorithm>
#include <cmath>

#include "coda/scm/theory.hpp"

namespace coda::scm {

JointIndex::JointIndex(std::vector<int> cards) : cards_(std::move(cards)) {
  stride_.resize(cards_.size());
  size_ = 1;
  for (std::size_t k = 0; k < cards_.size(); ++k) {
    if (cards_[k] < 1) throw ScmError("variable ranges must be non-empty");
    stride_[k] = size_;
    if (size_ > (1 << 24) / cards_[k]) throw ScmError("joint range too large to enumerate");
    size_ *= cards_[k];
  }
}

std::vector<int> JointIndex::decode(int joint) const {
  std::vector<int> v(cards_.size());
  for (std::size_t k = 0; k < cards_.size(); ++k) v[k] = value(joint, static_cast<int>(k));
  return v;
}

int JointIndex::encode(const std::vector<int>& values) const {
  if (values.size() != cards_.size()) throw ScmError("assignment has the wrong number of variables");
  int joint = 0;
  for (std::size_t k = 0; k < cards_.size(); ++k) {
    if (values[k] < 0 || values[k] >= cards_[k]) throw ScmError("assignment value out of range");
    joint += values[k] * stride_[k];
  }
  return joint;
}

Subspace::Subspace(JointIndex index, std::vector<char> members) : index_(std::move(index)), members_(std::move(members)) {
  if (static_cast<int>(members_.size()) != index_.size()) throw ScmError("subspace membership has the wrong size");
  for (char& c : members_) c = c ? 1 : 0;
}

Subspace Subspace::full(const JointIndex& index) { return Subspace(index, std::vector<char>(index.size(), 1)); }

Subspace Subspace::box(const JointIndex& index, const std::vector<std::vector<int>>& allowed) {
  if (static_cast<int>(allowed.size()) != index.num_vars()) throw ScmError("box needs one value list per variable");
  std::vector<char> m(index.size(), 0);
  for (int j = 0; j < index.size(); ++j) {
    bool in = true;
    for (int k = 0; k < index.num_vars() && in; ++k) {
      if (allowed[k].empty()) continue;
      in = std::find(allowed[k].begin(), allowed[k].end(), index.value(j, k)) != allowed[k].end();
    }
    m[j] = in;
  }
  return Subspace(index, std::move(m));
}

int Subspace::size() const { return static_cast<int>(std::count(members_.begin(), members_.end(), 1)); }

bool Subspace::subset_of(const Subspace& other) const {
  if (!(index_ == other.index_)) throw ScmError("subspaces over different variables");
  for (std::size_t j = 0; j < members_.size(); ++j)
    if (members_[j] && !other.members_[j]) return false;
  return true;
}

Subspace Subspace::unite(const Subspace& other) const {
  if (!(index_ == other.index_)) throw ScmError("subspaces over different variables");
  std::vector<char> m(members_.size());
  for (std::size_t j = 0; j < m.size(); ++j) m[j] = members_[j] | other.members_[j];
  return Subspace(index_, std::move(m));
}

Subspace Subspace::intersect(const Subspace& other) const {
  if (!(index_ == other.index_)) throw ScmError("subspaces over different variables");
  std::vector<char> m(members_.size());
  for (std::size_t j = 0; j < m.size(); ++j) m[j] = members_[j] & other.members_[j];
  return Subspace(index_, std::move(m));
}

namespace {

std::vector<int> cards_of(const std::vector<Variable>& vars) {
  std::vector<int> c;
  for (const auto& v : vars) c.push_back(v.card);
  return c;
}

}  // namespace

DiscreteSCM::DiscreteSCM(std::vector<Variable> variables, int num_state, std::vector<NoiseVar> noise,
                         std::vector<Table> tables, std::vector<std::vector<int>> declared_parents,
                         std::optional<Subspace> domain)
    : variables_(std::move(variables)),
      num_state_(num_state),
      noise_(std::move(noise)),
      tables_(std::move(tables)),
      parents_(std::move(declared_parents)),
      index_(cards_of(variables_)),
      domain_(domain ? *domain : Subspace::full(index_)) {
  if (num_state_ < 1 || num_state_ > num_vars()) throw ScmError("need at least one state variable");
  if (!(domain_.index() == index_)) throw ScmError("domain is over different variables");
  if (domain_.empty()) throw ScmError("domain must be non-empty");
  if (static_cast<int>(noise_.size()) != num_state_ || static_cast<int>(tables_.size()) != num_state_ ||
      static_cast<int>(parents_.size()) != num_state_) {
    throw ScmError("need one noise variable, table and parent list per state variable");
  }
  for (int l = 0; l < num_state_; ++l) {
    const auto& probs = noise_[l].probs;
    if (probs.empty()) throw ScmError("noise '" + noise_[l].name + "' has an empty range");
    double total = 0.0;
    for (double p : probs) {
      if (!(p >= 0.0)) throw ScmError("noise probabilities must be non-negative");
      total += p;
    }
    if (std::fabs(total - 1.0) > 1e-12) throw ScmError("noise '" + noise_[l].name + "' does not sum to 1");
    const int u = noise_[l].card();
    if (static_cast<int>(tables_[l].size()) != index_.size() * u) throw ScmError("table size mismatch");
    for (int j = 0; j < index_.size(); ++j) {
      for (int k = 0; k < u; ++k) {
        const int v = tables_[l][j * u + k];
        if (domain_.contains(j) ? (v < 0 || v >= variables_[l].card) : v != -1) {
          throw ScmError("table for '" + variables_[l].name + "' is not total on its domain");
        }
      }
    }
    std::sort(parents_[l].begin(), parents_[l].end());
    for (int p : parents_[l])
      if (p < 0 || p >= num_vars()) throw ScmError("declared parent out of range");
  }
  // Declared parents must cover every structural dependence on the domain.
  const CausalGraph g = minimal_graph(*this, domain_);
  for (const auto& [src, tgt] : g.edges()) {
    if (!std::binary_search(parents_[tgt].begin(), parents_[tgt].end(), src)) {
      throw ScmError("'" + variables_[tgt].name + "' depends on undeclared parent '" + variables_[src].name + "'");
    }
  }
}

int DiscreteSCM::eval(int l, int joint, int u) const {
  if (!domain_.contains(joint)) throw ScmError("assignment outside the model's domain");
  return tables_[l][static_cast<std::size_t>(joint) * noise_[l].card() + u];
}

bool DiscreteSCM::operator==(const DiscreteSCM& o) const {
  return variables_ == o.variables_ && num_state_ == o.num_state_ && noise_ == o.noise_ && tables_ == o.tables_ &&
         parents_ == o.parents_ && domain_ == o.domain_;
}

CausalGraph::CausalGraph(int num_sources, int num_targets)
    : sources_(num_sources), targets_(num_targets), edges_(static_cast<std::size_t>(num_sources) * num_targets, 0) {}

void CausalGraph::set_edge(int src, int tgt, bool on) {
  if (src < 0 || src >= sources_ || tgt < 0 || tgt >= targets_) throw ScmError("edge out of range");
  edges_[static_cast<std::size_t>(src) * targets_ + tgt] = on;
}

int CausalGraph::edge_count() const { return static_cast<int>(std::count(edges_.begin(), edges_.end(), 1)); }

bool CausalGraph::subset_of(const CausalGraph& other) const {
  if (sources_ != other.sources_ || targets_ != other.targets_) throw ScmError("graphs over different variables");
  for (std::size_t k = 0; k < edges_.size(); ++k)
    if (edges_[k] && !other.edges_[k]) return false;
  return true;
}

std::vector<std::pair<int, int>> CausalGraph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int s = 0; s < sources_; ++s)
    for (int t = 0; t < targets_; ++t)
      if (has_edge(s, t)) out.emplace_back(s, t);
  return out;
}

std::vector<int> CausalGraph::parents(int tgt) const {
  std::vector<int> out;
  for (int s = 0; s < sources_; ++s)
    if (has_edge(s, tgt)) out.push_back(s);
  return out;
}

}  // namespace coda::scm
