#pragma once

#include <vector>

#include "coda/scm/scm.hpp"

namespace coda::scm {

/// Structurally minimal graph of the model restricted to L: edge V^j -> V'^i
/// iff some noise value u and some pair x1, x2 in L that differ only in
/// variable j give f_i(x1, u) != f_i(x2, u). Only completions inside L are
/// quantified over, so L need not be a product set.
CausalGraph minimal_graph(const DiscreteSCM& scm, const Subspace& L);

/// Local model: tables restricted to L (undefined elsewhere) and parents
/// recomputed as minimal_graph(scm, L). L must lie inside the model's domain.
DiscreteSCM induce_local(const DiscreteSCM& scm, const Subspace& L);

/// A node set over the collapsed numbering: state variable k stands for both
/// its time-t and time-(t+1) copies; action variables only exist at time t.
using NodeSet = std::vector<int>;

/// Mechanisms for `a` and `b` are disconnected in `g`: no edge from a node of
/// one set into a next-state node of the other.
bool independent(const CausalGraph& g, const NodeSet& a, const NodeSet& b);

/// The restrictions of the mechanisms for next-state variables in `targets`
/// agree across L1 and L2 with respect to `sources`: for every x1 in L1 and
/// x2 in L2 that differ in exactly one variable from `sources`, every target
/// and every noise value give equal outputs.
bool restrictions_agree(const DiscreteSCM& scm, const Subspace& L1, const Subspace& L2, const NodeSet& targets,
                        const NodeSet& sources);

struct Prop1Verdict {
  bool independent_l1 = false;
  bool independent_l2 = false;
  bool independent_union = false;
  bool equal_i = false;  // mechanisms of part i agree across L1, L2 w.r.t. part j
  bool equal_j = false;
  /// independent_union == (independent_l1 && independent_l2 && equal_i && equal_j)
  bool holds = false;
};

/// Independence of two mechanisms in the union of two local neighbourhoods,
/// computed from the union's own minimal graph, compared with the per-
/// neighbourhood conditions. Throws ScmError for overlapping parts or empty L.
Prop1Verdict check_prop1(const DiscreteSCM& scm, const Subspace& L1, const Subspace& L2, const NodeSet& part_i,
                         const NodeSet& part_j);

/// Every edge of minimal_graph(L) is an edge of minimal_graph(X). Throws
/// ScmError unless L is a subset of X.
bool check_lemma1(const DiscreteSCM& scm, const Subspace& L, const Subspace& X);

/// Distribution over next-state joint assignments (mixed radix over the state
/// variables) at time-t assignment `joint`.
std::vector<double> next_state_distribution(const DiscreteSCM& scm, int joint);

struct DoConsistency {
  int comparisons = 0;
  bool consistent = true;
  double max_abs_diff = 0.0;
};

/// For every x in L and every single-variable intervention do(V^i = y) that
/// stays in L, the next-state distribution of induce_local(scm, L) equals the
/// global model's within `tol`.
DoConsistency check_do_consistency(const DiscreteSCM& scm, const Subspace& L, double tol = 1e-12);

}  // namespace coda::scm
