#include "coda/scm/theory.hpp"

#include <algorithm>
#include <cmath>

namespace coda::scm {

namespace {

void require_inside(const DiscreteSCM& scm, const Subspace& L) {
  if (!(L.index() == scm.index())) throw ScmError("subspace is over different variables");
  if (L.empty()) throw ScmError("subspace must be non-empty");
  if (!L.subset_of(scm.domain())) throw ScmError("subspace leaves the model's domain");
}

bool outputs_differ(const DiscreteSCM& scm, int l, int x1, int x2) {
  for (int u = 0; u < scm.noise()[l].card(); ++u)
    if (scm.eval(l, x1, u) != scm.eval(l, x2, u)) return true;
  return false;
}

bool in_set(const NodeSet& s, int v) { return std::find(s.begin(), s.end(), v) != s.end(); }

}  // namespace

CausalGraph minimal_graph(const DiscreteSCM& scm, const Subspace& L) {
  require_inside(scm, L);
  const JointIndex& idx = scm.index();
  CausalGraph g(scm.num_vars(), scm.num_state());
  for (int x1 = 0; x1 < idx.size(); ++x1) {
    if (!L.contains(x1)) continue;
    for (int j = 0; j < scm.num_vars(); ++j) {
      // Each unordered pair once: only move variable j upward.
      for (int v = idx.value(x1, j) + 1; v < idx.cards()[j]; ++v) {
        const int x2 = idx.with_value(x1, j, v);
        if (!L.contains(x2)) continue;
        for (int i = 0; i < scm.num_state(); ++i) {
          if (!g.has_edge(j, i) && outputs_differ(scm, i, x1, x2)) g.set_edge(j, i);
        }
      }
    }
  }
  return g;
}

DiscreteSCM induce_local(const DiscreteSCM& scm, const Subspace& L) {
  require_inside(scm, L);
  std::vector<DiscreteSCM::Table> tables = scm.tables();
  for (int l = 0; l < scm.num_state(); ++l) {
    const int u = scm.noise()[l].card();
    for (int x = 0; x < scm.index().size(); ++x) {
      if (L.contains(x)) continue;
      std::fill_n(tables[l].begin() + static_cast<std::ptrdiff_t>(x) * u, u, -1);
    }
  }
  const CausalGraph g = minimal_graph(scm, L);
  std::vector<std::vector<int>> parents;
  for (int l = 0; l < scm.num_state(); ++l) parents.push_back(g.parents(l));
  return DiscreteSCM(scm.variables(), scm.num_state(), scm.noise(), std::move(tables), std::move(parents), L);
}

bool independent(const CausalGraph& g, const NodeSet& a, const NodeSet& b) {
  for (int src : a)
    for (int tgt : b)
      if (tgt < g.num_targets() && g.has_edge(src, tgt)) return false;
  for (int src : b)
    for (int tgt : a)
      if (tgt < g.num_targets() && g.has_edge(src, tgt)) return false;
  return true;
}

bool restrictions_agree(const DiscreteSCM& scm, const Subspace& L1, const Subspace& L2, const NodeSet& targets,
                        const NodeSet& sources) {
  const JointIndex& idx = scm.index();
  for (int x1 = 0; x1 < idx.size(); ++x1) {
    if (!L1.contains(x1)) continue;
    for (int j : sources) {
      for (int v = 0; v < idx.cards()[j]; ++v) {
        if (v == idx.value(x1, j)) continue;
        const int x2 = idx.with_value(x1, j, v);
        if (!L2.contains(x2)) continue;
        for (int i : targets) {
          if (i < scm.num_state() && outputs_differ(scm, i, x1, x2)) return false;
        }
      }
    }
  }
  return true;
}

Prop1Verdict check_prop1(const DiscreteSCM& scm, const Subspace& L1, const Subspace& L2, const NodeSet& part_i,
                         const NodeSet& part_j) {
  for (int v : part_i) {
    if (v < 0 || v >= scm.num_vars()) throw ScmError("part node out of range");
    if (in_set(part_j, v)) throw ScmError("parts must be disjoint");
  }
  for (int v : part_j)
    if (v < 0 || v >= scm.num_vars()) throw ScmError("part node out of range");
  Prop1Verdict out;
  out.independent_l1 = independent(minimal_graph(scm, L1), part_i, part_j);
  out.independent_l2 = independent(minimal_graph(scm, L2), part_i, part_j);
  out.independent_union = independent(minimal_graph(scm, L1.unite(L2)), part_i, part_j);
  // Pairs straddling the two neighbourhoods, in both directions.
  out.equal_i = restrictions_agree(scm, L1, L2, part_i, part_j) && restrictions_agree(scm, L2, L1, part_i, part_j);
  out.equal_j = restrictions_agree(scm, L1, L2, part_j, part_i) && restrictions_agree(scm, L2, L1, part_j, part_i);
  out.holds =
      out.independent_union == (out.independent_l1 && out.independent_l2 && out.equal_i && out.equal_j);
  return out;
}

bool check_lemma1(const DiscreteSCM& scm, const Subspace& L, const Subspace& X) {
  if (!L.subset_of(X)) throw ScmError("check_lemma1: L must be a subset of X");
  return minimal_graph(scm, L).subset_of(minimal_graph(scm, X));
}

std::vector<double> next_state_distribution(const DiscreteSCM& scm, int joint) {
  std::vector<int> cards;
  for (int l = 0; l < scm.num_state(); ++l) cards.push_back(scm.variables()[l].card);
  const JointIndex next(cards);
  std::vector<double> dist(next.size(), 0.0);
  // Noise variables are independent, so enumerate their product.
  std::vector<int> u(scm.num_state(), 0);
  while (true) {
    double p = 1.0;
    std::vector<int> out(scm.num_state());
    for (int l = 0; l < scm.num_state(); ++l) {
      p *= scm.noise()[l].probs[u[l]];
      out[l] = scm.eval(l, joint, u[l]);
    }
    dist[next.encode(out)] += p;
    int l = 0;
    while (l < scm.num_state() && ++u[l] == scm.noise()[l].card()) u[l++] = 0;
    if (l == scm.num_state()) break;
  }
  return dist;
}

DoConsistency check_do_consistency(const DiscreteSCM& scm, const Subspace& L, double tol) {
  const DiscreteSCM local = induce_local(scm, L);
  const JointIndex& idx = scm.index();
  DoConsistency out;
  for (int x = 0; x < idx.size(); ++x) {
    if (!L.contains(x)) continue;
    for (int i = 0; i < scm.num_vars(); ++i) {
      for (int y = 0; y < idx.cards()[i]; ++y) {
        const int xd = idx.with_value(x, i, y);
        if (!L.contains(xd)) continue;
        const auto a = next_state_distribution(local, xd);
        const auto b = next_state_distribution(scm, xd);
        for (std::size_t k = 0; k < a.size(); ++k) out.max_abs_diff = std::max(out.max_abs_diff, std::fabs(a[k] - b[k]));
        ++out.comparisons;
      }
    }
  }
  out.consistent = out.max_abs_diff <= tol;
  return out;
}

}  // namespace coda::scm
