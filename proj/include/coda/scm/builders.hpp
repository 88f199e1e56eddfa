#pragma once

#include <functional>
#include <random>

#include "coda/scm/scm.hpp"
#include "coda/scm/theory.hpp"

namespace coda::scm {

/// f(l, x, u): value of next-state variable l at time-t assignment x with noise u.
using StructuralFn = std::function<int(int l, const std::vector<int>& x, int u)>;

/// Tabulates `fn` over the full joint range.
DiscreteSCM make_scm(std::vector<Variable> variables, int num_state, std::vector<NoiseVar> noise,
                     const StructuralFn& fn, std::vector<std::vector<int>> declared_parents);

/// Deterministic noise (one value with probability 1).
NoiseVar no_noise(const std::string& name);

/// s1' = s1 xor s2, s2' = s2 over two binary state variables.
DiscreteSCM xor_scm();

/// Discrete analogue of a corridor with an icy and a normal room. Variables:
/// room, vel, ground (state) and push (action). Motion = {room, vel, push},
/// ground = {ground}. Within a room the ground mechanism ignores motion, but
/// the icy room freezes (ground' = 0) while the normal room keeps it (ground' = ground).
DiscreteSCM two_room_scm();
inline const NodeSet kTwoRoomMotion = {0, 1, 3};
inline const NodeSet kTwoRoomGround = {2};

/// Two binary arms with binary actions. Each arm follows its action, except
/// that when both are in contact (both = 1) they push each other back to 0.
/// Variables: armL, armR (state), actL, actR (action).
DiscreteSCM two_arm_scm();

struct RandomScmConfig {
  int min_state_vars = 2;
  int max_state_vars = 5;
  int num_action_vars = 1;
  int card = 2;
  double parent_prob = 0.4;
  int max_noise_card = 2;
};

DiscreteSCM random_scm(const RandomScmConfig& config, std::mt19937_64& rng);

/// Either a random box (each variable unrestricted or pinned to one value) or
/// a random subset of joint assignments; never empty.
Subspace random_subspace(const JointIndex& index, std::mt19937_64& rng);

/// A pair (L1, L2). A third of the time the two are adjacent boxes: they
/// share a set of pinned variables and differ in the value of one more, the
/// shape of two neighbouring rooms. Otherwise both are independent draws.
std::pair<Subspace, Subspace> random_subspace_pair(const JointIndex& index, std::mt19937_64& rng);

/// Two disjoint non-empty node sets drawn over all variables.
std::pair<NodeSet, NodeSet> random_parts(int num_vars, std::mt19937_64& rng);

struct CampaignConfig {
  int instances = 1000;
  std::uint64_t seed = 0;
  int threads = 1;
  RandomScmConfig scm;
};

struct CampaignReport {
  int instances = 0;
  int prop1_holds = 0;
  int lemma1_holds = 0;
  int corollary_holds = 0;  // G^L has no more edges than G^X and is contained in it
  // Non-vacuity: how often each side of the equivalence was exercised.
  int union_independent = 0;
  int both_local_independent = 0;
  int local_independent_but_union_not = 0;  // only the equality condition fails
  int strict_sparsity = 0;                  // G^L strictly sparser than G^X
  std::vector<std::uint64_t> failing_seeds;
};

CampaignReport run_prop1_campaign(const CampaignConfig& config);

/// Per-instance seed derived from the campaign seed.
std::uint64_t instance_seed(std::uint64_t base, int instance);

}  // namespace coda::scm
