#include "coda/envs/environment.hpp"

#include <cmath>

namespace coda::envs {

std::vector<std::vector<double>> fd_jacobian(const Environment& env, const FactoredVector& s,
                                             const FactoredVector& a, double h) {
  const int ns = s.size();
  const int na = a.size();
  std::vector<std::vector<double>> jac(ns + na, std::vector<double>(ns, 0.0));
  for (int k = 0; k < ns + na; ++k) {
    FactoredVector sp = s, sm = s, ap = a, am = a;
    if (k < ns) {
      sp[k] += h;
      sm[k] -= h;
    } else {
      ap[k - ns] += h;
      am[k - ns] -= h;
    }
    const auto up = env.step(sp, ap).s_next;
    const auto down = env.step(sm, am).s_next;
    for (int l = 0; l < ns; ++l) jac[k][l] = (up[l] - down[l]) / (2 * h);
  }
  return jac;
}

LocalMask mask_from_jacobian(const FactoredSpace& space, const std::vector<std::vector<double>>& jac, double on,
                             double off, int* ambiguous) {
  const int n = space.num_state_components();
  const int m = space.num_action_components();
  LocalMask mask(n, m);
  int unclear = 0;
  auto row_range = [&](int node) {
    if (node < n) return std::pair{space.state_offset(node), space.state_offset(node + 1)};
    const int j = node - n;
    return std::pair{space.state_dim() + space.action_offset(j), space.state_dim() + space.action_offset(j + 1)};
  };
  for (int r = 0; r < n + m; ++r) {
    const auto [r0, r1] = row_range(r);
    for (int c = 0; c < n; ++c) {
      double peak = 0.0;
      for (int k = r0; k < r1; ++k)
        for (int l = space.state_offset(c); l < space.state_offset(c + 1); ++l) peak = std::max(peak, std::fabs(jac[k][l]));
      if (peak > on) {
        mask.set(r, c);
      } else if (peak >= off) {
        ++unclear;
      }
    }
  }
  if (ambiguous) *ambiguous = unclear;
  return mask;
}

}  // namespace coda::envs
