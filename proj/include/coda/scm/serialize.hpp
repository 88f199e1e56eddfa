#pragma once

#include <string>

#include "json.hpp"

#include "coda/scm/scm.hpp"

namespace coda::scm {

// Document layout:
//   {"variables": [{"name", "card"}], "num_state": n,
//    "noise": [{"name", "probs"}], "parents": [[...]],
//    "tables": [[...]],            // full joint index x noise, -1 off-domain
//    "domain": [0/1 ...]}          // optional, defaults to everything
nlohmann::json to_json(const DiscreteSCM& scm);
DiscreteSCM scm_from_json(const nlohmann::json& doc);

nlohmann::json to_json(const Subspace& subspace);
Subspace subspace_from_json(const JointIndex& index, const nlohmann::json& doc);

}  // namespace coda::scm
