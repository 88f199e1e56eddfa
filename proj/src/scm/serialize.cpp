#include "coda/scm/serialize.hpp"

namespace coda::scm {

nlohmann::json to_json(const DiscreteSCM& scm) {
  nlohmann::json doc;
  doc["variables"] = nlohmann::json::array();
  for (const auto& v : scm.variables()) doc["variables"].push_back({{"name", v.name}, {"card", v.card}});
  doc["num_state"] = scm.num_state();
  doc["noise"] = nlohmann::json::array();
  for (const auto& u : scm.noise()) doc["noise"].push_back({{"name", u.name}, {"probs", u.probs}});
  doc["parents"] = scm.declared_parents();
  doc["tables"] = scm.tables();
  if (!(scm.domain() == Subspace::full(scm.index()))) doc["domain"] = to_json(scm.domain());
  return doc;
}

DiscreteSCM scm_from_json(const nlohmann::json& doc) {
  try {
    std::vector<Variable> vars;
    for (const auto& v : doc.at("variables")) vars.push_back({v.at("name").get<std::string>(), v.at("card").get<int>()});
    std::vector<NoiseVar> noise;
    for (const auto& u : doc.at("noise")) {
      noise.push_back({u.at("name").get<std::string>(), u.at("probs").get<std::vector<double>>()});
    }
    std::vector<int> cards;
    for (const auto& v : vars) cards.push_back(v.card);
    std::optional<Subspace> domain;
    if (doc.contains("domain")) domain = subspace_from_json(JointIndex(cards), doc.at("domain"));
    return DiscreteSCM(std::move(vars), doc.at("num_state").get<int>(), std::move(noise),
                       doc.at("tables").get<std::vector<DiscreteSCM::Table>>(),
                       doc.at("parents").get<std::vector<std::vector<int>>>(), domain);
  } catch (const nlohmann::json::exception& e) {
    throw ScmError(std::string("malformed SCM document: ") + e.what());
  }
}

nlohmann::json to_json(const Subspace& subspace) {
  std::vector<int> m(subspace.members().begin(), subspace.members().end());
  return m;
}

Subspace subspace_from_json(const JointIndex& index, const nlohmann::json& doc) {
  try {
    const auto m = doc.get<std::vector<int>>();
    return Subspace(index, std::vector<char>(m.begin(), m.end()));
  } catch (const nlohmann::json::exception& e) {
    throw ScmError(std::string("malformed subspace: ") + e.what());
  }
}

}  // namespace coda::scm
