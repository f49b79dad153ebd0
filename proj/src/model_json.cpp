#include <algorithm>

#include "json.hpp"
#include "nnmdl/semantics.hpp"

namespace nnmdl {

using nlohmann::json;

namespace {

std::vector<std::string> members(const NeighbourhoodModel& m, const ElementSet& s) {
  std::vector<std::string> out;
  for (std::size_t d = 0; d < s.size(); ++d)
    if (s[d]) out.push_back(m.elements[d]);
  return out;  // elements are sorted, so this is too
}

}  // namespace

std::string model_to_json(const NeighbourhoodModel& m, int indent) {
  json j;
  j["worlds"] = m.worlds;
  j["constant_domain"] = m.constant_domain;
  json domains = json::object();
  json concepts = json::object();
  json roles = json::object();
  for (std::size_t w = 0; w < m.worlds.size(); ++w) {
    const std::string& id = m.worlds[w];
    domains[id] = members(m, m.domains[w]);
    json cs = json::object();
    for (const auto& [name, ext] : m.concepts[w]) cs[name] = members(m, ext);
    concepts[id] = cs;
    json rs = json::object();
    for (const auto& [name, edges] : m.roles[w]) {
      std::vector<std::pair<std::string, std::string>> pairs;
      for (auto [a, b] : edges) pairs.emplace_back(m.elements[a], m.elements[b]);
      std::sort(pairs.begin(), pairs.end());
      json arr = json::array();
      for (const auto& [a, b] : pairs) arr.push_back({a, b});
      rs[name] = arr;
    }
    roles[id] = rs;
  }
  j["domains"] = domains;
  j["concepts"] = concepts;
  j["roles"] = roles;
  json nbhd = json::object();
  for (std::size_t i = 0; i < m.neighbourhoods.size(); ++i) {
    json per_world = json::object();
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      std::vector<std::vector<std::string>> sets;
      for (WorldSet s : m.neighbourhoods[i][w]) sets.push_back(world_ids(m, s));
      std::sort(sets.begin(), sets.end());
      per_world[m.worlds[w]] = sets;
    }
    nbhd[std::to_string(i + 1)] = per_world;
  }
  j["neighbourhoods"] = nbhd;
  return j.dump(indent);
}

NeighbourhoodModel model_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("model JSON: ") + e.what());
  }
  try {
    auto worlds = j.at("worlds").get<std::vector<std::string>>();
    std::map<std::string, std::vector<std::string>> domains;
    for (const auto& [w, ds] : j.at("domains").items()) domains[w] = ds.get<std::vector<std::string>>();
    for (const auto& w : worlds)
      if (!domains.count(w)) throw ModelError("world '" + w + "' has no domain");
    int modalities = 0;
    if (j.contains("neighbourhoods"))
      for (const auto& [key, _] : j.at("neighbourhoods").items()) {
        int i = std::stoi(key);
        if (i < 1) throw ModelError("modality index must be >= 1");
        modalities = std::max(modalities, i);
      }
    NeighbourhoodModel m = make_model(worlds, domains, modalities, j.value("constant_domain", false));
    if (j.contains("concepts"))
      for (const auto& [w, cs] : j.at("concepts").items())
        for (const auto& [name, ds] : cs.items()) set_concept(m, w, name, ds.get<std::vector<std::string>>());
    if (j.contains("roles"))
      for (const auto& [w, rs] : j.at("roles").items())
        for (const auto& [name, pairs] : rs.items())
          for (const auto& p : pairs) {
            auto ab = p.get<std::vector<std::string>>();
            if (ab.size() != 2) throw ModelError("role edge must be a pair");
            add_role_edge(m, w, name, ab[0], ab[1]);
          }
    if (j.contains("neighbourhoods"))
      for (const auto& [key, per_world] : j.at("neighbourhoods").items())
        for (const auto& [w, sets] : per_world.items())
          set_neighbourhood(m, std::stoi(key), w, sets.get<std::vector<std::vector<std::string>>>());
    check_well_formed(m);
    return m;
  } catch (const json::exception& e) {
    throw ModelError(std::string("model JSON: ") + e.what());
  }
}

}  // namespace nnmdl
