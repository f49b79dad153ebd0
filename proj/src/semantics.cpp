#include "nnmdl/semantics.hpp"

#include <algorithm>
#include <bit>

namespace nnmdl {

std::string to_string(FrameClass l) {
  switch (l) {
    case FrameClass::E: return "E";
    case FrameClass::M: return "M";
    case FrameClass::C: return "C";
    case FrameClass::N: return "N";
  }
  return "?";
}

FrameClass parse_frame_class(std::string_view s) {
  if (s == "E") return FrameClass::E;
  if (s == "M") return FrameClass::M;
  if (s == "C") return FrameClass::C;
  if (s == "N") return FrameClass::N;
  throw std::invalid_argument("unknown logic '" + std::string(s) + "' (expected E, M, C or N)");
}

// ---------------------------------------------------------------------------
// Model construction

std::size_t NeighbourhoodModel::world_index(std::string_view id) const {
  auto it = std::find(worlds.begin(), worlds.end(), id);
  if (it == worlds.end()) throw ModelError("unknown world '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - worlds.begin());
}

std::size_t NeighbourhoodModel::element_index(std::string_view id) const {
  auto it = std::lower_bound(elements.begin(), elements.end(), id);
  if (it == elements.end() || *it != id) throw ModelError("unknown element '" + std::string(id) + "'");
  return static_cast<std::size_t>(it - elements.begin());
}

WorldSet NeighbourhoodModel::all_worlds() const {
  return worlds.size() == 64 ? ~WorldSet{0} : (WorldSet{1} << worlds.size()) - 1;
}

NeighbourhoodModel make_model(const std::vector<std::string>& worlds,
                              const std::map<std::string, std::vector<std::string>>& domains, int modalities,
                              bool constant_domain) {
  if (worlds.empty()) throw ModelError("a model needs at least one world");
  if (worlds.size() > kMaxWorlds) throw ModelError("models are limited to 64 worlds");
  NeighbourhoodModel m;
  m.worlds = worlds;
  m.constant_domain = constant_domain;
  std::set<std::string> all;
  for (const auto& [w, ds] : domains) all.insert(ds.begin(), ds.end());
  m.elements.assign(all.begin(), all.end());
  m.domains.assign(worlds.size(), ElementSet(m.elements.size(), false));
  for (const auto& [w, ds] : domains) {
    std::size_t wi = m.world_index(w);
    for (const auto& d : ds) m.domains[wi][m.element_index(d)] = true;
  }
  m.concepts.resize(worlds.size());
  m.roles.resize(worlds.size());
  m.neighbourhoods.assign(static_cast<std::size_t>(std::max(modalities, 0)), std::vector<Neighbourhood>(worlds.size()));
  return m;
}

void set_concept(NeighbourhoodModel& m, std::string_view world, const std::string& name,
                 const std::vector<std::string>& members) {
  std::size_t w = m.world_index(world);
  ElementSet ext(m.elements.size(), false);
  for (const auto& d : members) ext[m.element_index(d)] = true;
  m.concepts[w][name] = std::move(ext);
}

void add_role_edge(NeighbourhoodModel& m, std::string_view world, const std::string& role, std::string_view from,
                   std::string_view to) {
  std::size_t w = m.world_index(world);
  m.roles[w][role].insert({m.element_index(from), m.element_index(to)});
}

WorldSet world_set(const NeighbourhoodModel& m, const std::vector<std::string>& ids) {
  WorldSet s = 0;
  for (const auto& id : ids) s |= WorldSet{1} << m.world_index(id);
  return s;
}

std::vector<std::string> world_ids(const NeighbourhoodModel& m, WorldSet s) {
  std::vector<std::string> out;
  for (std::size_t w = 0; w < m.worlds.size(); ++w)
    if ((s >> w) & 1U) out.push_back(m.worlds[w]);
  std::sort(out.begin(), out.end());
  return out;
}

void set_neighbourhood(NeighbourhoodModel& m, int modality, std::string_view world,
                       const std::vector<std::vector<std::string>>& sets) {
  if (modality < 1 || modality > m.modality_count()) throw ModelError("modality index out of range");
  auto& n = m.neighbourhoods[static_cast<std::size_t>(modality - 1)][m.world_index(world)];
  n.clear();
  for (const auto& s : sets) n.insert(world_set(m, s));
}

void check_well_formed(const NeighbourhoodModel& m) {
  const std::size_t nw = m.worlds.size();
  if (nw == 0) throw ModelError("a model needs at least one world");
  if (nw > kMaxWorlds) throw ModelError("models are limited to 64 worlds");
  if (std::set<std::string>(m.worlds.begin(), m.worlds.end()).size() != nw) throw ModelError("duplicate world id");
  if (!std::is_sorted(m.elements.begin(), m.elements.end())) throw ModelError("element table is not sorted");
  if (m.domains.size() != nw || m.concepts.size() != nw || m.roles.size() != nw)
    throw ModelError("per-world tables do not match the world count");
  for (std::size_t w = 0; w < nw; ++w) {
    const auto& dom = m.domains[w];
    if (dom.size() != m.elements.size()) throw ModelError("domain table has the wrong width");
    if (std::none_of(dom.begin(), dom.end(), [](bool b) { return b; }))
      throw ModelError("domain of world '" + m.worlds[w] + "' is empty");
    if (m.constant_domain && dom != m.domains[0]) throw ModelError("constant-domain model with differing domains");
    for (const auto& [name, ext] : m.concepts[w]) {
      if (ext.size() != m.elements.size()) throw ModelError("extension of '" + name + "' has the wrong width");
      for (std::size_t d = 0; d < ext.size(); ++d)
        if (ext[d] && !dom[d])
          throw ModelError("extension of '" + name + "' at '" + m.worlds[w] + "' leaves the domain");
    }
    for (const auto& [name, edges] : m.roles[w])
      for (auto [a, b] : edges)
        if (a >= dom.size() || b >= dom.size() || !dom[a] || !dom[b])
          throw ModelError("role '" + name + "' at '" + m.worlds[w] + "' leaves the domain");
  }
  for (const auto& per_world : m.neighbourhoods) {
    if (per_world.size() != nw) throw ModelError("neighbourhood table does not match the world count");
    for (const auto& n : per_world)
      for (WorldSet s : n)
        if ((s & ~m.all_worlds()) != 0) throw ModelError("neighbourhood member is not a set of worlds");
  }
}

// ---------------------------------------------------------------------------
// Evaluation

const Neighbourhood& Evaluator::neighbourhood(int modality, std::size_t w) const {
  if (modality < 1 || modality > m_.modality_count())
    throw ModelError("modality index " + std::to_string(modality) + " out of range");
  return m_.neighbourhoods[static_cast<std::size_t>(modality - 1)][w];
}

const std::vector<ElementSet>& Evaluator::extension(const Concept& c) {
  std::string key = serialize(c);
  if (auto it = concept_memo_.find(key); it != concept_memo_.end()) return it->second;

  const std::size_t nw = m_.worlds.size();
  const std::size_t ne = m_.elements.size();
  std::vector<ElementSet> ext(nw, ElementSet(ne, false));
  switch (c.kind()) {
    case ConceptKind::Atom:
      for (std::size_t w = 0; w < nw; ++w)
        if (auto it = m_.concepts[w].find(c.name()); it != m_.concepts[w].end()) ext[w] = it->second;
      break;
    case ConceptKind::Top: ext = m_.domains; break;
    case ConceptKind::Bot: break;
    case ConceptKind::Not: {
      const auto& sub = extension(c.operand());
      for (std::size_t w = 0; w < nw; ++w)
        for (std::size_t d = 0; d < ne; ++d) ext[w][d] = m_.domains[w][d] && !sub[w][d];
      break;
    }
    case ConceptKind::And:
    case ConceptKind::Or: {
      const auto l = extension(c.left());
      const auto& r = extension(c.right());
      bool conj = c.kind() == ConceptKind::And;
      for (std::size_t w = 0; w < nw; ++w)
        for (std::size_t d = 0; d < ne; ++d) ext[w][d] = conj ? (l[w][d] && r[w][d]) : (l[w][d] || r[w][d]);
      break;
    }
    case ConceptKind::Exists:
    case ConceptKind::Forall: {
      const auto& sub = extension(c.operand());
      bool some = c.kind() == ConceptKind::Exists;
      for (std::size_t w = 0; w < nw; ++w) {
        for (std::size_t d = 0; d < ne; ++d) {
          if (!m_.domains[w][d]) continue;
          bool found = false;
          bool all = true;
          if (auto it = m_.roles[w].find(c.name()); it != m_.roles[w].end()) {
            for (auto [a, b] : it->second) {
              if (a != d) continue;
              found = found || sub[w][b];
              all = all && sub[w][b];
            }
          }
          ext[w][d] = some ? found : all;
        }
      }
      break;
    }
    case ConceptKind::Box:
    case ConceptKind::Dia: {
      // Dia D is read as ¬Box¬D; absent elements never belong to ¬D.
      Concept inner = c.kind() == ConceptKind::Box ? c.operand() : Concept::negation(c.operand());
      const auto sub = extension(inner);
      for (std::size_t w = 0; w < nw; ++w) {
        const auto& n = neighbourhood(c.modality(), w);
        for (std::size_t d = 0; d < ne; ++d) {
          if (!m_.domains[w][d]) continue;
          WorldSet ts = 0;
          for (std::size_t v = 0; v < nw; ++v)
            if (sub[v][d]) ts |= WorldSet{1} << v;
          bool in = n.count(ts) != 0;
          ext[w][d] = c.kind() == ConceptKind::Box ? in : !in;
        }
      }
      break;
    }
  }
  return concept_memo_.emplace(std::move(key), std::move(ext)).first->second;
}

const ElementSet& Evaluator::interpret(std::size_t w, const Concept& c) {
  if (w >= m_.worlds.size()) throw ModelError("world index out of range");
  return extension(c)[w];
}

WorldSet Evaluator::truth_set(std::size_t d, const Concept& c) {
  const auto& ext = extension(c);
  WorldSet ts = 0;
  for (std::size_t v = 0; v < m_.worlds.size(); ++v)
    if (ext[v][d]) ts |= WorldSet{1} << v;
  return ts;
}

WorldSet Evaluator::truth_set(const Formula& f) {
  std::string key = serialize(f);
  if (auto it = formula_memo_.find(key); it != formula_memo_.end()) return it->second;
  const std::size_t nw = m_.worlds.size();
  const WorldSet all = m_.all_worlds();
  WorldSet ts = 0;
  switch (f.kind()) {
    case FormulaKind::Inclusion: {
      const auto l = extension(f.lhs());
      const auto& r = extension(f.rhs());
      for (std::size_t w = 0; w < nw; ++w) {
        bool sub = true;
        for (std::size_t d = 0; d < m_.elements.size() && sub; ++d) sub = !l[w][d] || r[w][d];
        if (sub) ts |= WorldSet{1} << w;
      }
      break;
    }
    case FormulaKind::Not: ts = all & ~truth_set(f.operand()); break;
    case FormulaKind::And: ts = truth_set(f.left()) & truth_set(f.right()); break;
    case FormulaKind::Or: ts = truth_set(f.left()) | truth_set(f.right()); break;
    case FormulaKind::Box:
    case FormulaKind::Dia: {
      WorldSet inner = truth_set(f.operand());
      if (f.kind() == FormulaKind::Dia) inner = all & ~inner;
      for (std::size_t w = 0; w < nw; ++w) {
        bool in = neighbourhood(f.modality(), w).count(inner) != 0;
        if (f.kind() == FormulaKind::Box ? in : !in) ts |= WorldSet{1} << w;
      }
      break;
    }
  }
  formula_memo_.emplace(std::move(key), ts);
  return ts;
}

std::set<std::string> interpret_concept(const NeighbourhoodModel& m, std::string_view world, const Concept& c) {
  Evaluator ev(m);
  const auto& ext = ev.interpret(m.world_index(world), c);
  std::set<std::string> out;
  for (std::size_t d = 0; d < ext.size(); ++d)
    if (ext[d]) out.insert(m.elements[d]);
  return out;
}

std::set<std::string> truth_set_concept(const NeighbourhoodModel& m, std::string_view element, const Concept& c) {
  Evaluator ev(m);
  auto ids = world_ids(m, ev.truth_set(m.element_index(element), c));
  return {ids.begin(), ids.end()};
}

bool satisfies(const NeighbourhoodModel& m, std::string_view world, const Formula& f) {
  Evaluator ev(m);
  return ev.satisfies(m.world_index(world), f);
}

// ---------------------------------------------------------------------------
// Frame classes

namespace {

template <typename Fn>
void for_each_superset(WorldSet base, WorldSet all, Fn&& fn) {
  WorldSet free = all & ~base;
  // Enumerate every subset of `free` (Gosper-free submask walk).
  WorldSet sub = free;
  while (true) {
    fn(base | sub);
    if (sub == 0) break;
    sub = (sub - 1) & free;
  }
}

void require_verifiable(const NeighbourhoodModel& m) {
  if (m.worlds.size() > kMaxVerifiableWorlds)
    throw ModelError("model too large to verify supplementation (" + std::to_string(m.worlds.size()) + " worlds > " +
                     std::to_string(kMaxVerifiableWorlds) + ")");
}

}  // namespace

bool check_frame_class(const NeighbourhoodModel& m, FrameClass l) {
  const WorldSet all = m.all_worlds();
  switch (l) {
    case FrameClass::E: return true;
    case FrameClass::M: {
      // Closure under adding one world at a time gives every superset.
      for (const auto& per_world : m.neighbourhoods)
        for (const auto& n : per_world)
          for (WorldSet a : n)
            for (std::size_t w = 0; w < m.worlds.size(); ++w) {
              WorldSet b = a | (WorldSet{1} << w);
              if (b != a && n.count(b) == 0) return false;
            }
      return true;
    }
    case FrameClass::C:
      for (const auto& per_world : m.neighbourhoods)
        for (const auto& n : per_world)
          for (WorldSet a : n)
            for (WorldSet b : n)
              if (n.count(a & b) == 0) return false;
      return true;
    case FrameClass::N:
      for (const auto& per_world : m.neighbourhoods)
        for (const auto& n : per_world)
          if (n.count(all) == 0) return false;
      return true;
  }
  return false;
}

NeighbourhoodModel close_supplementation(NeighbourhoodModel m) {
  require_verifiable(m);
  const WorldSet all = m.all_worlds();
  for (auto& per_world : m.neighbourhoods)
    for (auto& n : per_world) {
      Neighbourhood closed;
      for (WorldSet a : n) for_each_superset(a, all, [&](WorldSet b) { closed.insert(b); });
      n = std::move(closed);
    }
  return m;
}

NeighbourhoodModel close_intersection(NeighbourhoodModel m) {
  for (auto& per_world : m.neighbourhoods)
    for (auto& n : per_world) {
      std::vector<WorldSet> frontier(n.begin(), n.end());
      while (!frontier.empty()) {
        std::vector<WorldSet> next;
        std::vector<WorldSet> members(n.begin(), n.end());
        for (WorldSet a : frontier)
          for (WorldSet b : members)
            if (n.insert(a & b).second) next.push_back(a & b);
        frontier = std::move(next);
      }
    }
  return m;
}

NeighbourhoodModel add_unit(NeighbourhoodModel m) {
  const WorldSet all = m.all_worlds();
  for (auto& per_world : m.neighbourhoods)
    for (auto& n : per_world) n.insert(all);
  return m;
}

}  // namespace nnmdl
