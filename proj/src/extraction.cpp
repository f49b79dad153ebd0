#include "nnmdl/extraction.hpp"

#include <algorithm>

namespace nnmdl {

namespace {

// Upper limit on stored neighbourhood members across the whole model.
constexpr std::size_t kMaxStoredSets = std::size_t{1} << 20;

WorldSet bit(LabelId n) { return WorldSet{1} << n; }

void require_small(const CompletionSet& t) {
  if (t.label_count() > kMaxWorlds)
    throw ModelError("completion set has more labels than a model can hold (" + std::to_string(t.label_count()) +
                     ")");
}

WorldSet all_labels(const CompletionSet& t) {
  return t.label_count() == 64 ? ~WorldSet{0} : (WorldSet{1} << t.label_count()) - 1;
}

TruthApproximation approx_formula(const CompletionSet& t, TermId f) {
  TruthApproximation a{0, all_labels(t)};
  TermId nf = t.index().neg_formula(f);
  for (LabelId n = 0; n < t.label_count(); ++n) {
    if (t.system(n).has_formula(f)) a.floor |= bit(n);
    if (t.system(n).has_formula(nf)) a.ceil &= ~bit(n);
  }
  return a;
}

TruthApproximation approx_concept(const CompletionSet& t, TermId c, VarId x) {
  TruthApproximation a{0, all_labels(t)};
  TermId nc = t.index().neg_concept(c);
  for (LabelId n = 0; n < t.label_count(); ++n) {
    if (t.system(n).has_concept(c, x)) a.floor |= bit(n);
    if (t.system(n).has_concept(nc, x)) a.ceil &= ~bit(n);
  }
  return a;
}

// Every α with floor ⊆ α ⊆ ceil.
void add_interval(Neighbourhood& out, const TruthApproximation& a, std::size_t& budget) {
  WorldSet free = a.ceil & ~a.floor;
  WorldSet sub = free;
  while (true) {
    if (out.insert(a.floor | sub).second && --budget == 0)
      throw ModelError("extracted neighbourhoods are too large to store");
    if (sub == 0) break;
    sub = (sub - 1) & free;
  }
}

std::vector<TruthApproximation> box_intervals(const CompletionSet& t, LabelId n, int i) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  std::vector<TruthApproximation> out;
  for (TermId f : ix.formulas_of_kind(FormulaKind::Box))
    if (s.has_formula(f) && ix.formula_at(f).modality() == i) out.push_back(approx_formula(t, ix.formula_left(f)));
  for (const auto& [x, flags] : s.concept_table())
    for (TermId c : ix.concepts_of_kind(ConceptKind::Box))
      if (flags[c] && ix.concept_at(c).modality() == i) out.push_back(approx_concept(t, ix.concept_left(c), x));
  return out;
}

// Intervals of the intersections over every non-empty subset, obtained by
// closing the single intervals under pairwise intersection.
std::vector<TruthApproximation> intersect_closure(std::vector<TruthApproximation> v) {
  auto key = [](const TruthApproximation& a) { return std::pair(a.floor, a.ceil); };
  std::set<std::pair<WorldSet, WorldSet>> seen;
  for (const auto& a : v) seen.insert(key(a));
  for (std::size_t a = 0; a < v.size(); ++a)
    for (std::size_t b = 0; b < a; ++b) {
      TruthApproximation c{v[a].floor & v[b].floor, v[a].ceil & v[b].ceil};
      if (seen.insert(key(c)).second) v.push_back(c);
    }
  return v;
}

int max_modality(const ClosureIndex& ix) {
  int m = 0;
  for (TermId f = 0; f < ix.formula_count(); ++f) m = std::max(m, modality_count(ix.formula_at(f)));
  for (TermId c = 0; c < ix.concept_count(); ++c) m = std::max(m, modality_count(ix.concept_at(c)));
  return m;
}

}  // namespace

TruthApproximation floors_ceilings(const CompletionSet& t, const Formula& f) {
  require_small(t);
  auto id = t.index().find(f);
  if (!id) return {0, all_labels(t)};
  return approx_formula(t, *id);
}

TruthApproximation floors_ceilings(const CompletionSet& t, const Concept& c, VarId x) {
  require_small(t);
  auto id = t.index().find(c);
  if (!id) return {0, all_labels(t)};
  return approx_concept(t, *id, x);
}

NeighbourhoodModel extract_model(const CompletionSet& t, FrameClass l) {
  require_small(t);
  if (is_clash(t)) throw ModelError("completion set contains a clash");
  if (!is_complete(t, l)) throw ModelError("completion set is not " + to_string(l) + "-complete");
  const ClosureIndex& ix = t.index();

  std::vector<std::string> worlds;
  std::map<std::string, std::vector<std::string>> domains;
  for (LabelId n = 0; n < t.label_count(); ++n) {
    worlds.push_back(std::to_string(n));
    auto& d = domains[worlds.back()];
    for (VarId x : t.system(n).variables()) d.push_back("x" + std::to_string(x));
  }
  const int modalities = max_modality(ix);
  NeighbourhoodModel m = make_model(worlds, domains, modalities);

  for (LabelId n = 0; n < t.label_count(); ++n) {
    const ConstraintSystem& s = t.system(n);
    const std::string& w = worlds[n];
    for (TermId c : ix.concepts_of_kind(ConceptKind::Atom)) {
      std::vector<std::string> members;
      for (const auto& [x, flags] : s.concept_table())
        if (flags[c]) members.push_back("x" + std::to_string(x));
      set_concept(m, w, ix.concept_at(c).name(), members);
    }
    // r(x,y) holds if asserted, or asserted for some z blocking x.
    std::vector<VarId> vars = s.variables();
    for (const auto& [r, a, b] : s.edges()) {
      const std::string& role = ix.role_at(r);
      add_role_edge(m, w, role, "x" + std::to_string(a), "x" + std::to_string(b));
      for (VarId x : vars) {
        if (x <= a) continue;
        const auto& fx = s.concept_table().at(x);
        const auto& fa = s.concept_table().at(a);
        bool subset = true;
        for (std::size_t c = 0; c < fx.size() && subset; ++c) subset = !fx[c] || fa[c];
        if (subset) add_role_edge(m, w, role, "x" + std::to_string(x), "x" + std::to_string(b));
      }
    }
  }

  std::size_t budget = kMaxStoredSets;
  const WorldSet all = all_labels(t);
  for (int i = 1; i <= modalities; ++i)
    for (LabelId n = 0; n < t.label_count(); ++n) {
      Neighbourhood& nb = m.neighbourhoods[static_cast<std::size_t>(i - 1)][n];
      std::vector<TruthApproximation> iv = box_intervals(t, n, i);
      switch (l) {
        case FrameClass::E:
        case FrameClass::N:
          for (const auto& a : iv) add_interval(nb, a, budget);
          if (l == FrameClass::N && nb.insert(all).second && --budget == 0)
            throw ModelError("extracted neighbourhoods are too large to store");
          break;
        case FrameClass::M:
          for (const auto& a : iv) add_interval(nb, {a.floor, all}, budget);
          break;
        case FrameClass::C:
          for (const auto& a : intersect_closure(iv)) add_interval(nb, a, budget);
          break;
      }
    }
  check_well_formed(m);
  return m;
}

bool validate_model(const NeighbourhoodModel& m, const Formula& phi, FrameClass l) {
  if (modality_count(phi) > m.modality_count()) return false;
  return check_frame_class(m, l) && satisfies(m, m.worlds.front(), phi);
}

bool validate(const CompletionSet& t, const Formula& phi, FrameClass l) {
  return validate_model(extract_model(t, l), phi, l);
}

}  // namespace nnmdl
