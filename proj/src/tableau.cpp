#include "nnmdl/tableau.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "nnmdl/extraction.hpp"

namespace nnmdl {

// ---------------------------------------------------------------------------
// Closure index

ClosureIndex::ClosureIndex(const Formula& phi) {
  Closure cl = closure(phi);
  fg_ = cl.fg_size();
  for (const auto& r : cl.roles) roles_.push_back(r);

  // Interning also pulls in children and negations, so the tables are closed
  // even for subterms closure() would not list on its own (top for formulas
  // without inclusions, say).
  auto intern_role = [&](const std::string& r) {
    auto it = std::find(roles_.begin(), roles_.end(), r);
    if (it != roles_.end()) return static_cast<TermId>(it - roles_.begin());
    roles_.push_back(r);
    return static_cast<TermId>(roles_.size() - 1);
  };
  std::function<TermId(const Concept&)> ic = [&](const Concept& c) -> TermId {
    if (auto it = concept_ids_.find(c); it != concept_ids_.end()) return it->second;
    auto id = static_cast<TermId>(concepts_.size());
    concept_ids_.emplace(c, id);
    concepts_.push_back({c});
    TermId l = 0, r = 0, role = 0;
    switch (c.kind()) {
      case ConceptKind::And:
      case ConceptKind::Or:
        l = ic(c.left());
        r = ic(c.right());
        break;
      case ConceptKind::Exists:
      case ConceptKind::Forall:
        role = intern_role(c.name());
        l = ic(c.operand());
        break;
      case ConceptKind::Not:
      case ConceptKind::Box:
      case ConceptKind::Dia:
        l = ic(c.operand());
        break;
      default:
        break;
    }
    concepts_[id].left = l;
    concepts_[id].right = r;
    concepts_[id].role = role;
    concepts_[id].neg = ic(neg_nnf(c));
    return id;
  };
  std::function<TermId(const Formula&)> iff = [&](const Formula& f) -> TermId {
    if (auto it = formula_ids_.find(f); it != formula_ids_.end()) return it->second;
    auto id = static_cast<TermId>(formulas_.size());
    formula_ids_.emplace(f, id);
    formulas_.push_back({f});
    TermId l = 0, r = 0;
    switch (f.kind()) {
      case FormulaKind::Inclusion:
        l = ic(f.rhs());
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        l = iff(f.left());
        r = iff(f.right());
        break;
      case FormulaKind::Not:
      case FormulaKind::Box:
      case FormulaKind::Dia:
        l = iff(f.operand());
        break;
    }
    formulas_[id].left = l;
    formulas_[id].right = r;
    formulas_[id].neg = iff(neg_nnf(f));
    return id;
  };
  top_ = ic(Concept::top());
  bot_ = ic(Concept::bot());
  for (const auto& c : cl.concepts) ic(c);
  for (const auto& f : cl.formulas) iff(f);
  iff(phi);

  for (TermId id = 0; id < concepts_.size(); ++id)
    concept_kinds_[static_cast<std::size_t>(concepts_[id].term.kind())].push_back(id);
  for (TermId id = 0; id < formulas_.size(); ++id)
    formula_kinds_[static_cast<std::size_t>(formulas_[id].term.kind())].push_back(id);
}

std::optional<TermId> ClosureIndex::find(const Concept& c) const {
  auto it = concept_ids_.find(c);
  if (it == concept_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> ClosureIndex::find(const Formula& f) const {
  auto it = formula_ids_.find(f);
  if (it == formula_ids_.end()) return std::nullopt;
  return it->second;
}

std::optional<TermId> ClosureIndex::find_role(const std::string& r) const {
  auto it = std::find(roles_.begin(), roles_.end(), r);
  if (it == roles_.end()) return std::nullopt;
  return static_cast<TermId>(it - roles_.begin());
}

// ---------------------------------------------------------------------------
// Constraint systems

bool ConstraintSystem::has_concept(TermId c, VarId x) const {
  auto it = concepts_.find(x);
  return it != concepts_.end() && it->second[c];
}

std::vector<VarId> ConstraintSystem::variables() const {
  std::vector<VarId> out;
  out.reserve(concepts_.size());
  for (const auto& [x, _] : concepts_) out.push_back(x);
  return out;
}

std::size_t ConstraintSystem::constraint_count() const {
  std::size_t n = static_cast<std::size_t>(std::count(formulas_.begin(), formulas_.end(), true)) + edges_.size();
  for (const auto& [_, flags] : concepts_) n += static_cast<std::size_t>(std::count(flags.begin(), flags.end(), true));
  return n;
}

bool ConstraintSystem::add_formula(TermId f) {
  if (formulas_[f]) return false;
  formulas_[f] = true;
  return true;
}

bool ConstraintSystem::add_concept(TermId c, VarId x, std::size_t concept_count) {
  auto& flags = concepts_[x];
  if (flags.empty()) flags.assign(concept_count, false);
  if (flags[c]) return false;
  flags[c] = true;
  return true;
}

std::string rule_name(Rule r) {
  switch (r) {
    case Rule::And: return "R_and";
    case Rule::Or: return "R_or";
    case Rule::Sqcap: return "R_sqcap";
    case Rule::Sqcup: return "R_sqcup";
    case Rule::Exists: return "R_exists";
    case Rule::Forall: return "R_forall";
    case Rule::Eq: return "R_eq";
    case Rule::Neq: return "R_neq";
    case Rule::Modal: return "R_L";
  }
  return "?";
}

std::size_t TableauStats::total_applications() const {
  std::size_t n = 0;
  for (auto a : applications) n += a;
  return n;
}

std::vector<LabelId> CompletionSet::label_order() const {
  std::vector<LabelId> out(systems_.size());
  for (LabelId n = 0; n < out.size(); ++n) out[n] = n;
  return out;
}

bool CompletionSet::contains(const Constraint& c) const {
  if (c.label >= systems_.size()) return false;
  const ConstraintSystem& s = systems_[c.label];
  switch (c.kind) {
    case Constraint::Kind::Formula: return s.has_formula(c.term);
    case Constraint::Kind::Concept: return s.has_concept(c.term, c.x);
    case Constraint::Kind::Role: return s.has_edge(c.term, c.x, c.y);
  }
  return false;
}

LabelId CompletionSet::new_label() {
  auto n = static_cast<LabelId>(systems_.size());
  systems_.emplace_back(n, index_->formula_count());
  ++stats_.labels_created;
  return n;
}

VarId CompletionSet::new_variable() {
  ++stats_.variables_created;
  return next_var_++;
}

bool CompletionSet::add(const Constraint& c) {
  while (c.label >= systems_.size()) new_label();
  if (c.kind != Constraint::Kind::Formula) {
    VarId top = c.kind == Constraint::Kind::Role ? std::max(c.x, c.y) : c.x;
    while (top >= next_var_) new_variable();
  }
  ConstraintSystem& s = systems_[c.label];
  switch (c.kind) {
    case Constraint::Kind::Formula: return s.add_formula(c.term);
    case Constraint::Kind::Concept: return s.add_concept(c.term, c.x, index_->concept_count());
    case Constraint::Kind::Role: return s.add_edge(c.term, c.x, c.y);
  }
  return false;
}

std::string to_string(const CompletionSet& t, const Constraint& c) {
  const ClosureIndex& ix = t.index();
  std::ostringstream os;
  os << c.label << ": ";
  switch (c.kind) {
    case Constraint::Kind::Formula: os << serialize(ix.formula_at(c.term)); break;
    case Constraint::Kind::Concept: os << serialize(ix.concept_at(c.term)) << "(x" << c.x << ")"; break;
    case Constraint::Kind::Role: os << ix.role_at(c.term) << "(x" << c.x << ",x" << c.y << ")"; break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Initial set, clashes, blocking

CompletionSet init(const Formula& phi) {
  if (!is_normalized(phi)) throw std::invalid_argument("init: formula is not normalized");
  auto index = std::make_shared<ClosureIndex>(phi);
  CompletionSet t(index);
  LabelId n = t.new_label();
  VarId x = t.new_variable();
  t.add({Constraint::Kind::Formula, n, *index->find(phi), 0, 0});
  t.add({Constraint::Kind::Concept, n, index->top(), x, 0});
  t.mutable_stats() = {};
  return t;
}

namespace {

bool clashes(const CompletionSet& t, const Constraint& c) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(c.label);
  switch (c.kind) {
    case Constraint::Kind::Formula: return s.has_formula(ix.neg_formula(c.term));
    case Constraint::Kind::Concept: return c.term == ix.bot() || s.has_concept(ix.neg_concept(c.term), c.x);
    case Constraint::Kind::Role: return false;
  }
  return false;
}

}  // namespace

bool is_clash(const CompletionSet& t) {
  const ClosureIndex& ix = t.index();
  for (LabelId n = 0; n < t.label_count(); ++n) {
    const ConstraintSystem& s = t.system(n);
    for (TermId f = 0; f < ix.formula_count(); ++f)
      if (s.has_formula(f) && s.has_formula(ix.neg_formula(f))) return true;
    for (const auto& [x, flags] : s.concept_table()) {
      if (flags[ix.bot()]) return true;
      for (TermId c = 0; c < flags.size(); ++c)
        if (flags[c] && flags[ix.neg_concept(c)]) return true;
    }
  }
  return false;
}

std::optional<VarId> blocker(VarId x, const ConstraintSystem& s) {
  const auto& table = s.concept_table();
  auto xi = table.find(x);
  if (xi == table.end()) return std::nullopt;
  const auto& fx = xi->second;
  for (auto it = table.begin(); it != xi; ++it) {
    const auto& fy = it->second;
    bool subset = true;
    for (std::size_t c = 0; c < fx.size() && subset; ++c) subset = !fx[c] || fy[c];
    if (subset) return it->first;
  }
  return std::nullopt;
}

bool blocked(VarId x, const ConstraintSystem& s) { return blocker(x, s).has_value(); }

double label_bound(std::size_t fg_size, FrameClass l) {
  auto fg = static_cast<double>(fg_size);
  if (l == FrameClass::C) return std::ldexp(fg, static_cast<int>(std::min<std::size_t>(fg_size, 1000)));
  return fg * fg;
}

double constraint_bound(std::size_t fg_size) {
  return std::ldexp(1.0, static_cast<int>(std::min<std::size_t>(2 * fg_size, 1000)));
}

// ---------------------------------------------------------------------------
// Rule instances

namespace {

using K = Constraint::Kind;

Constraint fc(LabelId n, TermId f) { return {K::Formula, n, f, 0, 0}; }
Constraint cc(LabelId n, TermId c, VarId x) { return {K::Concept, n, c, x, 0}; }
Constraint rc(LabelId n, TermId r, VarId x, VarId y) { return {K::Role, n, r, x, y}; }

// A box or diamond operand: a formula, or a concept at a variable.
struct Item {
  bool is_formula = true;
  TermId term = 0;
  VarId x = 0;
};

bool holds_at(const ConstraintSystem& s, const Item& it) {
  return it.is_formula ? s.has_formula(it.term) : s.has_concept(it.term, it.x);
}

Item negate(const ClosureIndex& ix, const Item& it) {
  return {it.is_formula, it.is_formula ? ix.neg_formula(it.term) : ix.neg_concept(it.term), it.x};
}

// Constraints that put the item into label m (plus ⊤ for a copied variable).
void put(const ClosureIndex& ix, std::vector<Constraint>& out, LabelId m, const Item& it) {
  auto push = [&](const Constraint& c) {
    if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
  };
  if (it.is_formula) {
    push(fc(m, it.term));
  } else {
    push(cc(m, it.term, it.x));
    push(cc(m, ix.top(), it.x));
  }
}

// Each make_* returns the instance when its application condition holds.

std::optional<RuleInstance> make_formula_binary(const CompletionSet& t, LabelId n, TermId f) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  FormulaKind k = ix.formula_at(f).kind();
  if (!s.has_formula(f) || (k != FormulaKind::And && k != FormulaKind::Or)) return std::nullopt;
  TermId a = ix.formula_left(f), b = ix.formula_right(f);
  RuleInstance r;
  r.label = n;
  r.premises = {fc(n, f)};
  if (k == FormulaKind::And) {
    if (s.has_formula(a) && s.has_formula(b)) return std::nullopt;
    r.rule = Rule::And;
    r.branches = {{fc(n, a), fc(n, b)}};
  } else {
    if (s.has_formula(a) || s.has_formula(b)) return std::nullopt;
    r.rule = Rule::Or;
    r.branches = {{fc(n, a)}, {fc(n, b)}};
  }
  return r;
}

std::optional<RuleInstance> make_concept_binary(const CompletionSet& t, LabelId n, TermId c, VarId x) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  ConceptKind k = ix.concept_at(c).kind();
  if (!s.has_concept(c, x) || (k != ConceptKind::And && k != ConceptKind::Or)) return std::nullopt;
  TermId a = ix.concept_left(c), b = ix.concept_right(c);
  RuleInstance r;
  r.label = n;
  r.premises = {cc(n, c, x)};
  if (k == ConceptKind::And) {
    if (s.has_concept(a, x) && s.has_concept(b, x)) return std::nullopt;
    r.rule = Rule::Sqcap;
    r.branches = {{cc(n, a, x), cc(n, b, x)}};
  } else {
    if (s.has_concept(a, x) || s.has_concept(b, x)) return std::nullopt;
    r.rule = Rule::Sqcup;
    r.branches = {{cc(n, a, x)}, {cc(n, b, x)}};
  }
  return r;
}

std::optional<RuleInstance> make_eq(const CompletionSet& t, LabelId n, TermId f, VarId x) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  if (!s.has_formula(f) || ix.formula_at(f).kind() != FormulaKind::Inclusion || !s.occurs(x)) return std::nullopt;
  TermId c = ix.inclusion_rhs(f);
  if (s.has_concept(c, x)) return std::nullopt;
  return RuleInstance{Rule::Eq, n, {fc(n, f), cc(n, ix.top(), x)}, {{cc(n, c, x)}}};
}

std::optional<RuleInstance> make_forall(const CompletionSet& t, LabelId n, TermId c, VarId x, VarId y) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  if (ix.concept_at(c).kind() != ConceptKind::Forall || !s.has_concept(c, x)) return std::nullopt;
  TermId r = ix.concept_role(c), d = ix.concept_left(c);
  if (!s.has_edge(r, x, y) || s.has_concept(d, y)) return std::nullopt;
  return RuleInstance{Rule::Forall, n, {cc(n, c, x), rc(n, r, x, y)}, {{cc(n, d, y)}}};
}

std::optional<RuleInstance> make_exists(const CompletionSet& t, LabelId n, TermId c, VarId x) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  if (ix.concept_at(c).kind() != ConceptKind::Exists || !s.has_concept(c, x)) return std::nullopt;
  TermId r = ix.concept_role(c), d = ix.concept_left(c);
  for (const auto& [er, ex, ey] : s.edges())
    if (er == r && ex == x && s.has_concept(d, ey)) return std::nullopt;
  if (blocked(x, s)) return std::nullopt;
  VarId y = t.next_variable();
  return RuleInstance{Rule::Exists, n, {cc(n, c, x)}, {{rc(n, r, x, y), cc(n, d, y), cc(n, ix.top(), y)}}};
}

std::optional<RuleInstance> make_neq(const CompletionSet& t, LabelId n, TermId f) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  if (!s.has_formula(f) || ix.formula_at(f).kind() != FormulaKind::Not) return std::nullopt;
  TermId nc = ix.neg_concept(ix.inclusion_rhs(ix.formula_left(f)));
  for (const auto& [y, flags] : s.concept_table())
    if (flags[nc]) return std::nullopt;
  VarId x = t.next_variable();
  return RuleInstance{Rule::Neq, n, {fc(n, f)}, {{cc(n, nc, x), cc(n, ix.top(), x)}}};
}

struct ModalItems {
  std::vector<Constraint> box_premises, dia_premises;
  std::vector<Item> boxes, dias;
};

// Box and diamond constraints of modality i in label n, formulas first.
ModalItems modal_items(const CompletionSet& t, LabelId n, int i) {
  const ClosureIndex& ix = t.index();
  const ConstraintSystem& s = t.system(n);
  ModalItems out;
  for (FormulaKind k : {FormulaKind::Box, FormulaKind::Dia})
    for (TermId f : ix.formulas_of_kind(k))
      if (s.has_formula(f) && ix.formula_at(f).modality() == i) {
        (k == FormulaKind::Box ? out.box_premises : out.dia_premises).push_back(fc(n, f));
        (k == FormulaKind::Box ? out.boxes : out.dias).push_back({true, ix.formula_left(f), 0});
      }
  for (const auto& [x, flags] : s.concept_table())
    for (ConceptKind k : {ConceptKind::Box, ConceptKind::Dia})
      for (TermId c : ix.concepts_of_kind(k))
        if (flags[c] && ix.concept_at(c).modality() == i) {
          (k == ConceptKind::Box ? out.box_premises : out.dia_premises).push_back(cc(n, c, x));
          (k == ConceptKind::Box ? out.boxes : out.dias).push_back({false, ix.concept_left(c), x});
        }
  return out;
}

std::set<int> modalities_used(const ClosureIndex& ix) {
  std::set<int> out;
  for (TermId f : ix.formulas_of_kind(FormulaKind::Box)) out.insert(ix.formula_at(f).modality());
  for (TermId f : ix.formulas_of_kind(FormulaKind::Dia)) out.insert(ix.formula_at(f).modality());
  for (TermId c : ix.concepts_of_kind(ConceptKind::Box)) out.insert(ix.concept_at(c).modality());
  for (TermId c : ix.concepts_of_kind(ConceptKind::Dia)) out.insert(ix.concept_at(c).modality());
  return out;
}

std::size_t branch_count(FrameClass l, std::size_t k) {
  switch (l) {
    case FrameClass::E: return 2;
    case FrameClass::M: return 1;
    case FrameClass::C: return k + 1;
    case FrameClass::N: return k + 1;
  }
  return 1;
}

// RL condition: no label already holds branch (0)'s additions or the
// additions of some branch j ≥ 1.
bool modal_condition(const CompletionSet& t, FrameClass l, const std::vector<Item>& boxes, const Item& dia) {
  const ClosureIndex& ix = t.index();
  std::size_t branches = branch_count(l, boxes.size());
  Item ndia = negate(ix, dia);
  for (LabelId o = 0; o < t.label_count(); ++o) {
    const ConstraintSystem& s = t.system(o);
    if (holds_at(s, dia) &&
        std::all_of(boxes.begin(), boxes.end(), [&](const Item& g) { return holds_at(s, g); }))
      return false;
    if (branches > 1 && holds_at(s, ndia))
      for (std::size_t j = 0; j + 1 < branches; ++j)
        if (holds_at(s, negate(ix, boxes[j]))) return false;
  }
  return true;
}

RuleInstance build_modal(const CompletionSet& t, FrameClass l, LabelId n, std::vector<Constraint> premises,
                         const std::vector<Item>& boxes, const Item& dia) {
  const ClosureIndex& ix = t.index();
  auto m = static_cast<LabelId>(t.label_count());
  RuleInstance r;
  r.rule = Rule::Modal;
  r.label = n;
  r.premises = std::move(premises);
  auto seed = [&](std::vector<Constraint>& b) {
    if (t.seed_labels() && std::none_of(b.begin(), b.end(), [](const Constraint& c) { return c.kind == K::Concept; }))
      b.push_back(cc(m, ix.top(), t.next_variable()));
  };
  std::vector<Constraint> zero;
  for (const auto& g : boxes) put(ix, zero, m, g);
  put(ix, zero, m, dia);
  seed(zero);
  r.branches.push_back(std::move(zero));
  std::size_t branches = branch_count(l, boxes.size());
  for (std::size_t j = 0; j + 1 < branches; ++j) {
    std::vector<Constraint> b;
    put(ix, b, m, negate(ix, boxes[j]));
    put(ix, b, m, negate(ix, dia));
    seed(b);
    r.branches.push_back(std::move(b));
  }
  return r;
}

bool shape_ok(FrameClass l, std::size_t k) {
  switch (l) {
    case FrameClass::E:
    case FrameClass::M: return k == 1;
    case FrameClass::C: return k >= 1;
    case FrameClass::N: return k <= 1;
  }
  return false;
}

constexpr std::size_t kMaxSubsetItems = 20;

// Calls emit(instance) for RL instances in order until it returns true.
template <typename Emit>
bool enumerate_modal(const CompletionSet& t, FrameClass l, LabelId n, Emit&& emit) {
  for (int i : modalities_used(t.index())) {
    ModalItems mi = modal_items(t, n, i);
    for (std::size_t d = 0; d < mi.dias.size(); ++d) {
      const Item& dia = mi.dias[d];
      auto premises_of = [&](const std::vector<std::size_t>& sel) {
        std::vector<Constraint> p;
        for (auto j : sel) p.push_back(mi.box_premises[j]);
        p.push_back(mi.dia_premises[d]);
        return p;
      };
      auto items_of = [&](const std::vector<std::size_t>& sel) {
        std::vector<Item> out;
        for (auto j : sel) out.push_back(mi.boxes[j]);
        return out;
      };
      auto try_sel = [&](const std::vector<std::size_t>& sel) {
        auto items = items_of(sel);
        if (!modal_condition(t, l, items, dia)) return false;
        return emit(build_modal(t, l, n, premises_of(sel), items, dia));
      };
      if (l == FrameClass::N && try_sel({})) return true;
      if (l != FrameClass::C) {
        for (std::size_t j = 0; j < mi.boxes.size(); ++j)
          if (try_sel({j})) return true;
        continue;
      }
      // C: a subset fails the condition whenever it contains a box γ_j with
      // some label holding ¬̇γ_j and ¬̇δ, so only the rest is enumerated.
      std::vector<std::size_t> live;
      Item ndia = negate(t.index(), dia);
      for (std::size_t j = 0; j < mi.boxes.size(); ++j) {
        Item ng = negate(t.index(), mi.boxes[j]);
        bool dead = false;
        for (LabelId o = 0; o < t.label_count() && !dead; ++o)
          dead = holds_at(t.system(o), ndia) && holds_at(t.system(o), ng);
        if (!dead) live.push_back(j);
      }
      if (live.empty()) continue;
      // If one label holds δ and all live boxes, every subset is covered.
      bool covered = false;
      for (LabelId o = 0; o < t.label_count() && !covered; ++o) {
        const ConstraintSystem& s = t.system(o);
        covered = holds_at(s, dia) &&
                  std::all_of(live.begin(), live.end(), [&](std::size_t j) { return holds_at(s, mi.boxes[j]); });
      }
      if (covered) continue;
      if (live.size() > kMaxSubsetItems)
        throw ResourceLimit("too many box constraints for subset enumeration in one label");
      std::size_t k = live.size();
      for (std::size_t size = 1; size <= k; ++size) {
        // Lexicographic combinations of `size` positions from live.
        std::vector<std::size_t> pos(size);
        for (std::size_t a = 0; a < size; ++a) pos[a] = a;
        while (true) {
          std::vector<std::size_t> sel;
          for (auto p : pos) sel.push_back(live[p]);
          if (try_sel(sel)) return true;
          std::size_t a = size;
          while (a > 0 && pos[a - 1] == k - size + a - 1) --a;
          if (a == 0) break;
          ++pos[a - 1];
          for (std::size_t b = a; b < size; ++b) pos[b] = pos[b - 1] + 1;
        }
      }
    }
  }
  return false;
}

// Generic enumeration in priority order; stops when emit returns true.
template <typename Emit>
void enumerate(const CompletionSet& t, FrameClass l, Emit&& emit) {
  const ClosureIndex& ix = t.index();
  const auto labels = t.label_count();
  auto each_formula = [&](FormulaKind k, auto&& f) {
    for (LabelId n = 0; n < labels; ++n)
      for (TermId id : ix.formulas_of_kind(k))
        if (t.system(n).has_formula(id) && f(n, id)) return true;
    return false;
  };
  auto each_concept = [&](ConceptKind k, auto&& f) {
    for (LabelId n = 0; n < labels; ++n)
      for (const auto& [x, flags] : t.system(n).concept_table())
        for (TermId id : ix.concepts_of_kind(k))
          if (flags[id] && f(n, id, x)) return true;
    return false;
  };
  auto send = [&](std::optional<RuleInstance> r) { return r && emit(std::move(*r)); };

  if (each_formula(FormulaKind::And, [&](LabelId n, TermId f) { return send(make_formula_binary(t, n, f)); }))
    return;
  if (each_concept(ConceptKind::And,
                   [&](LabelId n, TermId c, VarId x) { return send(make_concept_binary(t, n, c, x)); }))
    return;
  if (each_formula(FormulaKind::Inclusion, [&](LabelId n, TermId f) {
        for (VarId x : t.system(n).variables())
          if (send(make_eq(t, n, f, x))) return true;
        return false;
      }))
    return;
  if (each_concept(ConceptKind::Forall, [&](LabelId n, TermId c, VarId x) {
        TermId r = ix.concept_role(c);
        for (const auto& [er, ex, ey] : t.system(n).edges())
          if (er == r && ex == x && send(make_forall(t, n, c, x, ey))) return true;
        return false;
      }))
    return;
  if (each_concept(ConceptKind::Exists,
                   [&](LabelId n, TermId c, VarId x) { return send(make_exists(t, n, c, x)); }))
    return;
  if (each_formula(FormulaKind::Not, [&](LabelId n, TermId f) { return send(make_neq(t, n, f)); })) return;
  if (each_formula(FormulaKind::Or, [&](LabelId n, TermId f) { return send(make_formula_binary(t, n, f)); }))
    return;
  if (each_concept(ConceptKind::Or,
                   [&](LabelId n, TermId c, VarId x) { return send(make_concept_binary(t, n, c, x)); }))
    return;
  for (LabelId n = 0; n < labels; ++n)
    if (enumerate_modal(t, l, n, [&](RuleInstance r) { return emit(std::move(r)); })) return;
}

}  // namespace

std::vector<RuleInstance> find_applicable(const CompletionSet& t, FrameClass l) {
  std::vector<RuleInstance> out;
  enumerate(t, l, [&](RuleInstance r) {
    out.push_back(std::move(r));
    return false;
  });
  return out;
}

std::optional<RuleInstance> next_applicable(const CompletionSet& t, FrameClass l) {
  std::optional<RuleInstance> out;
  enumerate(t, l, [&](RuleInstance r) {
    out = std::move(r);
    return true;
  });
  return out;
}

bool is_complete(const CompletionSet& t, FrameClass l) { return !next_applicable(t, l).has_value(); }

bool is_applicable(const CompletionSet& t, const RuleInstance& inst, FrameClass l) {
  if (inst.label >= t.label_count() || inst.premises.empty()) return false;
  for (const auto& p : inst.premises)
    if (p.label != inst.label || !t.contains(p)) return false;
  const ClosureIndex& ix = t.index();
  const Constraint& p0 = inst.premises[0];
  std::optional<RuleInstance> fresh;
  switch (inst.rule) {
    case Rule::And:
    case Rule::Or:
      if (p0.kind == K::Formula) fresh = make_formula_binary(t, inst.label, p0.term);
      break;
    case Rule::Sqcap:
    case Rule::Sqcup:
      if (p0.kind == K::Concept) fresh = make_concept_binary(t, inst.label, p0.term, p0.x);
      break;
    case Rule::Eq:
      if (inst.premises.size() == 2) fresh = make_eq(t, inst.label, p0.term, inst.premises[1].x);
      break;
    case Rule::Forall:
      if (inst.premises.size() == 2) fresh = make_forall(t, inst.label, p0.term, p0.x, inst.premises[1].y);
      break;
    case Rule::Exists:
      if (p0.kind == K::Concept) fresh = make_exists(t, inst.label, p0.term, p0.x);
      break;
    case Rule::Neq:
      if (p0.kind == K::Formula) fresh = make_neq(t, inst.label, p0.term);
      break;
    case Rule::Modal: {
      std::vector<Item> boxes;
      std::optional<Item> dia;
      int modality = -1;
      for (std::size_t a = 0; a < inst.premises.size(); ++a) {
        const Constraint& p = inst.premises[a];
        bool last = a + 1 == inst.premises.size();
        int i = 0;
        Item it;
        if (p.kind == K::Formula) {
          const Formula& f = ix.formula_at(p.term);
          if (f.kind() != (last ? FormulaKind::Dia : FormulaKind::Box)) return false;
          i = f.modality();
          it = {true, ix.formula_left(p.term), 0};
        } else if (p.kind == K::Concept) {
          const Concept& c = ix.concept_at(p.term);
          if (c.kind() != (last ? ConceptKind::Dia : ConceptKind::Box)) return false;
          i = c.modality();
          it = {false, ix.concept_left(p.term), p.x};
        } else {
          return false;
        }
        if (modality >= 0 && i != modality) return false;
        modality = i;
        if (last) dia = it;
        else boxes.push_back(it);
      }
      if (!dia || !shape_ok(l, boxes.size()) || !modal_condition(t, l, boxes, *dia)) return false;
      fresh = build_modal(t, l, inst.label, inst.premises, boxes, *dia);
      break;
    }
  }
  return fresh && *fresh == inst;
}

namespace {

// Adds a branch without re-checking applicability; returns the new constraints.
std::vector<Constraint> apply_unchecked(CompletionSet& t, const RuleInstance& inst, std::size_t branch) {
  std::vector<Constraint> added;
  for (const auto& c : inst.branches[branch])
    if (t.add(c)) added.push_back(c);
  ++t.mutable_stats().applications[static_cast<std::size_t>(inst.rule)];
  return added;
}

}  // namespace

CompletionSet apply(const CompletionSet& t, const RuleInstance& inst, std::size_t branch, FrameClass l) {
  if (branch >= inst.branches.size()) throw std::out_of_range("apply: branch index out of range");
  if (!is_applicable(t, inst, l)) throw std::invalid_argument("apply: rule instance is not applicable");
  CompletionSet out = t;
  apply_unchecked(out, inst, branch);
  return out;
}

std::string TraceEvent::to_json() const {
  nlohmann::ordered_json j;
  j["step"] = step;
  j["rule"] = rule_name(rule);
  j["label"] = label;
  j["branch"] = branch;
  j["added"] = added;
  return j.dump();
}

// ---------------------------------------------------------------------------
// Search

namespace {

class Search {
 public:
  Search(FrameClass l, const SolveOptions& opt, SolveResult& res, std::size_t fg)
      : l_(l), opt_(opt), res_(res), label_bound_(label_bound(fg, l)), constraint_bound_(constraint_bound(fg)) {}

  std::optional<CompletionSet> run(CompletionSet t) {
    while (true) {
      auto inst = next_applicable(t, l_);
      if (!inst) return t;
      if (inst->branches.size() == 1) {
        if (!step(t, *inst, 0)) return std::nullopt;
        continue;
      }
      ++res_.search.branch_points;
      for (std::size_t b = 0; b < inst->branches.size(); ++b) {
        bool last = b + 1 == inst->branches.size();
        CompletionSet u = last ? std::move(t) : t;
        if (step(u, *inst, b)) {
          if (auto done = run(std::move(u))) return done;
        }
        ++res_.search.backtracks;
      }
      return std::nullopt;
    }
  }

 private:
  // Applies one branch; false when it produced a clash.
  bool step(CompletionSet& t, const RuleInstance& inst, std::size_t b) {
    if (++res_.search.steps > opt_.max_steps)
      throw ResourceLimit("step cap of " + std::to_string(opt_.max_steps) + " rule applications exceeded");
    const std::size_t labels_before = t.label_count();
    const VarId vars_before = t.next_variable();
    std::vector<Constraint> added = apply_unchecked(t, inst, b);
    ++res_.rule_stats.applications[static_cast<std::size_t>(inst.rule)];
    res_.rule_stats.labels_created += t.label_count() - labels_before;
    res_.rule_stats.variables_created += t.next_variable() - vars_before;
    if (opt_.record_trace || opt_.trace_sink) {
      TraceEvent ev{res_.search.steps, inst.rule, inst.label, b, {}};
      for (const auto& c : added) ev.added.push_back(to_string(t, c));
      if (opt_.trace_sink) opt_.trace_sink(ev);
      if (opt_.record_trace) res_.trace.push_back(std::move(ev));
    }
    std::size_t labels = t.label_count();
    res_.search.max_labels = std::max(res_.search.max_labels, labels);
    if (static_cast<double>(labels) > label_bound_)
      throw EngineError("label bound exceeded: " + std::to_string(labels) + " labels");
    if (opt_.max_labels != 0 && labels > opt_.max_labels)
      throw ResourceLimit("label cap of " + std::to_string(opt_.max_labels) + " exceeded");
    LabelId touched = added.empty() ? inst.label : added.front().label;
    std::size_t count = t.system(touched).constraint_count();
    res_.search.max_label_constraints = std::max(res_.search.max_label_constraints, count);
    res_.search.max_domain = std::max(res_.search.max_domain, t.system(touched).variables().size());
    if (static_cast<double>(count) > constraint_bound_)
      throw EngineError("per-label constraint bound exceeded in label " + std::to_string(touched));
    return std::none_of(added.begin(), added.end(), [&](const Constraint& c) { return clashes(t, c); });
  }

  FrameClass l_;
  const SolveOptions& opt_;
  SolveResult& res_;
  double label_bound_;
  double constraint_bound_;
};

}  // namespace

SolveResult solve(const Formula& phi, FrameClass l, const SolveOptions& options) {
  Formula f = is_normalized(phi) ? phi : normalize(phi);
  SolveResult res;
  CompletionSet t = init(f);
  t.set_seed_labels(options.seed_labels);
  res.fg_size = t.index().fg_size();
  res.search.max_labels = 1;
  res.search.max_domain = 1;
  if (is_clash(t)) return res;
  Search search(l, options, res, res.fg_size);
  std::optional<CompletionSet> done = search.run(std::move(t));
  if (!done) return res;
  res.verdict = Verdict::Sat;
  if (options.extract_model || options.validate) {
    std::optional<NeighbourhoodModel> m;
    try {
      m = extract_model(*done, l);
    } catch (const ModelError& e) {
      if (options.validate && done->label_count() <= kMaxWorlds)
        throw EngineError(std::string("model extraction failed: ") + e.what());
      res.model_error = e.what();
    }
    if (m && options.validate && !validate_model(*m, f, l))
      throw EngineError("extracted model does not satisfy the formula under " + to_string(l));
    if (m && options.extract_model) res.model = std::move(m);
  }
  res.completion = std::move(done);
  return res;
}

}  // namespace nnmdl
