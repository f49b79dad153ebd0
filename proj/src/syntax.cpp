#include "nnmdl/syntax.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <unordered_set>

namespace nnmdl {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool binary(ConceptKind k) { return k == ConceptKind::And || k == ConceptKind::Or; }
bool unary(ConceptKind k) {
  return k == ConceptKind::Not || k == ConceptKind::Exists || k == ConceptKind::Forall ||
         k == ConceptKind::Box || k == ConceptKind::Dia;
}

}  // namespace

// ---------------------------------------------------------------------------
// Concept

Concept Concept::make(ConceptKind k, std::string name, int modality, const Concept* l, const Concept* r) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->name = std::move(name);
  n->modality = modality;
  std::size_t h = mix(0x51ed27, static_cast<std::size_t>(k));
  h = mix(h, std::hash<std::string>{}(n->name));
  h = mix(h, static_cast<std::size_t>(modality));
  if (l != nullptr) {
    n->left = l->node_;
    h = mix(h, l->hash());
  }
  if (r != nullptr) {
    n->right = r->node_;
    h = mix(h, r->hash());
  }
  n->hash = h;
  return Concept(std::move(n));
}

Concept Concept::atom(std::string name) { return make(ConceptKind::Atom, std::move(name), 0, nullptr, nullptr); }

Concept Concept::top() {
  static const Concept t = make(ConceptKind::Top, "", 0, nullptr, nullptr);
  return t;
}

Concept Concept::bot() {
  static const Concept b = make(ConceptKind::Bot, "", 0, nullptr, nullptr);
  return b;
}

Concept Concept::negation(const Concept& c) { return make(ConceptKind::Not, "", 0, &c, nullptr); }
Concept Concept::conj(const Concept& a, const Concept& b) { return make(ConceptKind::And, "", 0, &a, &b); }
Concept Concept::disj(const Concept& a, const Concept& b) { return make(ConceptKind::Or, "", 0, &a, &b); }
Concept Concept::exists(std::string role, const Concept& c) {
  return make(ConceptKind::Exists, std::move(role), 0, &c, nullptr);
}
Concept Concept::forall(std::string role, const Concept& c) {
  return make(ConceptKind::Forall, std::move(role), 0, &c, nullptr);
}
Concept Concept::box(int modality, const Concept& c) {
  if (modality < 1) throw std::invalid_argument("modality index must be >= 1");
  return make(ConceptKind::Box, "", modality, &c, nullptr);
}
Concept Concept::dia(int modality, const Concept& c) {
  if (modality < 1) throw std::invalid_argument("modality index must be >= 1");
  return make(ConceptKind::Dia, "", modality, &c, nullptr);
}

int compare(const Concept& a, const Concept& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (int c = a.name().compare(b.name()); c != 0) return c < 0 ? -1 : 1;
  if (a.modality() != b.modality()) return a.modality() < b.modality() ? -1 : 1;
  if (unary(a.kind()) || binary(a.kind())) {
    if (int c = compare(a.left(), b.left()); c != 0) return c;
  }
  if (binary(a.kind())) return compare(a.right(), b.right());
  return 0;
}

bool operator==(const Concept& a, const Concept& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

// ---------------------------------------------------------------------------
// Formula

Formula Formula::make(FormulaKind k, int modality, const Formula* l, const Formula* r) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->modality = modality;
  std::size_t h = mix(0xf0f0a5, static_cast<std::size_t>(k));
  h = mix(h, static_cast<std::size_t>(modality));
  if (l != nullptr) {
    n->left = l->node_;
    h = mix(h, l->hash());
  }
  if (r != nullptr) {
    n->right = r->node_;
    h = mix(h, r->hash());
  }
  n->hash = h;
  return Formula(std::move(n));
}

Formula Formula::inclusion(const Concept& lhs, const Concept& rhs) {
  auto n = std::make_shared<Node>();
  n->kind = FormulaKind::Inclusion;
  n->lhs = lhs;
  n->rhs = rhs;
  n->hash = mix(mix(0xc1c1, lhs.hash()), rhs.hash());
  return Formula(std::move(n));
}

Formula Formula::negation(const Formula& f) { return make(FormulaKind::Not, 0, &f, nullptr); }
Formula Formula::conj(const Formula& a, const Formula& b) { return make(FormulaKind::And, 0, &a, &b); }
Formula Formula::disj(const Formula& a, const Formula& b) { return make(FormulaKind::Or, 0, &a, &b); }
Formula Formula::box(int modality, const Formula& f) {
  if (modality < 1) throw std::invalid_argument("modality index must be >= 1");
  return make(FormulaKind::Box, modality, &f, nullptr);
}
Formula Formula::dia(int modality, const Formula& f) {
  if (modality < 1) throw std::invalid_argument("modality index must be >= 1");
  return make(FormulaKind::Dia, modality, &f, nullptr);
}

int compare(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return 0;
  if (a.kind() != b.kind()) return a.kind() < b.kind() ? -1 : 1;
  if (a.modality() != b.modality()) return a.modality() < b.modality() ? -1 : 1;
  switch (a.kind()) {
    case FormulaKind::Inclusion:
      if (int c = compare(a.lhs(), b.lhs()); c != 0) return c;
      return compare(a.rhs(), b.rhs());
    case FormulaKind::And:
    case FormulaKind::Or:
      if (int c = compare(a.left(), b.left()); c != 0) return c;
      return compare(a.right(), b.right());
    default:
      return compare(a.operand(), b.operand());
  }
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

Formula true_formula() { return Formula::inclusion(Concept::bot(), Concept::top()); }

// ---------------------------------------------------------------------------
// Printing

namespace {

void print(std::ostream& os, const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Atom: os << "(atom " << c.name() << ')'; break;
    case ConceptKind::Top: os << "top"; break;
    case ConceptKind::Bot: os << "bot"; break;
    case ConceptKind::Not: os << "(not "; print(os, c.operand()); os << ')'; break;
    case ConceptKind::And:
    case ConceptKind::Or:
      os << (c.kind() == ConceptKind::And ? "(and " : "(or ");
      print(os, c.left());
      os << ' ';
      print(os, c.right());
      os << ')';
      break;
    case ConceptKind::Exists:
    case ConceptKind::Forall:
      os << (c.kind() == ConceptKind::Exists ? "(some " : "(all ") << c.name() << ' ';
      print(os, c.operand());
      os << ')';
      break;
    case ConceptKind::Box:
    case ConceptKind::Dia:
      os << (c.kind() == ConceptKind::Box ? "(box " : "(dia ") << c.modality() << ' ';
      print(os, c.operand());
      os << ')';
      break;
  }
}

void print(std::ostream& os, const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Inclusion:
      os << "(sub ";
      print(os, f.lhs());
      os << ' ';
      print(os, f.rhs());
      os << ')';
      break;
    case FormulaKind::Not: os << "(not "; print(os, f.operand()); os << ')'; break;
    case FormulaKind::And:
    case FormulaKind::Or:
      os << (f.kind() == FormulaKind::And ? "(and " : "(or ");
      print(os, f.left());
      os << ' ';
      print(os, f.right());
      os << ')';
      break;
    case FormulaKind::Box:
    case FormulaKind::Dia:
      os << (f.kind() == FormulaKind::Box ? "(box " : "(dia ") << f.modality() << ' ';
      print(os, f.operand());
      os << ')';
      break;
  }
}

}  // namespace

std::string serialize(const Concept& c) {
  std::ostringstream os;
  print(os, c);
  return os.str();
}

std::string serialize(const Formula& f) {
  std::ostringstream os;
  print(os, f);
  return os.str();
}

// ---------------------------------------------------------------------------
// Normal forms

namespace {

Concept nnf_neg(const Concept& c);

Concept nnf_pos(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Atom:
    case ConceptKind::Top:
    case ConceptKind::Bot: return c;
    case ConceptKind::Not: return nnf_neg(c.operand());
    case ConceptKind::And: return Concept::conj(nnf_pos(c.left()), nnf_pos(c.right()));
    case ConceptKind::Or: return Concept::disj(nnf_pos(c.left()), nnf_pos(c.right()));
    case ConceptKind::Exists: return Concept::exists(c.name(), nnf_pos(c.operand()));
    case ConceptKind::Forall: return Concept::forall(c.name(), nnf_pos(c.operand()));
    case ConceptKind::Box: return Concept::box(c.modality(), nnf_pos(c.operand()));
    case ConceptKind::Dia: return Concept::dia(c.modality(), nnf_pos(c.operand()));
  }
  return c;
}

// nnf of ¬c
Concept nnf_neg(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Atom: return Concept::negation(c);
    case ConceptKind::Top: return Concept::bot();
    case ConceptKind::Bot: return Concept::top();
    case ConceptKind::Not: return nnf_pos(c.operand());
    case ConceptKind::And: return Concept::disj(nnf_neg(c.left()), nnf_neg(c.right()));
    case ConceptKind::Or: return Concept::conj(nnf_neg(c.left()), nnf_neg(c.right()));
    case ConceptKind::Exists: return Concept::forall(c.name(), nnf_neg(c.operand()));
    case ConceptKind::Forall: return Concept::exists(c.name(), nnf_neg(c.operand()));
    case ConceptKind::Box: return Concept::dia(c.modality(), nnf_neg(c.operand()));
    case ConceptKind::Dia: return Concept::box(c.modality(), nnf_neg(c.operand()));
  }
  return c;
}

Formula normal_inclusion(const Formula& f) {
  if (f.lhs().kind() == ConceptKind::Top) return Formula::inclusion(Concept::top(), nnf_pos(f.rhs()));
  return Formula::inclusion(Concept::top(), nnf_pos(Concept::disj(Concept::negation(f.lhs()), f.rhs())));
}

Formula normal_neg(const Formula& f);

Formula normal_pos(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Inclusion: return normal_inclusion(f);
    case FormulaKind::Not: return normal_neg(f.operand());
    case FormulaKind::And: return Formula::conj(normal_pos(f.left()), normal_pos(f.right()));
    case FormulaKind::Or: return Formula::disj(normal_pos(f.left()), normal_pos(f.right()));
    case FormulaKind::Box: return Formula::box(f.modality(), normal_pos(f.operand()));
    case FormulaKind::Dia: return Formula::dia(f.modality(), normal_pos(f.operand()));
  }
  return f;
}

Formula normal_neg(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Inclusion: return Formula::negation(normal_inclusion(f));
    case FormulaKind::Not: return normal_pos(f.operand());
    case FormulaKind::And: return Formula::disj(normal_neg(f.left()), normal_neg(f.right()));
    case FormulaKind::Or: return Formula::conj(normal_neg(f.left()), normal_neg(f.right()));
    case FormulaKind::Box: return Formula::dia(f.modality(), normal_neg(f.operand()));
    case FormulaKind::Dia: return Formula::box(f.modality(), normal_neg(f.operand()));
  }
  return f;
}

}  // namespace

Concept nnf(const Concept& c) { return nnf_pos(c); }
Formula normalize(const Formula& f) { return normal_pos(f); }

bool is_nnf(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Atom:
    case ConceptKind::Top:
    case ConceptKind::Bot: return true;
    case ConceptKind::Not: return c.operand().kind() == ConceptKind::Atom;
    case ConceptKind::And:
    case ConceptKind::Or: return is_nnf(c.left()) && is_nnf(c.right());
    default: return is_nnf(c.operand());
  }
}

bool is_normalized(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Inclusion: return f.lhs().kind() == ConceptKind::Top && is_nnf(f.rhs());
    case FormulaKind::Not: return f.operand().kind() == FormulaKind::Inclusion && is_normalized(f.operand());
    case FormulaKind::And:
    case FormulaKind::Or: return is_normalized(f.left()) && is_normalized(f.right());
    default: return is_normalized(f.operand());
  }
}

Concept neg_nnf(const Concept& c) { return nnf_neg(c); }

Formula neg_nnf(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Inclusion: return Formula::negation(f);
    case FormulaKind::Not: return f.operand();
    case FormulaKind::And: return Formula::disj(neg_nnf(f.left()), neg_nnf(f.right()));
    case FormulaKind::Or: return Formula::conj(neg_nnf(f.left()), neg_nnf(f.right()));
    case FormulaKind::Box: return Formula::dia(f.modality(), neg_nnf(f.operand()));
    case FormulaKind::Dia: return Formula::box(f.modality(), neg_nnf(f.operand()));
  }
  return f;
}

std::size_t weight(const Concept& c) {
  switch (c.kind()) {
    case ConceptKind::Atom:
    case ConceptKind::Top:
    case ConceptKind::Bot: return 0;
    case ConceptKind::Not: return weight(c.operand());
    case ConceptKind::And:
    case ConceptKind::Or: return weight(c.left()) + weight(c.right()) + 1;
    default: return weight(c.operand()) + 1;
  }
}

std::size_t weight(const Formula& f) {
  switch (f.kind()) {
    case FormulaKind::Inclusion: return 0;
    case FormulaKind::Not: return weight(f.operand());
    case FormulaKind::And:
    case FormulaKind::Or: return weight(f.left()) + weight(f.right()) + 1;
    default: return weight(f.operand()) + 1;
  }
}

// ---------------------------------------------------------------------------
// Signature and closure

namespace {

template <typename ConceptFn, typename FormulaFn>
void walk(const Formula& f, ConceptFn&& on_concept, FormulaFn&& on_formula);

template <typename ConceptFn>
void walk_concept(const Concept& c, ConceptFn&& on_concept) {
  on_concept(c);
  switch (c.kind()) {
    case ConceptKind::Atom:
    case ConceptKind::Top:
    case ConceptKind::Bot: break;
    case ConceptKind::And:
    case ConceptKind::Or:
      walk_concept(c.left(), on_concept);
      walk_concept(c.right(), on_concept);
      break;
    default: walk_concept(c.operand(), on_concept);
  }
}

template <typename ConceptFn, typename FormulaFn>
void walk(const Formula& f, ConceptFn&& on_concept, FormulaFn&& on_formula) {
  on_formula(f);
  switch (f.kind()) {
    case FormulaKind::Inclusion:
      walk_concept(f.lhs(), on_concept);
      walk_concept(f.rhs(), on_concept);
      break;
    case FormulaKind::And:
    case FormulaKind::Or:
      walk(f.left(), on_concept, on_formula);
      walk(f.right(), on_concept, on_formula);
      break;
    default: walk(f.operand(), on_concept, on_formula);
  }
}

}  // namespace

int modality_count(const Concept& c) {
  int n = 0;
  walk_concept(c, [&](const Concept& s) { n = std::max(n, s.modality()); });
  return n;
}

int modality_count(const Formula& f) {
  int n = 0;
  walk(
      f, [&](const Concept& c) { n = std::max(n, c.modality()); },
      [&](const Formula& g) { n = std::max(n, g.modality()); });
  return n;
}

bool has_modalised_concept(const Formula& f) {
  bool found = false;
  walk(
      f,
      [&](const Concept& c) {
        if (c.kind() == ConceptKind::Box || c.kind() == ConceptKind::Dia) found = true;
      },
      [](const Formula&) {});
  return found;
}

Signature signature(const Formula& f) {
  Signature sig;
  walk(
      f,
      [&](const Concept& c) {
        if (c.kind() == ConceptKind::Atom) sig.concept_names.insert(c.name());
        if (c.kind() == ConceptKind::Exists || c.kind() == ConceptKind::Forall) sig.role_names.insert(c.name());
        sig.modalities = std::max(sig.modalities, c.modality());
      },
      [&](const Formula& g) { sig.modalities = std::max(sig.modalities, g.modality()); });
  return sig;
}

Closure closure(const Formula& f) {
  std::unordered_set<Concept, ConceptHash> cons;
  std::unordered_set<Formula, FormulaHash> fors;
  std::set<std::string> roles;
  walk(
      f,
      [&](const Concept& c) {
        cons.insert(c);
        if (c.kind() == ConceptKind::Exists || c.kind() == ConceptKind::Forall) roles.insert(c.name());
      },
      [&](const Formula& g) { fors.insert(g); });
  bool any_inclusion = false;
  for (const auto& g : fors) any_inclusion |= g.kind() == FormulaKind::Inclusion;
  if (any_inclusion) cons.insert(Concept::top());

  Closure out;
  std::unordered_set<Concept, ConceptHash> con_neg(cons.begin(), cons.end());
  for (const auto& c : cons) con_neg.insert(neg_nnf(c));
  std::unordered_set<Formula, FormulaHash> for_neg(fors.begin(), fors.end());
  for (const auto& g : fors) for_neg.insert(neg_nnf(g));

  out.concepts.assign(con_neg.begin(), con_neg.end());
  out.formulas.assign(for_neg.begin(), for_neg.end());
  std::sort(out.concepts.begin(), out.concepts.end());
  std::sort(out.formulas.begin(), out.formulas.end());
  out.roles.assign(roles.begin(), roles.end());
  return out;
}

}  // namespace nnmdl
