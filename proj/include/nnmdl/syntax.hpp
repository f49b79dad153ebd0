// Abstract syntax of modal ALC concepts and formulas with neighbourhood
// modalities: construction, parsing, printing and normal forms.

#ifndef NNMDL_SYNTAX_HPP
#define NNMDL_SYNTAX_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nnmdl {

enum class ConceptKind : std::uint8_t { Atom, Top, Bot, Not, And, Or, Exists, Forall, Box, Dia };
enum class FormulaKind : std::uint8_t { Inclusion, Not, And, Or, Box, Dia };

// Immutable, structurally shared concept tree.
class Concept {
 public:
  static Concept atom(std::string name);
  static Concept top();
  static Concept bot();
  static Concept negation(const Concept& c);
  static Concept conj(const Concept& a, const Concept& b);
  static Concept disj(const Concept& a, const Concept& b);
  static Concept exists(std::string role, const Concept& c);
  static Concept forall(std::string role, const Concept& c);
  static Concept box(int modality, const Concept& c);
  static Concept dia(int modality, const Concept& c);

  ConceptKind kind() const { return node_->kind; }
  // Concept name for Atom, role name for Exists/Forall, empty otherwise.
  const std::string& name() const { return node_->name; }
  int modality() const { return node_->modality; }
  // Operand of Not/Exists/Forall/Box/Dia, left conjunct/disjunct of And/Or.
  Concept left() const { return Concept(node_->left); }
  Concept right() const { return Concept(node_->right); }
  Concept operand() const { return Concept(node_->left); }

  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Concept& a, const Concept& b);
  friend bool operator<(const Concept& a, const Concept& b) { return compare(a, b) < 0; }
  friend int compare(const Concept& a, const Concept& b);

 private:
  struct Node {
    ConceptKind kind;
    std::string name;
    int modality = 0;
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t hash = 0;
  };
  explicit Concept(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Concept make(ConceptKind k, std::string name, int modality, const Concept* l, const Concept* r);

  std::shared_ptr<const Node> node_;
};

class Formula {
 public:
  static Formula inclusion(const Concept& lhs, const Concept& rhs);
  static Formula negation(const Formula& f);
  static Formula conj(const Formula& a, const Formula& b);
  static Formula disj(const Formula& a, const Formula& b);
  static Formula box(int modality, const Formula& f);
  static Formula dia(int modality, const Formula& f);

  FormulaKind kind() const { return node_->kind; }
  int modality() const { return node_->modality; }
  // Sides of an inclusion.
  const Concept& lhs() const { return node_->lhs; }
  const Concept& rhs() const { return node_->rhs; }
  Formula left() const { return Formula(node_->left); }
  Formula right() const { return Formula(node_->right); }
  Formula operand() const { return Formula(node_->left); }

  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend bool operator<(const Formula& a, const Formula& b) { return compare(a, b) < 0; }
  friend int compare(const Formula& a, const Formula& b);

 private:
  struct Node {
    FormulaKind kind;
    int modality = 0;
    Concept lhs = Concept::top();
    Concept rhs = Concept::top();
    std::shared_ptr<const Node> left;
    std::shared_ptr<const Node> right;
    std::size_t hash = 0;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(FormulaKind k, int modality, const Formula* l, const Formula* r);

  std::shared_ptr<const Node> node_;
};

struct ConceptHash {
  std::size_t operator()(const Concept& c) const { return c.hash(); }
};
struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

// `true` is the inclusion bot ⊑ top.
Formula true_formula();

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

Formula parse_formula(std::string_view text);
Concept parse_concept(std::string_view text);

std::string serialize(const Concept& c);
std::string serialize(const Formula& f);

// Rewrites every inclusion C ⊑ D (C not top) into top ⊑ ¬C ⊔ D and pushes
// negations down to concept names and inclusions.
Formula normalize(const Formula& f);
Concept nnf(const Concept& c);

bool is_nnf(const Concept& c);
// NNF and every inclusion has left side top.
bool is_normalized(const Formula& f);

// Negation in negation normal form. Both arguments must already be in NNF.
Concept neg_nnf(const Concept& c);
Formula neg_nnf(const Formula& f);

std::size_t weight(const Concept& c);
std::size_t weight(const Formula& f);

// Largest modality index occurring in f (0 if none).
int modality_count(const Formula& f);
int modality_count(const Concept& c);

// True iff some concept in f has a box or diamond.
bool has_modalised_concept(const Formula& f);

struct Signature {
  std::set<std::string> concept_names;
  std::set<std::string> role_names;
  int modalities = 0;
};
Signature signature(const Formula& f);

// Closure sets of a normalized formula: subconcepts and subformulas together
// with their NNF negations, plus the role names. Each vector is sorted.
struct Closure {
  std::vector<Concept> concepts;
  std::vector<Formula> formulas;
  std::vector<std::string> roles;

  std::size_t fg_size() const { return concepts.size() + formulas.size() + roles.size(); }
};

Closure closure(const Formula& f);

}  // namespace nnmdl

#endif  // NNMDL_SYNTAX_HPP
