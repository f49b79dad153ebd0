// Labelled tableau for satisfiability of modal ALC formulas over varying-domain
// neighbourhood models of the classes E, M, C and N.
//
// A completion set is a family of constraint systems, one per label. Each
// label stands for a prospective world; variables stand for domain elements
// and keep their identity across labels.

#ifndef NNMDL_TABLEAU_HPP
#define NNMDL_TABLEAU_HPP

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "nnmdl/semantics.hpp"
#include "nnmdl/syntax.hpp"

namespace nnmdl {

using LabelId = std::uint32_t;
using VarId = std::uint32_t;
using TermId = std::uint32_t;

// An internal error of the engine: a termination bound was exceeded.
class EngineError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A configured step or label cap was hit before the search finished.
class ResourceLimit : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dense numbering of the closure sets of a normalized formula.
class ClosureIndex {
 public:
  explicit ClosureIndex(const Formula& phi);

  std::size_t concept_count() const { return concepts_.size(); }
  std::size_t formula_count() const { return formulas_.size(); }
  std::size_t role_count() const { return roles_.size(); }
  // |Fg(φ)| of the closure the index was built from.
  std::size_t fg_size() const { return fg_; }

  const Concept& concept_at(TermId id) const { return concepts_[id].term; }
  const Formula& formula_at(TermId id) const { return formulas_[id].term; }
  const std::string& role_at(TermId id) const { return roles_[id]; }

  std::optional<TermId> find(const Concept& c) const;
  std::optional<TermId> find(const Formula& f) const;
  std::optional<TermId> find_role(const std::string& r) const;

  TermId neg_concept(TermId id) const { return concepts_[id].neg; }
  TermId neg_formula(TermId id) const { return formulas_[id].neg; }
  // Operand / left child and right child.
  TermId concept_left(TermId id) const { return concepts_[id].left; }
  TermId concept_right(TermId id) const { return concepts_[id].right; }
  TermId concept_role(TermId id) const { return concepts_[id].role; }
  TermId formula_left(TermId id) const { return formulas_[id].left; }
  TermId formula_right(TermId id) const { return formulas_[id].right; }
  // Right-hand concept of an inclusion top ⊑ C.
  TermId inclusion_rhs(TermId id) const { return formulas_[id].left; }

  TermId top() const { return top_; }
  TermId bot() const { return bot_; }

  const std::vector<TermId>& concepts_of_kind(ConceptKind k) const {
    return concept_kinds_[static_cast<std::size_t>(k)];
  }
  const std::vector<TermId>& formulas_of_kind(FormulaKind k) const {
    return formula_kinds_[static_cast<std::size_t>(k)];
  }

 private:
  struct ConceptEntry {
    Concept term;
    TermId neg = 0, left = 0, right = 0, role = 0;
  };
  struct FormulaEntry {
    Formula term;
    TermId neg = 0, left = 0, right = 0;
  };
  std::vector<ConceptEntry> concepts_;
  std::vector<FormulaEntry> formulas_;
  std::vector<std::string> roles_;
  std::unordered_map<Concept, TermId, ConceptHash> concept_ids_;
  std::unordered_map<Formula, TermId, FormulaHash> formula_ids_;
  std::array<std::vector<TermId>, 10> concept_kinds_;
  std::array<std::vector<TermId>, 6> formula_kinds_;
  TermId top_ = 0, bot_ = 0;
  std::size_t fg_ = 0;
};

struct Constraint {
  enum class Kind : std::uint8_t { Formula, Concept, Role };
  Kind kind = Kind::Formula;
  LabelId label = 0;
  // Formula id, concept id or role id depending on kind.
  TermId term = 0;
  VarId x = 0;
  VarId y = 0;

  friend auto operator<=>(const Constraint&, const Constraint&) = default;
};

// The n-labelled constraints of one label.
class ConstraintSystem {
 public:
  ConstraintSystem(LabelId label, std::size_t formula_count) : label_(label), formulas_(formula_count, false) {}

  LabelId label() const { return label_; }
  bool has_formula(TermId f) const { return formulas_[f]; }
  bool has_concept(TermId c, VarId x) const;
  bool has_edge(TermId r, VarId x, VarId y) const { return edges_.count({r, x, y}) != 0; }
  bool occurs(VarId x) const { return concepts_.count(x) != 0; }

  // Variables in the well-order <.
  std::vector<VarId> variables() const;
  const std::vector<bool>& formula_flags() const { return formulas_; }
  const std::map<VarId, std::vector<bool>>& concept_table() const { return concepts_; }
  const std::set<std::tuple<TermId, VarId, VarId>>& edges() const { return edges_; }
  std::size_t constraint_count() const;

  // Returns true when the constraint was not present before.
  bool add_formula(TermId f);
  bool add_concept(TermId c, VarId x, std::size_t concept_count);
  bool add_edge(TermId r, VarId x, VarId y) { return edges_.insert({r, x, y}).second; }

 private:
  LabelId label_;
  std::vector<bool> formulas_;
  std::map<VarId, std::vector<bool>> concepts_;
  std::set<std::tuple<TermId, VarId, VarId>> edges_;
};

enum class Rule : std::uint8_t { And, Or, Sqcap, Sqcup, Exists, Forall, Eq, Neq, Modal };
inline constexpr std::size_t kRuleCount = 9;
std::string rule_name(Rule r);

struct TableauStats {
  std::array<std::size_t, kRuleCount> applications{};
  std::size_t labels_created = 0;
  std::size_t variables_created = 0;

  std::size_t total_applications() const;
};

class CompletionSet {
 public:
  explicit CompletionSet(std::shared_ptr<const ClosureIndex> index) : index_(std::move(index)) {}

  const ClosureIndex& index() const { return *index_; }
  std::shared_ptr<const ClosureIndex> index_ptr() const { return index_; }

  // Labels are numbered 0, 1, ... in creation order.
  std::size_t label_count() const { return systems_.size(); }
  const ConstraintSystem& system(LabelId n) const { return systems_.at(n); }
  std::vector<LabelId> label_order() const;
  VarId next_variable() const { return next_var_; }
  const TableauStats& stats() const { return stats_; }

  bool contains(const Constraint& c) const;
  // Adds c (creating its label if it is the next fresh one); true if new.
  bool add(const Constraint& c);
  LabelId new_label();
  VarId new_variable();
  TableauStats& mutable_stats() { return stats_; }

  // When set, the modal rule gives a new label without concept constraints
  // a fresh variable, so every extracted world has a non-empty domain.
  bool seed_labels() const { return seed_labels_; }
  void set_seed_labels(bool on) { seed_labels_ = on; }

 private:
  std::shared_ptr<const ClosureIndex> index_;
  bool seed_labels_ = true;
  std::vector<ConstraintSystem> systems_;
  VarId next_var_ = 0;
  TableauStats stats_;
};

struct RuleInstance {
  Rule rule = Rule::And;
  LabelId label = 0;
  std::vector<Constraint> premises;
  // Constraints each branch adds. Fresh labels/variables are already resolved
  // to the ids apply() will allocate.
  std::vector<std::vector<Constraint>> branches;

  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

// {0: φ, 0: ⊤(x0)}.
CompletionSet init(const Formula& phi);

bool is_clash(const CompletionSet& t);
// <-minimal y blocking x in the system, if any.
std::optional<VarId> blocker(VarId x, const ConstraintSystem& s);
bool blocked(VarId x, const ConstraintSystem& s);

// Every applicable rule instance in priority order: R∧ R⊓ R= R∀, then R∃ R≠,
// then R∨ R⊔, then the modal rule.
std::vector<RuleInstance> find_applicable(const CompletionSet& t, FrameClass l);
std::optional<RuleInstance> next_applicable(const CompletionSet& t, FrameClass l);
bool is_applicable(const CompletionSet& t, const RuleInstance& inst, FrameClass l);
// Throws std::out_of_range for a bad branch and std::invalid_argument for a
// stale instance.
CompletionSet apply(const CompletionSet& t, const RuleInstance& inst, std::size_t branch, FrameClass l);
bool is_complete(const CompletionSet& t, FrameClass l);

std::string to_string(const CompletionSet& t, const Constraint& c);

// Termination bounds: labels ≤ fg² for E/M/N and ≤ 2^fg·fg for C.
double label_bound(std::size_t fg_size, FrameClass l);
// Per-label constraint cap 2^(2·fg), saturated.
double constraint_bound(std::size_t fg_size);

struct TraceEvent {
  std::size_t step = 0;
  Rule rule = Rule::And;
  LabelId label = 0;
  std::size_t branch = 0;
  std::vector<std::string> added;

  std::string to_json() const;
};

struct SolveOptions {
  std::size_t max_steps = 5'000'000;
  // 0 means only the theoretical bound applies.
  std::size_t max_labels = 0;
  bool extract_model = true;
  bool validate = true;
  bool record_trace = false;
  std::function<void(const TraceEvent&)> trace_sink;
  // Fresh variable for modal-rule labels that would otherwise have none.
  // Off reproduces the rule set verbatim, which admits empty domains.
  bool seed_labels = true;
};

enum class Verdict : std::uint8_t { Sat, Unsat };

struct SearchStats {
  std::size_t steps = 0;
  std::size_t branch_points = 0;
  std::size_t backtracks = 0;
  std::size_t max_labels = 0;
  std::size_t max_label_constraints = 0;
  std::size_t max_domain = 0;
};

struct SolveResult {
  Verdict verdict = Verdict::Unsat;
  std::optional<CompletionSet> completion;
  std::optional<NeighbourhoodModel> model;
  // Why no model is attached to a SAT result (too many labels to store).
  std::string model_error;
  std::vector<TraceEvent> trace;
  TableauStats rule_stats;
  SearchStats search;
  std::size_t fg_size = 0;
};

// Normalizes phi if needed. Throws ResourceLimit when a cap is hit and
// EngineError when a termination bound or model validation fails.
SolveResult solve(const Formula& phi, FrameClass l, const SolveOptions& options = {});

}  // namespace nnmdl

#endif  // NNMDL_TABLEAU_HPP
