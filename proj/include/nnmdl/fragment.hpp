// Constant-domain satisfiability for formulas without modalised concepts,
// for the classes C and N, by propositional abstraction.

#ifndef NNMDL_FRAGMENT_HPP
#define NNMDL_FRAGMENT_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "nnmdl/semantics.hpp"
#include "nnmdl/syntax.hpp"

namespace nnmdl {

class FragmentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// True iff no box or diamond occurs inside a concept.
bool check_g_fragment(const Formula& phi);

enum class PropKind : std::uint8_t { Letter, Not, And, Or, Box, Dia };

struct PropNode {
  PropKind kind = PropKind::Letter;
  int letter = -1;
  int modality = 0;
  int left = -1;
  int right = -1;

  friend auto operator<=>(const PropNode&, const PropNode&) = default;
};

// Propositional modal formula over letters p1, p2, ... standing for the
// distinct CIs of the input. Nodes are hash-consed, so equal subformulas
// share an id.
class Abstraction {
 public:
  int root() const { return root_; }
  const PropNode& node(int id) const { return nodes_[static_cast<std::size_t>(id)]; }
  std::size_t node_count() const { return nodes_.size(); }
  // letters()[k] is the CI abstracted to p(k+1).
  const std::vector<Formula>& letters() const { return letters_; }

  // Node of the NNF negation. Every diamond operand's negation is interned
  // at construction, so this never fails for those.
  int negated(int a) const;

  std::string to_string(int id) const;
  std::string to_string() const { return to_string(root_); }
  // {"formula": ..., "letters": {"p1": "(sub ...)", ...}}
  std::string to_json(int indent = -1) const;

 private:
  friend Abstraction prop_abstraction(const Formula& phi);
  int intern(const PropNode& n);
  int find(const PropNode& n) const;
  int letter(int k);
  int negation(int a);
  int conj(int a, int b);
  int disj(int a, int b);
  int box(int modality, int a);
  int dia(int modality, int a);
  int neg(int a);

  std::vector<PropNode> nodes_;
  std::map<PropNode, int> ids_;
  std::vector<Formula> letters_;
  int root_ = -1;
};

// Abstraction of normalize(phi). Throws FragmentError outside the fragment.
Abstraction prop_abstraction(const Formula& phi);

// A valuation is fixed by its values on the atoms: the letters first, then
// the boxes □_iψ of the formula (diamonds ◇_iψ read as ¬□_i¬̇ψ).
struct Atoms {
  std::size_t letter_count = 0;
  // (modality, operand node) per box atom, after the letters.
  std::vector<std::pair<int, int>> boxes;
  std::size_t size() const { return letter_count + boxes.size(); }
};
using Valuation = std::uint32_t;

Atoms atoms_of(const Abstraction& a);
bool eval_bool(const Abstraction& a, const Atoms& atoms, Valuation v, int node);

// The CIs with letter value 1 and the negated CIs with value 0 have a common
// ALC model. Decided by the tableau with no modal operators present.
bool alc_consistent(const Abstraction& a, Valuation letters);

// Atom counts from this value on are refused.
inline constexpr std::size_t kMaxFragmentAtoms = 20;

struct FragmentResult {
  bool sat = false;
  std::size_t atoms = 0;
  std::size_t initial = 0;    // |V0|
  std::size_t surviving = 0;  // |V*|
  std::size_t rounds = 0;
  std::size_t alc_checks = 0;
};

// Greatest-fixpoint elimination of valuations lacking witnesses. Without
// alc_filter the initial set keeps every valuation, consistent or not.
FragmentResult solve_fragment(const Formula& phi, FrameClass l, bool alc_filter = true);

}  // namespace nnmdl

#endif  // NNMDL_FRAGMENT_HPP
