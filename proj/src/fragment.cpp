#include "nnmdl/fragment.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <unordered_map>

#include "json.hpp"
#include "nnmdl/tableau.hpp"

namespace nnmdl {

bool check_g_fragment(const Formula& phi) { return !has_modalised_concept(phi); }

int Abstraction::intern(const PropNode& n) {
  auto [it, fresh] = ids_.emplace(n, static_cast<int>(nodes_.size()));
  if (fresh) nodes_.push_back(n);
  return it->second;
}

int Abstraction::find(const PropNode& n) const {
  auto it = ids_.find(n);
  if (it == ids_.end()) throw FragmentError("negation not interned in the abstraction");
  return it->second;
}

int Abstraction::letter(int k) { return intern({PropKind::Letter, k, 0, -1, -1}); }
int Abstraction::negation(int a) { return intern({PropKind::Not, -1, 0, a, -1}); }
int Abstraction::conj(int a, int b) { return intern({PropKind::And, -1, 0, a, b}); }
int Abstraction::disj(int a, int b) { return intern({PropKind::Or, -1, 0, a, b}); }
int Abstraction::box(int modality, int a) { return intern({PropKind::Box, -1, modality, a, -1}); }
int Abstraction::dia(int modality, int a) { return intern({PropKind::Dia, -1, modality, a, -1}); }

int Abstraction::neg(int a) {
  const PropNode n = node(a);
  switch (n.kind) {
    case PropKind::Letter: return negation(a);
    case PropKind::Not: return n.left;
    case PropKind::And: return disj(neg(n.left), neg(n.right));
    case PropKind::Or: return conj(neg(n.left), neg(n.right));
    case PropKind::Box: return dia(n.modality, neg(n.left));
    case PropKind::Dia: return box(n.modality, neg(n.left));
  }
  return a;
}

int Abstraction::negated(int a) const {
  const PropNode& n = node(a);
  switch (n.kind) {
    case PropKind::Letter: return find({PropKind::Not, -1, 0, a, -1});
    case PropKind::Not: return n.left;
    case PropKind::And: return find({PropKind::Or, -1, 0, negated(n.left), negated(n.right)});
    case PropKind::Or: return find({PropKind::And, -1, 0, negated(n.left), negated(n.right)});
    case PropKind::Box: return find({PropKind::Dia, -1, n.modality, negated(n.left), -1});
    case PropKind::Dia: return find({PropKind::Box, -1, n.modality, negated(n.left), -1});
  }
  return a;
}

std::string Abstraction::to_string(int id) const {
  const PropNode& n = node(id);
  switch (n.kind) {
    case PropKind::Letter: return "p" + std::to_string(n.letter + 1);
    case PropKind::Not: return "(not " + to_string(n.left) + ")";
    case PropKind::And: return "(and " + to_string(n.left) + " " + to_string(n.right) + ")";
    case PropKind::Or: return "(or " + to_string(n.left) + " " + to_string(n.right) + ")";
    case PropKind::Box: return "(box " + std::to_string(n.modality) + " " + to_string(n.left) + ")";
    case PropKind::Dia: return "(dia " + std::to_string(n.modality) + " " + to_string(n.left) + ")";
  }
  return "?";
}

std::string Abstraction::to_json(int indent) const {
  nlohmann::ordered_json j;
  j["formula"] = to_string();
  nlohmann::ordered_json ls = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < letters_.size(); ++k) ls["p" + std::to_string(k + 1)] = serialize(letters_[k]);
  j["letters"] = ls;
  return j.dump(indent);
}

Abstraction prop_abstraction(const Formula& phi) {
  if (!check_g_fragment(phi)) throw FragmentError("formula has modalised concepts");
  Formula f = normalize(phi);
  Abstraction a;
  std::unordered_map<Formula, int, FormulaHash> letter_of;
  std::function<int(const Formula&)> go = [&](const Formula& g) -> int {
    switch (g.kind()) {
      case FormulaKind::Inclusion: {
        auto [it, fresh] = letter_of.emplace(g, static_cast<int>(a.letters_.size()));
        if (fresh) a.letters_.push_back(g);
        return a.letter(it->second);
      }
      case FormulaKind::Not: return a.negation(go(g.operand()));
      case FormulaKind::And: {
        int l = go(g.left());
        return a.conj(l, go(g.right()));
      }
      case FormulaKind::Or: {
        int l = go(g.left());
        return a.disj(l, go(g.right()));
      }
      case FormulaKind::Box: return a.box(g.modality(), go(g.operand()));
      case FormulaKind::Dia: return a.dia(g.modality(), go(g.operand()));
    }
    return -1;
  };
  a.root_ = go(f);
  for (std::size_t id = 0; id < a.nodes_.size(); ++id)
    if (a.nodes_[id].kind == PropKind::Dia) a.neg(a.nodes_[id].left);
  return a;
}

Atoms atoms_of(const Abstraction& a) {
  Atoms out;
  out.letter_count = a.letters().size();
  std::function<void(int)> walk = [&](int id) {
    const PropNode& n = a.node(id);
    switch (n.kind) {
      case PropKind::Letter: return;
      case PropKind::Not: walk(n.left); return;
      case PropKind::And:
      case PropKind::Or:
        walk(n.left);
        walk(n.right);
        return;
      case PropKind::Box:
      case PropKind::Dia: {
        std::pair<int, int> key{n.modality, n.kind == PropKind::Box ? n.left : a.negated(n.left)};
        if (std::find(out.boxes.begin(), out.boxes.end(), key) == out.boxes.end()) out.boxes.push_back(key);
        walk(n.left);
        return;
      }
    }
  };
  walk(a.root());
  return out;
}

bool eval_bool(const Abstraction& a, const Atoms& atoms, Valuation v, int id) {
  const PropNode& n = a.node(id);
  auto box_value = [&](int modality, int operand) {
    for (std::size_t b = 0; b < atoms.boxes.size(); ++b)
      if (atoms.boxes[b] == std::pair{modality, operand}) return ((v >> (atoms.letter_count + b)) & 1U) != 0;
    throw FragmentError("box outside the atom set");
  };
  switch (n.kind) {
    case PropKind::Letter: return (v >> n.letter) & 1U;
    case PropKind::Not: return !eval_bool(a, atoms, v, n.left);
    case PropKind::And: return eval_bool(a, atoms, v, n.left) && eval_bool(a, atoms, v, n.right);
    case PropKind::Or: return eval_bool(a, atoms, v, n.left) || eval_bool(a, atoms, v, n.right);
    case PropKind::Box: return box_value(n.modality, n.left);
    case PropKind::Dia: return !box_value(n.modality, a.negated(n.left));
  }
  return false;
}

bool alc_consistent(const Abstraction& a, Valuation letters) {
  const auto& ls = a.letters();
  if (ls.empty()) return true;
  std::optional<Formula> conj;
  for (std::size_t k = 0; k < ls.size(); ++k) {
    Formula lit = ((letters >> k) & 1U) ? ls[k] : Formula::negation(ls[k]);
    conj = conj ? Formula::conj(*conj, lit) : lit;
  }
  SolveOptions opt;
  opt.extract_model = false;
  opt.validate = false;
  return solve(normalize(*conj), FrameClass::E, opt).verdict == Verdict::Sat;
}

FragmentResult solve_fragment(const Formula& phi, FrameClass l, bool alc_filter) {
  if (l != FrameClass::C && l != FrameClass::N)
    throw FragmentError("the fragment procedure covers the classes C and N only");
  Abstraction a = prop_abstraction(phi);
  const Atoms atoms = atoms_of(a);
  FragmentResult res;
  res.atoms = atoms.size();
  if (atoms.size() >= kMaxFragmentAtoms)
    throw FragmentError("too many atoms for valuation enumeration (" + std::to_string(atoms.size()) + ")");
  const std::size_t nl = atoms.letter_count;
  const std::size_t nb = atoms.boxes.size();
  // Operands of the box atoms, negated operands pre-interned.
  std::vector<int> operand(nb);
  for (std::size_t b = 0; b < nb; ++b) operand[b] = atoms.boxes[b].second;

  std::unordered_map<Valuation, bool> alc_memo;
  std::vector<Valuation> v_cur;
  for (Valuation v = 0; v < (Valuation{1} << atoms.size()); ++v) {
    Valuation letters = v & ((Valuation{1} << nl) - 1);
    if (!alc_filter) {
      v_cur.push_back(v);
      continue;
    }
    auto it = alc_memo.find(letters);
    if (it == alc_memo.end()) {
      ++res.alc_checks;
      it = alc_memo.emplace(letters, alc_consistent(a, letters)).first;
    }
    if (it->second) v_cur.push_back(v);
  }
  res.initial = v_cur.size();

  // Value of each box operand under every surviving valuation.
  auto operand_table = [&](const std::vector<Valuation>& vs) {
    std::vector<std::vector<bool>> t(vs.size(), std::vector<bool>(nb));
    for (std::size_t k = 0; k < vs.size(); ++k)
      for (std::size_t b = 0; b < nb; ++b) t[k][b] = eval_bool(a, atoms, vs[k], operand[b]);
    return t;
  };
  auto box_bit = [&](Valuation v, std::size_t b) { return ((v >> (nl + b)) & 1U) != 0; };

  while (true) {
    const auto table = operand_table(v_cur);
    std::map<std::tuple<int, std::uint64_t, std::size_t>, bool> memo;
    // Some surviving valuation makes ψ_b false.
    auto falsifier = [&](std::size_t b) {
      auto key = std::tuple{0, std::uint64_t{0}, b};
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      bool found = false;
      for (const auto& row : table) found = found || !row[b];
      return memo[key] = found;
    };
    // Some surviving valuation separates ⋀_{j∈S} ψ_j from ψ_k.
    auto separator = [&](std::uint64_t s, std::size_t k) {
      auto key = std::tuple{1, s, k};
      if (auto it = memo.find(key); it != memo.end()) return it->second;
      bool found = false;
      for (const auto& row : table) {
        if (found) break;
        bool all = true;
        for (std::size_t j = 0; j < nb && all; ++j)
          if ((s >> j) & 1U) all = row[j];
        found = all != row[k];
      }
      return memo[key] = found;
    };

    std::vector<Valuation> v_next;
    for (Valuation v : v_cur) {
      bool ok = true;
      for (std::size_t k = 0; k < nb && ok; ++k) {
        if (box_bit(v, k)) continue;
        const int i = atoms.boxes[k].first;
        if (l == FrameClass::N) {
          ok = falsifier(k);
          for (std::size_t j = 0; j < nb && ok; ++j)
            if (box_bit(v, j) && atoms.boxes[j].first == i) ok = separator(std::uint64_t{1} << j, k);
        } else {
          std::vector<std::size_t> ones;
          for (std::size_t j = 0; j < nb; ++j)
            if (box_bit(v, j) && atoms.boxes[j].first == i) ones.push_back(j);
          for (std::uint64_t sub = 1; sub < (std::uint64_t{1} << ones.size()) && ok; ++sub) {
            std::uint64_t s = 0;
            for (std::size_t q = 0; q < ones.size(); ++q)
              if ((sub >> q) & 1U) s |= std::uint64_t{1} << ones[q];
            ok = separator(s, k);
          }
        }
      }
      if (ok) v_next.push_back(v);
    }
    ++res.rounds;
    if (v_next.size() == v_cur.size()) break;
    v_cur = std::move(v_next);
  }
  res.surviving = v_cur.size();
  for (Valuation v : v_cur)
    if (eval_bool(a, atoms, v, a.root())) {
      res.sat = true;
      break;
    }
  return res;
}

}  // namespace nnmdl
