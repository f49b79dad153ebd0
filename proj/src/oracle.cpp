#include "nnmdl/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <unordered_map>

namespace nnmdl {

namespace {

constexpr std::size_t kMaxConceptNames = 3;
constexpr std::size_t kMaxRoleNames = 2;
constexpr int kMaxModalities = 2;
constexpr std::size_t kMaxBoundWorlds = 4;
constexpr std::size_t kMaxBoundDomain = 4;

void check_limits(const Signature& sig, const OracleBounds& b) {
  if (b.max_worlds < 1 || b.max_domain < 1) throw OracleBoundsError("oracle bounds must be at least 1");
  if (b.max_worlds > kMaxBoundWorlds || b.max_domain > kMaxBoundDomain)
    throw OracleBoundsError("oracle bounds are limited to 4 worlds and 4 elements per domain");
  if (sig.concept_names.size() > kMaxConceptNames || sig.role_names.size() > kMaxRoleNames ||
      sig.modalities > kMaxModalities)
    throw OracleBoundsError("signature too large for the oracle (at most 3 concept names, 2 roles, 2 modalities)");
}

// Per-world domains as lists of pool indices, pool = {0, ..., pool-1}.
struct DomainConfig {
  std::vector<std::vector<std::size_t>> domains;
  std::size_t pool = 0;
};

void for_each_config(std::size_t nw, const OracleBounds& b, const std::function<void(const DomainConfig&)>& fn) {
  if (b.mode == DomainMode::Constant) {
    for (std::size_t k = 1; k <= b.max_domain; ++k) {
      DomainConfig c;
      c.pool = k;
      std::vector<std::size_t> d(k);
      for (std::size_t e = 0; e < k; ++e) d[e] = e;
      c.domains.assign(nw, d);
      fn(c);
    }
    return;
  }
  // Varying: each world keeps some already seen elements and introduces a
  // block of new ones, so elements are numbered by first appearance.
  DomainConfig c;
  std::function<void(std::size_t)> rec = [&](std::size_t w) {
    if (w == nw) {
      fn(c);
      return;
    }
    const std::size_t seen = c.pool;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << seen); ++mask) {
      auto kept = static_cast<std::size_t>(std::popcount(mask));
      for (std::size_t fresh = 0; kept + fresh <= b.max_domain; ++fresh) {
        if (kept + fresh == 0) continue;
        std::vector<std::size_t> d;
        for (std::size_t e = 0; e < seen; ++e)
          if ((mask >> e) & 1U) d.push_back(e);
        for (std::size_t e = 0; e < fresh; ++e) d.push_back(seen + e);
        c.domains.push_back(d);
        c.pool = seen + fresh;
        rec(w + 1);
        c.pool = seen;
        c.domains.pop_back();
      }
    }
  };
  rec(0);
}

std::string world_name(std::size_t w) { return "w" + std::to_string(w); }
std::string element_name(std::size_t e) { return "d" + std::to_string(e); }

NeighbourhoodModel skeleton(const DomainConfig& c, int modalities, bool constant) {
  std::vector<std::string> worlds;
  std::map<std::string, std::vector<std::string>> domains;
  for (std::size_t w = 0; w < c.domains.size(); ++w) {
    worlds.push_back(world_name(w));
    auto& d = domains[worlds.back()];
    for (auto e : c.domains[w]) d.push_back(element_name(e));
  }
  return make_model(worlds, domains, modalities, constant);
}

std::size_t model_bits(const Signature& sig, const DomainConfig& c) {
  const std::size_t nw = c.domains.size();
  std::size_t bits = 0;
  for (const auto& d : c.domains) bits += sig.concept_names.size() * d.size() + sig.role_names.size() * d.size() * d.size();
  bits += static_cast<std::size_t>(sig.modalities) * nw * (std::size_t{1} << nw);
  return bits;
}

}  // namespace

std::uint64_t candidate_count(const Signature& sig, const OracleBounds& bounds) {
  check_limits(sig, bounds);
  long double total = 0;
  for (std::size_t nw = 1; nw <= bounds.max_worlds; ++nw)
    for_each_config(nw, bounds, [&](const DomainConfig& c) { total += std::ldexp(1.0L, static_cast<int>(model_bits(sig, c))); });
  if (total >= 1.8e19L) return UINT64_MAX;
  return static_cast<std::uint64_t>(total);
}

void enumerate_models(const Signature& sig, const OracleBounds& bounds, FrameClass l,
                      const std::function<bool(const NeighbourhoodModel&)>& visit) {
  std::uint64_t count = candidate_count(sig, bounds);
  if (count > bounds.candidate_cap)
    throw OracleBoundsError("model space too large: " + std::to_string(count) + " candidates exceed the cap of " +
                            std::to_string(bounds.candidate_cap));
  const std::vector<std::string> concepts(sig.concept_names.begin(), sig.concept_names.end());
  const std::vector<std::string> roles(sig.role_names.begin(), sig.role_names.end());
  bool stop = false;
  for (std::size_t nw = 1; nw <= bounds.max_worlds && !stop; ++nw)
    for_each_config(nw, bounds, [&](const DomainConfig& c) {
      if (stop) return;
      NeighbourhoodModel base = skeleton(c, sig.modalities, bounds.mode == DomainMode::Constant);
      std::vector<std::size_t> idx(c.pool);
      for (std::size_t e = 0; e < c.pool; ++e) idx[e] = base.element_index(element_name(e));
      const std::size_t bits = model_bits(sig, c);
      const std::size_t subsets = std::size_t{1} << nw;
      for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits) && !stop; ++code) {
        NeighbourhoodModel m = base;
        std::size_t pos = 0;
        auto next = [&] { return ((code >> pos++) & 1U) != 0; };
        // Bit order: concepts, roles, neighbourhoods; world-major.
        for (std::size_t w = 0; w < nw; ++w)
          for (const auto& a : concepts) {
            ElementSet ext(m.elements.size(), false);
            for (auto e : c.domains[w]) ext[idx[e]] = next();
            m.concepts[w][a] = ext;
          }
        for (std::size_t w = 0; w < nw; ++w)
          for (const auto& r : roles) {
            auto& edges = m.roles[w][r];
            for (auto d : c.domains[w])
              for (auto e : c.domains[w])
                if (next()) edges.insert({idx[d], idx[e]});
          }
        for (auto& per_world : m.neighbourhoods)
          for (auto& nb : per_world)
            for (std::size_t a = 0; a < subsets; ++a)
              if (next()) nb.insert(a);
        if (!check_frame_class(m, l)) continue;
        if (!visit(m)) stop = true;
      }
    });
}

OracleResult brute_force_sat_exhaustive(const Formula& phi, FrameClass l, const OracleBounds& bounds) {
  OracleResult res;
  enumerate_models(signature(phi), bounds, l, [&](const NeighbourhoodModel& m) {
    ++res.nodes;
    Evaluator ev(m);
    WorldSet ts = ev.truth_set(phi);
    if (ts == 0) return true;
    res.sat = true;
    res.witness = m;
    res.world = m.worlds[static_cast<std::size_t>(std::countr_zero(ts))];
    return false;
  });
  return res;
}

// ---------------------------------------------------------------------------
// Lazy search

namespace {

enum V : std::int8_t { kF = 0, kT = 1, kU = 2 };

V v_not(V a) { return a == kU ? kU : (a == kT ? kF : kT); }

// φ compiled into arrays of subterm nodes.
struct Compiled {
  struct CNode {
    ConceptKind kind;
    int sym = -1;  // concept name or role index
    int l = -1, r = -1, modality = 0;
  };
  struct FNode {
    FormulaKind kind;
    int l = -1, r = -1, modality = 0;  // for inclusions l/r are concept nodes
  };
  std::vector<CNode> concepts;
  std::vector<FNode> formulas;
  std::vector<std::string> concept_names, role_names;
  std::unordered_map<Concept, int, ConceptHash> cmemo;
  std::unordered_map<Formula, int, FormulaHash> fmemo;
  int root = -1;

  static int index_of(std::vector<std::string>& v, const std::string& s) {
    auto it = std::find(v.begin(), v.end(), s);
    if (it != v.end()) return static_cast<int>(it - v.begin());
    v.push_back(s);
    return static_cast<int>(v.size() - 1);
  }

  int add(const Concept& c) {
    if (auto it = cmemo.find(c); it != cmemo.end()) return it->second;
    CNode n{c.kind()};
    switch (c.kind()) {
      case ConceptKind::Atom: n.sym = index_of(concept_names, c.name()); break;
      case ConceptKind::And:
      case ConceptKind::Or:
        n.l = add(c.left());
        n.r = add(c.right());
        break;
      case ConceptKind::Exists:
      case ConceptKind::Forall:
        n.sym = index_of(role_names, c.name());
        n.l = add(c.operand());
        break;
      case ConceptKind::Not: n.l = add(c.operand()); break;
      case ConceptKind::Box:
      case ConceptKind::Dia:
        n.l = add(c.operand());
        n.modality = c.modality();
        break;
      default: break;
    }
    concepts.push_back(n);
    int id = static_cast<int>(concepts.size() - 1);
    cmemo.emplace(c, id);
    return id;
  }

  int add(const Formula& f) {
    if (auto it = fmemo.find(f); it != fmemo.end()) return it->second;
    FNode n{f.kind()};
    switch (f.kind()) {
      case FormulaKind::Inclusion:
        n.l = add(f.lhs());
        n.r = add(f.rhs());
        break;
      case FormulaKind::And:
      case FormulaKind::Or:
        n.l = add(f.left());
        n.r = add(f.right());
        break;
      case FormulaKind::Not: n.l = add(f.operand()); break;
      case FormulaKind::Box:
      case FormulaKind::Dia:
        n.l = add(f.operand());
        n.modality = f.modality();
        break;
    }
    formulas.push_back(n);
    int id = static_cast<int>(formulas.size() - 1);
    fmemo.emplace(f, id);
    return id;
  }
};

class LazySearch {
 public:
  LazySearch(const Compiled& f, const DomainConfig& c, int modalities, FrameClass l, std::uint64_t& nodes,
             std::uint64_t node_cap)
      : f_(f), c_(c), nw_(c.domains.size()), pool_(c.pool), modalities_(modalities), l_(l), nodes_(nodes),
        node_cap_(node_cap) {
    in_domain_.assign(nw_ * pool_, false);
    for (std::size_t w = 0; w < nw_; ++w)
      for (auto e : c.domains[w]) in_domain_[w * pool_ + e] = true;
    concept_base_ = 0;
    role_base_ = concept_base_ + nw_ * f.concept_names.size() * pool_;
    nbhd_base_ = role_base_ + nw_ * f.role_names.size() * pool_ * pool_;
    subsets_ = std::size_t{1} << nw_;
    const std::size_t total = nbhd_base_ + static_cast<std::size_t>(modalities) * nw_ * subsets_;
    value_.assign(total, kU);
    if (l == FrameClass::N)
      for (int i = 0; i < modalities; ++i)
        for (std::size_t w = 0; w < nw_; ++w) value_[nbhd_bit(i, w, subsets_ - 1)] = kT;
  }

  bool run() { return dfs(); }

  NeighbourhoodModel witness(bool constant) const {
    NeighbourhoodModel m = skeleton(c_, modalities_, constant);
    std::vector<std::size_t> idx(pool_);
    for (std::size_t e = 0; e < pool_; ++e) idx[e] = m.element_index(element_name(e));
    for (std::size_t w = 0; w < nw_; ++w) {
      for (std::size_t a = 0; a < f_.concept_names.size(); ++a) {
        ElementSet ext(m.elements.size(), false);
        for (auto e : c_.domains[w]) ext[idx[e]] = value_[concept_bit(w, a, e)] == kT;
        m.concepts[w][f_.concept_names[a]] = ext;
      }
      for (std::size_t r = 0; r < f_.role_names.size(); ++r) {
        auto& edges = m.roles[w][f_.role_names[r]];
        for (auto d : c_.domains[w])
          for (auto e : c_.domains[w])
            if (value_[role_bit(w, r, d, e)] == kT) edges.insert({idx[d], idx[e]});
      }
    }
    for (int i = 0; i < modalities_; ++i)
      for (std::size_t w = 0; w < nw_; ++w) {
        std::vector<bool> ones = closed_ones(i, w);
        for (std::size_t a = 0; a < subsets_; ++a)
          if (ones[a]) m.neighbourhoods[static_cast<std::size_t>(i)][w].insert(a);
      }
    return m;
  }

  std::size_t satisfying_world() const { return found_world_; }

 private:
  std::size_t concept_bit(std::size_t w, std::size_t a, std::size_t d) const {
    return concept_base_ + (w * f_.concept_names.size() + a) * pool_ + d;
  }
  std::size_t role_bit(std::size_t w, std::size_t r, std::size_t d, std::size_t e) const {
    return role_base_ + ((w * f_.role_names.size() + r) * pool_ + d) * pool_ + e;
  }
  std::size_t nbhd_bit(int i, std::size_t w, std::size_t alpha) const {
    return nbhd_base_ + (static_cast<std::size_t>(i) * nw_ + w) * subsets_ + alpha;
  }

  V read(std::size_t bit) {
    V v = static_cast<V>(value_[bit]);
    if (v == kU && pick_ == SIZE_MAX) pick_ = bit;
    return v;
  }

  // Members of N_i(w) forced by the 1-bits under the frame condition.
  std::vector<bool> closed_ones(int i, std::size_t w) const {
    std::vector<bool> ones(subsets_, false);
    std::vector<std::size_t> frontier;
    for (std::size_t a = 0; a < subsets_; ++a)
      if (value_[nbhd_bit(i, w, a)] == kT) {
        ones[a] = true;
        frontier.push_back(a);
      }
    if (l_ == FrameClass::M) {
      for (std::size_t a = 0; a < subsets_; ++a)
        if (ones[a])
          for (std::size_t b = 0; b < subsets_; ++b)
            if ((a & b) == a) ones[b] = true;
    } else if (l_ == FrameClass::C) {
      while (!frontier.empty()) {
        std::size_t a = frontier.back();
        frontier.pop_back();
        for (std::size_t b = 0; b < subsets_; ++b)
          if (ones[b] && !ones[a & b]) {
            ones[a & b] = true;
            frontier.push_back(a & b);
          }
      }
    }
    return ones;
  }

  bool consistent(std::size_t bit) const {
    if (bit < nbhd_base_ || l_ == FrameClass::E || l_ == FrameClass::N) return true;
    std::size_t rel = bit - nbhd_base_;
    auto i = static_cast<int>(rel / (nw_ * subsets_));
    std::size_t w = (rel / subsets_) % nw_;
    std::vector<bool> ones = closed_ones(i, w);
    for (std::size_t a = 0; a < subsets_; ++a)
      if (ones[a] && value_[nbhd_bit(i, w, a)] == kF) return false;
    return true;
  }

  // Value of concept node n for element d at world w (d ∈ Δ_w).
  V concept_value(int n, std::size_t w, std::size_t d) {
    std::int8_t& slot = ccache_[(static_cast<std::size_t>(n) * nw_ + w) * pool_ + d];
    if (slot >= 0) return static_cast<V>(slot);
    const auto& node = f_.concepts[static_cast<std::size_t>(n)];
    V v = kU;
    switch (node.kind) {
      case ConceptKind::Atom: v = read(concept_bit(w, static_cast<std::size_t>(node.sym), d)); break;
      case ConceptKind::Top: v = kT; break;
      case ConceptKind::Bot: v = kF; break;
      case ConceptKind::Not: v = v_not(concept_value(node.l, w, d)); break;
      case ConceptKind::And: {
        V a = concept_value(node.l, w, d);
        v = a == kF ? kF : (concept_value(node.r, w, d) == kF ? kF : (a == kT && concept_value(node.r, w, d) == kT ? kT : kU));
        break;
      }
      case ConceptKind::Or: {
        V a = concept_value(node.l, w, d);
        v = a == kT ? kT : (concept_value(node.r, w, d) == kT ? kT : (a == kF && concept_value(node.r, w, d) == kF ? kF : kU));
        break;
      }
      case ConceptKind::Exists:
      case ConceptKind::Forall: {
        const bool ex = node.kind == ConceptKind::Exists;
        v = ex ? kF : kT;
        for (auto e : c_.domains[w]) {
          V edge = read(role_bit(w, static_cast<std::size_t>(node.sym), d, e));
          V term;
          if (ex) {
            term = edge == kF ? kF : (concept_value(node.l, w, e) == kF ? kF : (edge == kT && concept_value(node.l, w, e) == kT ? kT : kU));
            if (term == kT) {
              v = kT;
              break;
            }
          } else {
            term = edge == kF ? kT : (concept_value(node.l, w, e) == kT ? kT : (edge == kT && concept_value(node.l, w, e) == kF ? kF : kU));
            if (term == kF) {
              v = kF;
              break;
            }
          }
          if (term == kU) v = kU;
        }
        break;
      }
      case ConceptKind::Box:
      case ConceptKind::Dia: {
        // ⟦C⟧_d over the worlds whose domain holds d; Dia reads ⟦¬C⟧_d.
        const bool dia = node.kind == ConceptKind::Dia;
        std::size_t set = 0;
        bool known = true;
        for (std::size_t u = 0; u < nw_ && known; ++u) {
          if (!in_domain_[u * pool_ + d]) continue;
          V x = concept_value(node.l, u, d);
          if (dia) x = v_not(x);
          if (x == kU) known = false;
          else if (x == kT) set |= std::size_t{1} << u;
        }
        if (!known) break;
        V member = read(nbhd_bit(node.modality - 1, w, set));
        v = dia ? v_not(member) : member;
        break;
      }
    }
    slot = v;
    return v;
  }

  V formula(int n, std::size_t w) {
    std::int8_t& slot = fcache_[static_cast<std::size_t>(n) * nw_ + w];
    if (slot >= 0) return static_cast<V>(slot);
    const auto& node = f_.formulas[static_cast<std::size_t>(n)];
    V v = kU;
    switch (node.kind) {
      case FormulaKind::Inclusion: {
        v = kT;
        for (auto d : c_.domains[w]) {
          V lhs = concept_value(node.l, w, d);
          V term = lhs == kF ? kT : (concept_value(node.r, w, d) == kT ? kT : (lhs == kT && concept_value(node.r, w, d) == kF ? kF : kU));
          if (term == kF) {
            v = kF;
            break;
          }
          if (term == kU) v = kU;
        }
        break;
      }
      case FormulaKind::Not: v = v_not(formula(node.l, w)); break;
      case FormulaKind::And: {
        V a = formula(node.l, w);
        v = a == kF ? kF : (formula(node.r, w) == kF ? kF : (a == kT && formula(node.r, w) == kT ? kT : kU));
        break;
      }
      case FormulaKind::Or: {
        V a = formula(node.l, w);
        v = a == kT ? kT : (formula(node.r, w) == kT ? kT : (a == kF && formula(node.r, w) == kF ? kF : kU));
        break;
      }
      case FormulaKind::Box:
      case FormulaKind::Dia: {
        const bool dia = node.kind == FormulaKind::Dia;
        std::size_t set = 0;
        bool known = true;
        for (std::size_t u = 0; u < nw_ && known; ++u) {
          V x = formula(node.l, u);
          if (dia) x = v_not(x);
          if (x == kU) known = false;
          else if (x == kT) set |= std::size_t{1} << u;
        }
        if (!known) break;
        V member = read(nbhd_bit(node.modality - 1, w, set));
        v = dia ? v_not(member) : member;
        break;
      }
    }
    slot = v;
    return v;
  }

  V evaluate() {
    ccache_.assign(f_.concepts.size() * nw_ * pool_, -1);
    fcache_.assign(f_.formulas.size() * nw_, -1);
    pick_ = SIZE_MAX;
    V any = kF;
    for (std::size_t w = 0; w < nw_; ++w) {
      V v = formula(f_.root, w);
      if (v == kT) {
        found_world_ = w;
        return kT;
      }
      if (v == kU) any = kU;
    }
    return any;
  }

  bool dfs() {
    if (++nodes_ > node_cap_)
      throw OracleBoundsError("oracle search exceeded its node cap of " + std::to_string(node_cap_));
    V v = evaluate();
    if (v == kT) return true;
    if (v == kF) return false;
    const std::size_t bit = pick_;
    for (V choice : {kF, kT}) {
      value_[bit] = choice;
      if (consistent(bit) && dfs()) return true;
    }
    value_[bit] = kU;
    return false;
  }

  const Compiled& f_;
  const DomainConfig& c_;
  std::size_t nw_, pool_;
  int modalities_;
  FrameClass l_;
  std::uint64_t& nodes_;
  std::uint64_t node_cap_;
  std::vector<bool> in_domain_;
  std::size_t concept_base_ = 0, role_base_ = 0, nbhd_base_ = 0, subsets_ = 0;
  std::vector<std::int8_t> value_;
  std::vector<std::int8_t> ccache_, fcache_;
  std::size_t pick_ = SIZE_MAX;
  std::size_t found_world_ = 0;
};

}  // namespace

OracleResult brute_force_sat(const Formula& phi, FrameClass l, const OracleBounds& bounds) {
  const Signature sig = signature(phi);
  check_limits(sig, bounds);
  Compiled f;
  f.root = f.add(phi);
  OracleResult res;
  const bool constant = bounds.mode == DomainMode::Constant;
  for (std::size_t nw = 1; nw <= bounds.max_worlds && !res.sat; ++nw)
    for_each_config(nw, bounds, [&](const DomainConfig& c) {
      if (res.sat) return;
      LazySearch s(f, c, sig.modalities, l, res.nodes, bounds.node_cap);
      if (!s.run()) return;
      res.sat = true;
      NeighbourhoodModel m = s.witness(constant);
      if (!check_frame_class(m, l) || !satisfies(m, world_name(s.satisfying_world()), phi))
        throw std::logic_error("oracle witness failed independent verification");
      res.witness = std::move(m);
      res.world = world_name(s.satisfying_world());
    });
  return res;
}

}  // namespace nnmdl
