// Random ASTs and models for property tests.

#ifndef NNMDL_TESTS_SUPPORT_HPP
#define NNMDL_TESTS_SUPPORT_HPP

#include <random>
#include <string>
#include <vector>

#include "nnmdl/semantics.hpp"
#include "nnmdl/syntax.hpp"

namespace nnmdl::testing {

inline int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

// Arbitrary concept over names A-C, roles r and s, modalities 1-2, with
// every constructor including the modal ones.
inline Concept any_concept(std::mt19937_64& rng, int depth) {
  static const char* names[] = {"A", "B", "C"};
  static const char* roles[] = {"r", "s"};
  int k = depth <= 0 ? pick(rng, 0, 2) : pick(rng, 0, 9);
  switch (k) {
    case 0: return Concept::atom(names[pick(rng, 0, 2)]);
    case 1: return Concept::top();
    case 2: return Concept::bot();
    case 3: return Concept::negation(any_concept(rng, depth - 1));
    case 4: return Concept::conj(any_concept(rng, depth - 1), any_concept(rng, depth - 1));
    case 5: return Concept::disj(any_concept(rng, depth - 1), any_concept(rng, depth - 1));
    case 6: return Concept::exists(roles[pick(rng, 0, 1)], any_concept(rng, depth - 1));
    case 7: return Concept::forall(roles[pick(rng, 0, 1)], any_concept(rng, depth - 1));
    case 8: return Concept::box(pick(rng, 1, 2), any_concept(rng, depth - 1));
    default: return Concept::dia(pick(rng, 1, 2), any_concept(rng, depth - 1));
  }
}

inline Formula any_formula(std::mt19937_64& rng, int depth) {
  int k = depth <= 0 ? 0 : pick(rng, 0, 5);
  switch (k) {
    case 0: return Formula::inclusion(any_concept(rng, 2), any_concept(rng, 2));
    case 1: return Formula::negation(any_formula(rng, depth - 1));
    case 2: return Formula::conj(any_formula(rng, depth - 1), any_formula(rng, depth - 1));
    case 3: return Formula::disj(any_formula(rng, depth - 1), any_formula(rng, depth - 1));
    case 4: return Formula::box(pick(rng, 1, 2), any_formula(rng, depth - 1));
    default: return Formula::dia(pick(rng, 1, 2), any_formula(rng, depth - 1));
  }
}

// Well-formed model with up to 3 worlds and 2 elements, arbitrary
// neighbourhoods, names A-C, roles r and s, two modalities.
inline NeighbourhoodModel any_model(std::mt19937_64& rng) {
  const int nw = pick(rng, 1, 3);
  std::vector<std::string> worlds;
  std::map<std::string, std::vector<std::string>> domains;
  for (int w = 0; w < nw; ++w) {
    worlds.push_back("w" + std::to_string(w));
    auto& d = domains[worlds.back()];
    int mask = pick(rng, 1, 3);
    for (int e = 0; e < 2; ++e)
      if ((mask >> e) & 1) d.push_back("d" + std::to_string(e));
  }
  NeighbourhoodModel m = make_model(worlds, domains, 2);
  for (const auto& w : worlds) {
    const auto& d = domains[w];
    for (const char* a : {"A", "B", "C"}) {
      std::vector<std::string> ext;
      for (const auto& e : d)
        if (pick(rng, 0, 1)) ext.push_back(e);
      set_concept(m, w, a, ext);
    }
    for (const char* r : {"r", "s"})
      for (const auto& x : d)
        for (const auto& y : d)
          if (pick(rng, 0, 2) == 0) add_role_edge(m, w, r, x, y);
  }
  for (int i = 1; i <= 2; ++i)
    for (const auto& w : worlds) {
      std::vector<std::vector<std::string>> sets;
      for (WorldSet s = 0; s < (WorldSet{1} << nw); ++s)
        if (pick(rng, 0, 2) == 0) sets.push_back(world_ids(m, s));
      set_neighbourhood(m, i, w, sets);
    }
  return m;
}

inline Formula ci_top(const Concept& c) { return Formula::inclusion(Concept::top(), c); }
inline Formula parse(const std::string& s) { return parse_formula(s); }

}  // namespace nnmdl::testing

#endif  // NNMDL_TESTS_SUPPORT_HPP
