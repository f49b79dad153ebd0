// Seeded random formulas for differential testing.

#ifndef NNMDL_CORPUS_HPP
#define NNMDL_CORPUS_HPP

#include <cstdint>
#include <random>
#include <vector>

#include "nnmdl/syntax.hpp"

namespace nnmdl {

struct CorpusShape {
  std::size_t concept_names = 2;  // drawn from A, B, C
  std::size_t role_names = 1;     // drawn from r, s
  int modalities = 2;
  std::size_t formula_weight = 6;
  std::size_t concept_weight = 3;
};

// Normalized formula with weight at most shape.formula_weight.
Formula random_formula(std::mt19937_64& rng, const CorpusShape& shape = {});

struct FragmentShape {
  std::size_t max_inclusions = 4;
  int modal_depth = 2;
  int modalities = 1;
  std::size_t concept_weight = 2;
  std::size_t max_connectives = 5;
};

// Formula without modalised concepts over at most max_inclusions distinct CIs.
Formula random_fragment_formula(std::mt19937_64& rng, const FragmentShape& shape = {});

std::vector<Formula> formula_corpus(std::uint64_t seed, std::size_t n, const CorpusShape& shape = {});
std::vector<Formula> fragment_corpus(std::uint64_t seed, std::size_t n, const FragmentShape& shape = {});

}  // namespace nnmdl

#endif  // NNMDL_CORPUS_HPP
