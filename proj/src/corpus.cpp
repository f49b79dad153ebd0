#include "nnmdl/corpus.hpp"

#include <functional>
#include <string>

namespace nnmdl {

namespace {

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

const char* const kConceptNames[] = {"A", "B", "C"};
const char* const kRoleNames[] = {"r", "s"};

Concept leaf(std::mt19937_64& rng, std::size_t names) {
  std::size_t k = pick(rng, names + 2);
  if (k == names) return pick(rng, 2) == 0 ? Concept::top() : Concept::bot();
  if (k == names + 1) return Concept::negation(Concept::atom(kConceptNames[pick(rng, names)]));
  return Concept::atom(kConceptNames[k]);
}

// Concept of weight exactly `budget`.
Concept gen_concept(std::mt19937_64& rng, std::size_t budget, std::size_t names, std::size_t roles, int modalities) {
  if (budget == 0) return leaf(rng, names);
  const std::size_t ops = modalities > 0 ? 4 : 3;
  switch (pick(rng, ops)) {
    case 0: {
      std::size_t left = pick(rng, budget);
      Concept a = gen_concept(rng, left, names, roles, modalities);
      Concept b = gen_concept(rng, budget - 1 - left, names, roles, modalities);
      return pick(rng, 2) == 0 ? Concept::conj(a, b) : Concept::disj(a, b);
    }
    case 1: {
      std::string r = kRoleNames[pick(rng, roles)];
      Concept c = gen_concept(rng, budget - 1, names, roles, modalities);
      return pick(rng, 2) == 0 ? Concept::exists(r, c) : Concept::forall(r, c);
    }
    case 2: return Concept::negation(gen_concept(rng, budget, names, roles, modalities));
    default: {
      int i = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(modalities)));
      Concept c = gen_concept(rng, budget - 1, names, roles, modalities);
      return pick(rng, 2) == 0 ? Concept::box(i, c) : Concept::dia(i, c);
    }
  }
}

Formula gen_formula(std::mt19937_64& rng, std::size_t budget, const CorpusShape& s) {
  auto inclusion = [&] {
    std::size_t w = pick(rng, s.concept_weight + 1);
    std::size_t lw = pick(rng, w + 1);
    // Mostly top on the left, which keeps the normalized weight in range.
    Concept lhs = pick(rng, 3) == 0 ? gen_concept(rng, lw, s.concept_names, s.role_names, s.modalities) : Concept::top();
    Concept rhs = gen_concept(rng, lhs == Concept::top() ? w : w - lw, s.concept_names, s.role_names, s.modalities);
    return Formula::inclusion(lhs, rhs);
  };
  if (budget == 0) return pick(rng, 3) == 0 ? Formula::negation(inclusion()) : inclusion();
  switch (pick(rng, 4)) {
    case 0: {
      std::size_t left = pick(rng, budget);
      Formula a = gen_formula(rng, left, s);
      Formula b = gen_formula(rng, budget - 1 - left, s);
      return pick(rng, 2) == 0 ? Formula::conj(a, b) : Formula::disj(a, b);
    }
    case 1: return Formula::negation(gen_formula(rng, budget, s));
    default: {
      int i = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(s.modalities)));
      Formula f = gen_formula(rng, budget - 1, s);
      return pick(rng, 2) == 0 ? Formula::box(i, f) : Formula::dia(i, f);
    }
  }
}

}  // namespace

Formula random_formula(std::mt19937_64& rng, const CorpusShape& shape) {
  // Normalization can grow the weight, so resample until it fits.
  while (true) {
    Formula f = normalize(gen_formula(rng, pick(rng, shape.formula_weight + 1), shape));
    if (weight(f) <= shape.formula_weight) return f;
  }
}

Formula random_fragment_formula(std::mt19937_64& rng, const FragmentShape& s) {
  std::vector<Formula> pool;
  std::size_t k = 1 + pick(rng, s.max_inclusions);
  for (std::size_t j = 0; j < k; ++j)
    pool.push_back(Formula::inclusion(Concept::top(), gen_concept(rng, pick(rng, s.concept_weight + 1), 2, 1, 0)));
  std::size_t connectives = 0;
  std::function<Formula(int)> go = [&](int depth) -> Formula {
    if (connectives >= s.max_connectives || pick(rng, 3) == 0) {
      const Formula& p = pool[pick(rng, pool.size())];
      return pick(rng, 3) == 0 ? Formula::negation(p) : p;
    }
    ++connectives;
    std::size_t op = depth < s.modal_depth ? pick(rng, 4) : pick(rng, 2);
    int i = 1 + static_cast<int>(pick(rng, static_cast<std::size_t>(s.modalities)));
    switch (op) {
      case 0: {
        Formula a = go(depth);
        return Formula::conj(a, go(depth));
      }
      case 1: {
        Formula a = go(depth);
        return Formula::disj(a, go(depth));
      }
      case 2: return Formula::box(i, go(depth + 1));
      default: return Formula::dia(i, go(depth + 1));
    }
  };
  return normalize(go(0));
}

std::vector<Formula> formula_corpus(std::uint64_t seed, std::size_t n, const CorpusShape& shape) {
  std::mt19937_64 rng(seed);
  std::vector<Formula> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(random_formula(rng, shape));
  return out;
}

std::vector<Formula> fragment_corpus(std::uint64_t seed, std::size_t n, const FragmentShape& shape) {
  std::mt19937_64 rng(seed);
  std::vector<Formula> out;
  for (std::size_t j = 0; j < n; ++j) out.push_back(random_fragment_formula(rng, shape));
  return out;
}

}  // namespace nnmdl
