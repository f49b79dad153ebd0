#include <algorithm>

#include "doctest.h"
#include "nnmdl/syntax.hpp"
#include "support.hpp"

using namespace nnmdl;
using nnmdl::testing::any_concept;
using nnmdl::testing::any_formula;
using nnmdl::testing::ci_top;

namespace {

const Concept A = Concept::atom("A");
const Concept B = Concept::atom("B");
const Concept C = Concept::atom("C");

}  // namespace

TEST_CASE("parse builds the expected trees") {
  CHECK(parse_formula("(sub top (atom A))") == ci_top(A));
  CHECK(parse_formula("(box 1 (sub (atom A) (atom B)))") == Formula::box(1, Formula::inclusion(A, B)));
  CHECK(parse_formula("  (dia 2\n (not (sub bot top)))") ==
        Formula::dia(2, Formula::negation(Formula::inclusion(Concept::bot(), Concept::top()))));
  CHECK(parse_concept("(some r (all s (box 1 (dia 2 (atom X_1)))))") ==
        Concept::exists("r", Concept::forall("s", Concept::box(1, Concept::dia(2, Concept::atom("X_1"))))));
}

TEST_CASE("parse rejects malformed input with a position") {
  CHECK_THROWS_AS(parse_formula("(and top top)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(box 0 (sub top top))"), ParseError);
  CHECK_THROWS_AS(parse_formula("(sub top (atom 1A))"), ParseError);
  CHECK_THROWS_AS(parse_formula("(frob top top)"), ParseError);
  CHECK_THROWS_AS(parse_formula("(sub top top"), ParseError);
  CHECK_THROWS_AS(parse_formula("(sub top top) extra"), ParseError);
  try {
    parse_formula("(sub top\n  (atom))");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() >= 3);
  }
}

TEST_CASE("serialize writes the prefix syntax") {
  CHECK(serialize(ci_top(A)) == "(sub top (atom A))");
  CHECK(serialize(Formula::dia(2, ci_top(A))) == "(dia 2 (sub top (atom A)))");
  CHECK(serialize(Concept::negation(Concept::conj(A, B))) == "(not (and (atom A) (atom B)))");
}

TEST_CASE("normalize internalizes inclusions and pushes negation down") {
  CHECK(normalize(Formula::inclusion(A, B)) == ci_top(Concept::disj(Concept::negation(A), B)));
  Formula psi = Formula::inclusion(Concept::top(), Concept::negation(Concept::conj(A, B)));
  CHECK(normalize(Formula::negation(Formula::box(1, psi))) ==
        Formula::dia(1, normalize(Formula::negation(psi))));
  CHECK(nnf(Concept::negation(Concept::conj(A, B))) == Concept::disj(Concept::negation(A), Concept::negation(B)));
  CHECK(nnf(Concept::negation(Concept::exists("r", A))) == Concept::forall("r", Concept::negation(A)));
  CHECK(nnf(Concept::negation(Concept::box(1, A))) == Concept::dia(1, Concept::negation(A)));
  CHECK(nnf(Concept::negation(Concept::top())) == Concept::bot());
  CHECK(is_normalized(normalize(parse_formula("(not (and (sub (atom A) (atom B)) (box 1 (sub top bot))))"))));
}

TEST_CASE("neg_nnf examples") {
  CHECK(neg_nnf(A) == Concept::negation(A));
  CHECK(neg_nnf(Concept::exists("r", A)) == Concept::forall("r", Concept::negation(A)));
  CHECK(neg_nnf(ci_top(C)) == Formula::negation(ci_top(C)));
  CHECK(neg_nnf(Formula::box(1, ci_top(A))) == Formula::dia(1, Formula::negation(ci_top(A))));
}

TEST_CASE("weight follows the recurrences") {
  CHECK(weight(A) == 0);
  CHECK(weight(Concept::negation(A)) == 0);
  CHECK(weight(Concept::exists("r", A)) == 1);
  CHECK(weight(Concept::conj(A, Concept::disj(B, C))) == 2);
  CHECK(weight(ci_top(Concept::exists("r", A))) == 0);
  CHECK(weight(Formula::box(1, ci_top(A))) == 1);
  CHECK(weight(Formula::conj(Formula::box(1, ci_top(A)), ci_top(B))) == 2);
}

TEST_CASE("closure sets") {
  Closure c = closure(ci_top(A));
  CHECK(c.concepts.size() == 4);
  for (const auto& x : {Concept::top(), Concept::bot(), A, Concept::negation(A)})
    CHECK(std::find(c.concepts.begin(), c.concepts.end(), x) != c.concepts.end());
  CHECK(c.formulas.size() == 2);
  CHECK(c.roles.empty());
  CHECK(c.fg_size() == 6);

  Closure r = closure(Formula::box(1, ci_top(Concept::exists("r", A))));
  CHECK(r.roles == std::vector<std::string>{"r"});
}

TEST_CASE("signature and modality count") {
  Formula f = parse_formula("(and (box 2 (sub top (some r (atom B)))) (sub (atom A) (dia 1 top)))");
  Signature s = signature(f);
  CHECK(s.concept_names == std::set<std::string>{"A", "B"});
  CHECK(s.role_names == std::set<std::string>{"r"});
  CHECK(s.modalities == 2);
  CHECK(has_modalised_concept(f));
  CHECK_FALSE(has_modalised_concept(parse_formula("(box 2 (sub top (atom A)))")));
}

TEST_CASE("property: 1000 random ASTs") {
  std::mt19937_64 rng(314159);
  for (int k = 0; k < 1000; ++k) {
    Formula f = any_formula(rng, 3);
    Concept c = any_concept(rng, 4);
    CAPTURE(serialize(f));
    CAPTURE(serialize(c));

    // Round-trip.
    REQUIRE(parse_formula(serialize(f)) == f);
    REQUIRE(parse_concept(serialize(c)) == c);

    // Idempotence.
    Formula nf = normalize(f);
    REQUIRE(is_normalized(nf));
    REQUIRE(normalize(nf) == nf);
    Concept nc = nnf(c);
    REQUIRE(is_nnf(nc));
    REQUIRE(nnf(nc) == nc);

    // Involution and weight symmetry.
    REQUIRE(neg_nnf(neg_nnf(nc)) == nc);
    REQUIRE(neg_nnf(neg_nnf(nf)) == nf);
    REQUIRE(weight(neg_nnf(nc)) == weight(nc));
    REQUIRE(weight(neg_nnf(nf)) == weight(nf));

    // Closure closed under ¬̇ and fg_size consistent.
    Closure cl = closure(nf);
    for (const auto& x : cl.concepts)
      REQUIRE(std::binary_search(cl.concepts.begin(), cl.concepts.end(), neg_nnf(x)));
    for (const auto& x : cl.formulas)
      REQUIRE(std::binary_search(cl.formulas.begin(), cl.formulas.end(), neg_nnf(x)));
    REQUIRE(std::binary_search(cl.concepts.begin(), cl.concepts.end(), Concept::top()));
    REQUIRE(std::binary_search(cl.formulas.begin(), cl.formulas.end(), nf));
  }
}
