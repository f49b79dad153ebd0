#include "doctest.h"
#include "nnmdl/semantics.hpp"
#include "support.hpp"

using namespace nnmdl;
using nnmdl::testing::any_formula;
using nnmdl::testing::any_model;
using Set = std::set<std::string>;

namespace {

const Concept A = Concept::atom("A");

NeighbourhoodModel one_world(const std::vector<std::vector<std::string>>& n1) {
  NeighbourhoodModel m = make_model({"w"}, {{"w", {"d"}}}, 1);
  set_concept(m, "w", "A", {"d"});
  set_neighbourhood(m, 1, "w", n1);
  return m;
}

// w: Δ = {d, e}, A = {e}, r = {(d,e), (e,d)}
// v: Δ = {d},    A = {},  r = {(d,d)}
// N1(w) = {{w,v}}, N1(v) = {}
NeighbourhoodModel two_worlds() {
  NeighbourhoodModel m = make_model({"w", "v"}, {{"w", {"d", "e"}}, {"v", {"d"}}}, 1);
  set_concept(m, "w", "A", {"e"});
  set_concept(m, "v", "A", {});
  add_role_edge(m, "w", "r", "d", "e");
  add_role_edge(m, "w", "r", "e", "d");
  add_role_edge(m, "v", "r", "d", "d");
  set_neighbourhood(m, 1, "w", {{"w", "v"}});
  return m;
}

NeighbourhoodModel with_n1(const std::vector<std::vector<std::string>>& n1) {
  NeighbourhoodModel m = make_model({"w", "v"}, {{"w", {"d"}}, {"v", {"d"}}}, 1);
  set_neighbourhood(m, 1, "w", n1);
  return m;
}

}  // namespace

TEST_CASE("interpretation on one world") {
  NeighbourhoodModel m = one_world({{"w"}});
  CHECK(interpret_concept(m, "w", Concept::negation(A)).empty());
  CHECK(interpret_concept(m, "w", Concept::box(1, A)) == Set{"d"});
  CHECK(interpret_concept(m, "w", Concept::dia(1, A)) == Set{"d"});
  CHECK(interpret_concept(one_world({}), "w", Concept::box(1, A)).empty());
  CHECK_THROWS(interpret_concept(m, "nowhere", A));
  CHECK_THROWS(interpret_concept(m, "w", Concept::box(2, A)));
}

TEST_CASE("two-world table for role restrictions") {
  NeighbourhoodModel m = two_worlds();
  Concept ex = Concept::exists("r", A);
  Concept all = Concept::forall("r", A);
  CHECK(interpret_concept(m, "w", ex) == Set{"d"});
  CHECK(interpret_concept(m, "v", ex).empty());
  CHECK(interpret_concept(m, "w", all) == Set{"d"});
  CHECK(interpret_concept(m, "v", all).empty());
  CHECK(interpret_concept(m, "w", Concept::negation(ex)) == Set{"e"});
  CHECK(interpret_concept(m, "v", Concept::negation(ex)) == Set{"d"});
}

TEST_CASE("truth sets exclude worlds lacking the element") {
  NeighbourhoodModel m = two_worlds();
  CHECK(truth_set_concept(m, "d", Concept::top()) == Set{"w", "v"});
  CHECK(truth_set_concept(m, "e", Concept::top()) == Set{"w"});
  CHECK(truth_set_concept(m, "d", Concept::bot()).empty());
  CHECK(truth_set_concept(m, "d", Concept::negation(A)) == Set{"w", "v"});
  CHECK(truth_set_concept(m, "e", Concept::negation(A)).empty());
  CHECK(truth_set_concept(m, "d", Concept::exists("r", A)) == Set{"w"});
  CHECK(interpret_concept(m, "w", Concept::box(1, Concept::negation(A))) == Set{"d"});
  CHECK(interpret_concept(m, "v", Concept::box(1, Concept::negation(A))).empty());
}

TEST_CASE("satisfaction") {
  Formula t = Formula::inclusion(Concept::bot(), Concept::top());
  Formula p = Formula::inclusion(Concept::top(), A);
  NeighbourhoodModel empty = one_world({});
  CHECK(satisfies(empty, "w", t));
  CHECK(satisfies(empty, "w", Formula::dia(1, p)));
  CHECK(satisfies(empty, "w", Formula::dia(1, Formula::negation(p))));
  NeighbourhoodModel unit = one_world({{"w"}});
  CHECK(satisfies(unit, "w", p));
  CHECK(satisfies(unit, "w", Formula::box(1, p)));
  CHECK_FALSE(satisfies(unit, "w", Formula::box(1, Formula::negation(p))));
  CHECK_FALSE(satisfies(unit, "w", Formula::dia(1, Formula::negation(p))));
}

TEST_CASE("frame classes") {
  CHECK_FALSE(check_frame_class(with_n1({{"w"}}), FrameClass::M));
  CHECK(check_frame_class(with_n1({{"w"}}), FrameClass::E));
  CHECK_FALSE(check_frame_class(with_n1({{"w"}, {"v"}}), FrameClass::C));
  CHECK(check_frame_class(with_n1({{"w"}, {"v"}, {}}), FrameClass::C));
  CHECK_FALSE(check_frame_class(with_n1({{"w"}}), FrameClass::N));

  NeighbourhoodModel full = make_model({"w", "v"}, {{"w", {"d"}}, {"v", {"d"}}}, 1);
  for (const char* w : {"w", "v"}) set_neighbourhood(full, 1, w, {{}, {"w"}, {"v"}, {"w", "v"}});
  for (auto l : {FrameClass::E, FrameClass::M, FrameClass::C, FrameClass::N}) CHECK(check_frame_class(full, l));
}

TEST_CASE("closure operations") {
  NeighbourhoodModel m = with_n1({{"w"}, {"v"}});
  NeighbourhoodModel c = close_intersection(m);
  CHECK(c.neighbourhoods[0][0] == Neighbourhood{0, 1, 2});

  NeighbourhoodModel s = close_supplementation(with_n1({{"w"}}));
  CHECK(s.neighbourhoods[0][0] == Neighbourhood{1, 3});

  NeighbourhoodModel u = add_unit(with_n1({}));
  CHECK(u.neighbourhoods[0][0] == Neighbourhood{3});
  CHECK(u.neighbourhoods[0][1] == Neighbourhood{3});
}

TEST_CASE("model JSON is canonical") {
  NeighbourhoodModel m = two_worlds();
  std::string j = model_to_json(m);
  CHECK(j ==
        R"j({"concepts":{"v":{"A":[]},"w":{"A":["e"]}},"constant_domain":false,"domains":{"v":["d"],"w":["d","e"]},)j"
        R"j("neighbourhoods":{"1":{"v":[],"w":[["v","w"]]}},"roles":{"v":{"r":[["d","d"]]},"w":{"r":[["d","e"],["e","d"]]}},)j"
        R"j("worlds":["w","v"]})j");
  CHECK(model_to_json(model_from_json(j)) == j);
  CHECK_THROWS_AS(model_from_json(R"j({"worlds":["w"],"domains":{"w":[]}})j"), ModelError);
  CHECK_THROWS_AS(model_from_json("not json"), ModelError);
}

TEST_CASE("property: random models") {
  std::mt19937_64 rng(2718);
  for (int k = 0; k < 300; ++k) {
    NeighbourhoodModel m = any_model(rng);
    Formula f = any_formula(rng, 3);
    CAPTURE(model_to_json(m));
    CAPTURE(serialize(f));
    REQUIRE_NOTHROW(check_well_formed(m));
    REQUIRE(model_to_json(model_from_json(model_to_json(m))) == model_to_json(m));
    Evaluator ev(m);
    Evaluator ev2(m);
    Formula nf = normalize(f);
    for (std::size_t w = 0; w < m.worlds.size(); ++w) {
      REQUIRE(ev.satisfies(w, f) == ev2.satisfies(w, nf));
      REQUIRE(ev.satisfies(w, Formula::dia(1, nf)) != ev.satisfies(w, Formula::box(1, neg_nnf(nf))));
      Concept c = nnf(nnf(f.kind() == FormulaKind::Inclusion ? f.rhs() : A));
      const ElementSet& ext = ev.interpret(w, c);
      const ElementSet& neg = ev.interpret(w, neg_nnf(c));
      for (std::size_t d = 0; d < m.elements.size(); ++d) {
        REQUIRE((!ext[d] || m.domains[w][d]));
        if (m.domains[w][d]) REQUIRE(ext[d] != neg[d]);
      }
    }
    NeighbourhoodModel s = close_supplementation(m);
    NeighbourhoodModel c = close_intersection(m);
    NeighbourhoodModel u = add_unit(m);
    REQUIRE(check_frame_class(s, FrameClass::M));
    REQUIRE(check_frame_class(c, FrameClass::C));
    REQUIRE(check_frame_class(u, FrameClass::N));
    REQUIRE(model_to_json(close_supplementation(s)) == model_to_json(s));
    REQUIRE(model_to_json(close_intersection(c)) == model_to_json(c));
    REQUIRE(model_to_json(add_unit(u)) == model_to_json(u));
    for (std::size_t i = 0; i < m.neighbourhoods.size(); ++i)
      for (std::size_t w = 0; w < m.worlds.size(); ++w)
        for (WorldSet a : m.neighbourhoods[i][w]) {
          REQUIRE(s.neighbourhoods[i][w].count(a));
          REQUIRE(c.neighbourhoods[i][w].count(a));
          REQUIRE(u.neighbourhoods[i][w].count(a));
        }
  }
}

TEST_CASE("property: frame-closure idempotence over 1000 models") {
  std::mt19937_64 rng(1618);
  for (int k = 0; k < 1000; ++k) {
    NeighbourhoodModel m = any_model(rng);
    NeighbourhoodModel s = close_supplementation(m);
    NeighbourhoodModel c = close_intersection(m);
    NeighbourhoodModel u = add_unit(m);
    REQUIRE(s.neighbourhoods == close_supplementation(s).neighbourhoods);
    REQUIRE(c.neighbourhoods == close_intersection(c).neighbourhoods);
    REQUIRE(u.neighbourhoods == add_unit(u).neighbourhoods);
  }
}
