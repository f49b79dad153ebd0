#include "doctest.h"
#include "nnmdl/corpus.hpp"
#include "nnmdl/extraction.hpp"
#include "support.hpp"

using namespace nnmdl;
using nnmdl::testing::parse;

namespace {

constexpr FrameClass kClasses[] = {FrameClass::E, FrameClass::M, FrameClass::C, FrameClass::N};

CompletionSet completed(const std::string& f, FrameClass l) {
  SolveOptions o;
  o.extract_model = false;
  o.validate = false;
  SolveResult r = solve(parse(f), l, o);
  REQUIRE(r.verdict == Verdict::Sat);
  return *r.completion;
}

}  // namespace

TEST_CASE("floors and ceilings") {
  CompletionSet t = completed("(and (box 1 (sub top (atom A))) (dia 1 (sub top (atom A))))", FrameClass::E);
  REQUIRE(t.label_count() == 2);
  TruthApproximation p = floors_ceilings(t, parse("(sub top (atom A))"));
  CHECK(p.floor == 0b10);
  CHECK(p.ceil == 0b11);
  TruthApproximation a = floors_ceilings(t, Concept::atom("A"), 1);
  CHECK(a.floor == 0b10);
  CHECK(a.ceil == 0b11);
  TruthApproximation top = floors_ceilings(t, Concept::top(), 1);
  CHECK(top.floor == 0b10);
  TruthApproximation box = floors_ceilings(t, parse("(box 1 (sub top (atom A)))"));
  CHECK(box.floor == 0b01);
  TruthApproximation none = floors_ceilings(t, Concept::atom("Z"), 0);
  CHECK(none.floor == 0);
  CHECK(none.ceil == 0b11);

  CompletionSet all = completed("(sub top (atom A))", FrameClass::E);
  TruthApproximation everywhere = floors_ceilings(all, parse("(sub top (atom A))"));
  CHECK(everywhere.floor == everywhere.ceil);
  CHECK(everywhere.floor == 0b1);
}

TEST_CASE("extraction examples") {
  NeighbourhoodModel d = extract_model(completed("(dia 1 (not (sub top (atom A))))", FrameClass::E), FrameClass::E);
  CHECK(d.worlds.size() == 1);
  CHECK(d.neighbourhoods.at(0).at(0).empty());
  CHECK(satisfies(d, "0", parse("(dia 1 (not (sub top (atom A))))")));

  NeighbourhoodModel r = extract_model(completed("(sub top (some r (atom A)))", FrameClass::E), FrameClass::E);
  CHECK(model_to_json(r) ==
        R"j({"concepts":{"0":{"A":["x1","x2"]}},"constant_domain":false,"domains":{"0":["x0","x1","x2"]},)j"
        R"j("neighbourhoods":{},"roles":{"0":{"r":[["x0","x1"],["x1","x2"],["x2","x2"]]}},"worlds":["0"]})j");

  NeighbourhoodModel n = extract_model(completed("(dia 1 (sub top (atom A)))", FrameClass::N), FrameClass::N);
  for (const auto& per_world : n.neighbourhoods)
    for (const auto& nb : per_world) CHECK(nb.count(n.all_worlds()));
}

TEST_CASE("validation") {
  const Formula f = parse("(and (box 1 (sub top (atom A))) (dia 1 (sub top (atom A))))");
  CompletionSet t = completed(serialize(f), FrameClass::E);
  CHECK(validate(t, f, FrameClass::E));
  NeighbourhoodModel m = extract_model(t, FrameClass::E);
  REQUIRE_FALSE(m.neighbourhoods[0][0].empty());
  m.neighbourhoods[0][0].erase(m.neighbourhoods[0][0].begin());
  CHECK_FALSE(validate_model(m, f, FrameClass::E));

  CompletionSet bad = init(parse("(and (box 1 (sub top (atom A))) (dia 1 (not (sub top (atom A)))))"));
  CHECK_THROWS_AS(extract_model(bad, FrameClass::E), ModelError);
}

TEST_CASE("property: every corpus SAT yields a valid model of the right class and size") {
  auto corpus = formula_corpus(31337, 200);
  for (const auto& f : corpus)
    for (auto l : kClasses) {
      CAPTURE(serialize(f));
      CAPTURE(to_string(l));
      SolveResult r = solve(f, l);
      if (r.verdict != Verdict::Sat) continue;
      REQUIRE(r.model);
      REQUIRE(check_frame_class(*r.model, l));
      REQUIRE(satisfies(*r.model, "0", f));
      REQUIRE(static_cast<double>(r.model->worlds.size()) <= label_bound(r.fg_size, l));
      for (const auto& d : r.model->domains)
        REQUIRE(static_cast<double>(std::count(d.begin(), d.end(), true)) <= constraint_bound(r.fg_size));
      for (LabelId n = 0; n < r.completion->label_count(); ++n)
        REQUIRE_FALSE(r.completion->system(n).variables().empty());
    }
}
