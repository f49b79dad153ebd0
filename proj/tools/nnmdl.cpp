#include <iostream>

#include "CLI11.hpp"
#include "nnmdl/cli.hpp"

namespace {

void add_common(CLI::App* app, nnmdl::RunConfig& c, std::string& logic) {
  app->add_option("--logic", logic, "Frame class")->check(CLI::IsMember({"E", "M", "C", "N"}));
  app->add_option("-e,--expr", c.expression, "Formula text");
  app->add_option("--file", c.file, "File holding the formula")->check(CLI::ExistingFile);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Satisfiability for non-normal modal description logics"};
  app.require_subcommand(1);
  nnmdl::RunConfig c;
  std::string logic = "E";
  std::string domain = "varying";

  auto* solve = app.add_subcommand("solve", "Decide satisfiability with the tableau or the fragment procedure");
  add_common(solve, c, logic);
  solve->add_option("--domain", domain, "Domain mode")->check(CLI::IsMember({"varying", "constant"}));
  solve->add_flag("--fragment", c.fragment, "Use the propositional-abstraction procedure");
  solve->add_option("--seed", c.seed, "Draw the formula from the random corpus");
  solve->add_option("--model-out", c.model_out, "Write the model as JSON when satisfiable");
  solve->add_flag("--trace", c.trace, "Stream rule applications as JSON lines");
  solve->add_flag("!--no-validate", c.validate, "Skip model validation");
  solve->add_option("--cap-steps", c.cap_steps, "Rule application cap")->check(CLI::PositiveNumber);

  auto* oracle = app.add_subcommand("oracle", "Search small models exhaustively");
  add_common(oracle, c, logic);
  oracle->add_option("--domain", domain, "Domain mode")->check(CLI::IsMember({"varying", "constant"}));
  oracle->add_option("--max-worlds", c.max_worlds, "World bound")->check(CLI::Range(1, 4));
  oracle->add_option("--max-domain", c.max_domain, "Domain bound")->check(CLI::Range(1, 4));
  oracle->add_option("--model-out", c.model_out, "Write the witness as JSON when one is found");

  auto* validate = app.add_subcommand("validate", "Check a model JSON against a formula");
  add_common(validate, c, logic);
  validate->add_option("--model", c.model, "Model JSON")->required()->check(CLI::ExistingFile);

  auto* abstract = app.add_subcommand("abstract", "Print the propositional abstraction");
  abstract->add_option("-e,--expr", c.expression, "Formula text");
  abstract->add_option("--file", c.file, "File holding the formula")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (*solve) c.subcommand = nnmdl::Subcommand::Solve;
  if (*oracle) c.subcommand = nnmdl::Subcommand::Oracle;
  if (*validate) c.subcommand = nnmdl::Subcommand::Validate;
  if (*abstract) c.subcommand = nnmdl::Subcommand::Abstract;
  c.logic = nnmdl::parse_frame_class(logic);
  c.domain = domain == "constant" ? nnmdl::DomainMode::Constant : nnmdl::DomainMode::Varying;
  return nnmdl::run(c, std::cout, std::cerr);
}
