#include "nnmdl/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "nnmdl/corpus.hpp"
#include "nnmdl/extraction.hpp"
#include "nnmdl/fragment.hpp"
#include "nnmdl/tableau.hpp"

namespace nnmdl {

namespace {

using Json = nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text << '\n';
  if (!out) throw UsageError("failed writing " + path);
}

Formula input_formula(const RunConfig& c, Json& report) {
  if (c.expression) return parse_formula(*c.expression);
  if (c.file) return parse_formula(read_file(*c.file));
  std::mt19937_64 rng(*c.seed);
  Formula f = c.fragment ? random_fragment_formula(rng) : random_formula(rng);
  report["formula"] = serialize(f);
  return f;
}

std::string domain_name(DomainMode d) { return d == DomainMode::Constant ? "constant" : "varying"; }

int solve_tableau(const RunConfig& c, const Formula& phi, Json& report, std::ostream& out) {
  SolveOptions opt;
  opt.max_steps = effective_step_cap(c);
  // The written model always passes the validation gate.
  opt.validate = c.validate || c.model_out.has_value();
  opt.extract_model = c.model_out.has_value();
  if (c.trace) opt.trace_sink = [&out](const TraceEvent& e) { out << e.to_json() << '\n' << std::flush; };
  SolveResult r = solve(phi, c.logic, opt);

  const bool sat = r.verdict == Verdict::Sat;
  report["verdict"] = sat ? "sat" : "unsat";
  Json stats;
  stats["logic"] = to_string(c.logic);
  stats["fg_size"] = r.fg_size;
  stats["steps"] = r.search.steps;
  stats["branch_points"] = r.search.branch_points;
  stats["backtracks"] = r.search.backtracks;
  stats["max_labels"] = r.search.max_labels;
  stats["max_label_constraints"] = r.search.max_label_constraints;
  stats["max_domain"] = r.search.max_domain;
  stats["labels_created"] = r.rule_stats.labels_created;
  stats["variables_created"] = r.rule_stats.variables_created;
  Json rules;
  for (std::size_t k = 0; k < kRuleCount; ++k) rules[rule_name(static_cast<Rule>(k))] = r.rule_stats.applications[k];
  stats["rules"] = rules;
  if (sat) stats["labels"] = r.completion->label_count();
  report["stats"] = stats;

  if (sat && c.model_out) {
    if (!r.model) throw ModelError("no model to write: " + r.model_error);
    write_file(*c.model_out, model_to_json(*r.model, 2));
  }
  return sat ? 0 : 1;
}

int solve_fragment_cmd(const RunConfig& c, const Formula& phi, Json& report) {
  FragmentResult r = solve_fragment(phi, c.logic);
  report["verdict"] = r.sat ? "sat" : "unsat";
  Json stats;
  stats["logic"] = to_string(c.logic);
  stats["domain"] = "constant";
  stats["atoms"] = r.atoms;
  stats["initial"] = r.initial;
  stats["surviving"] = r.surviving;
  stats["rounds"] = r.rounds;
  stats["alc_checks"] = r.alc_checks;
  report["stats"] = stats;
  return r.sat ? 0 : 1;
}

int oracle_cmd(const RunConfig& c, const Formula& phi, Json& report) {
  OracleBounds b;
  b.max_worlds = c.max_worlds;
  b.max_domain = c.max_domain;
  b.mode = c.domain;
  OracleResult r = brute_force_sat(phi, c.logic, b);
  report["verdict"] = r.sat ? "sat" : "unsat-within-bounds";
  Json stats;
  stats["logic"] = to_string(c.logic);
  stats["domain"] = domain_name(c.domain);
  stats["max_worlds"] = c.max_worlds;
  stats["max_domain"] = c.max_domain;
  stats["nodes"] = r.nodes;
  if (r.sat) stats["world"] = r.world;
  report["stats"] = stats;
  if (r.sat && c.model_out) write_file(*c.model_out, model_to_json(*r.witness, 2));
  return r.sat ? 0 : 1;
}

}  // namespace

void check_config(const RunConfig& c) {
  int inputs = int(c.expression.has_value()) + int(c.file.has_value());
  if (inputs > 1) throw UsageError("give the formula either with -e or with --file");
  if (inputs == 0 && (!c.seed || c.subcommand != Subcommand::Solve))
    throw UsageError("no formula given (use -e, --file, or --seed with solve)");
  switch (c.subcommand) {
    case Subcommand::Solve:
      if (c.domain == DomainMode::Constant && !c.fragment)
        throw UsageError(
            "constant-domain satisfiability is only decided for formulas without modalised concepts; "
            "pass --fragment (for the full language it is an open problem)");
      if (c.fragment) {
        if (c.domain != DomainMode::Constant)
          throw UsageError("the fragment procedure decides constant-domain satisfiability; pass --domain constant");
        if (c.logic != FrameClass::C && c.logic != FrameClass::N)
          throw UsageError("the fragment procedure covers the logics C and N only");
        if (c.model_out) throw UsageError("the fragment procedure does not build models; drop --model-out");
        if (c.trace) throw UsageError("the fragment procedure has no rule trace; drop --trace");
      }
      break;
    case Subcommand::Oracle:
      if (c.max_worlds == 0 || c.max_domain == 0) throw UsageError("oracle bounds must be positive");
      break;
    case Subcommand::Validate:
      if (!c.model) throw UsageError("validate needs --model");
      break;
    case Subcommand::Abstract:
      break;
  }
}

std::size_t effective_step_cap(const RunConfig& c) {
  if (c.cap_steps) return *c.cap_steps;
  if (const char* env = std::getenv("NNMDL_CAP_STEPS")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0' || v == 0) throw UsageError("NNMDL_CAP_STEPS must be a positive integer");
    return static_cast<std::size_t>(v);
  }
  return SolveOptions{}.max_steps;
}

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    check_config(c);
    Json report;
    Formula phi = input_formula(c, report);
    int status = 2;
    switch (c.subcommand) {
      case Subcommand::Solve:
        status = c.fragment ? solve_fragment_cmd(c, phi, report) : solve_tableau(c, phi, report, out);
        break;
      case Subcommand::Oracle:
        status = oracle_cmd(c, phi, report);
        break;
      case Subcommand::Validate: {
        bool ok = validate_model(model_from_json(read_file(*c.model)), phi, c.logic);
        out << (ok ? "true" : "false") << '\n';
        return ok ? 0 : 1;
      }
      case Subcommand::Abstract:
        out << prop_abstraction(phi).to_json() << '\n';
        return 0;
    }
    out << report.dump() << '\n';
    return status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace nnmdl
