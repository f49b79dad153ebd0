// Command-line runs: parse input, decide, print one JSON verdict line.

#ifndef NNMDL_CLI_HPP
#define NNMDL_CLI_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>

#include "nnmdl/oracle.hpp"
#include "nnmdl/semantics.hpp"

namespace nnmdl {

enum class Subcommand : std::uint8_t { Solve, Oracle, Validate, Abstract };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::Solve;
  FrameClass logic = FrameClass::E;
  DomainMode domain = DomainMode::Varying;
  bool fragment = false;
  // Exactly one of these supplies the formula; seed draws it from the
  // random corpus.
  std::optional<std::string> expression;
  std::optional<std::string> file;
  std::optional<std::uint64_t> seed;
  // Model read by validate.
  std::optional<std::string> model;
  std::optional<std::string> model_out;
  bool trace = false;
  bool validate = true;
  std::size_t max_worlds = 2;
  std::size_t max_domain = 2;
  std::optional<std::size_t> cap_steps;
};

// Throws UsageError when the configuration is not decided by any engine.
void check_config(const RunConfig& config);

// Step cap after the flag, then NNMDL_CAP_STEPS, then the default.
std::size_t effective_step_cap(const RunConfig& config);

// Exit status: 0 sat / valid, 1 unsat / invalid, 2 usage or engine error.
// Results go to out, diagnostics to err.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace nnmdl

#endif  // NNMDL_CLI_HPP
