// Bounded brute-force satisfiability over small neighbourhood models.
//
// UNSAT answers only mean "no model within the bounds".

#ifndef NNMDL_ORACLE_HPP
#define NNMDL_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "nnmdl/semantics.hpp"
#include "nnmdl/syntax.hpp"

namespace nnmdl {

enum class DomainMode : std::uint8_t { Varying, Constant };

struct OracleBounds {
  std::size_t max_worlds = 2;
  std::size_t max_domain = 2;
  DomainMode mode = DomainMode::Varying;
  // Explicit enumeration refuses spaces with more candidates than this.
  std::uint64_t candidate_cap = 100'000'000;
  // Search nodes brute_force_sat may visit before giving up.
  std::uint64_t node_cap = 20'000'000;
};

class OracleBoundsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Number of candidate models (before the frame filter) enumerate_models
// would visit.
std::uint64_t candidate_count(const Signature& sig, const OracleBounds& bounds);

// Visits every model with 1..max_worlds worlds and non-empty domains of at
// most max_domain elements, elements named in order of first appearance.
// visit returns false to stop early. Worlds are "w0", "w1", ..., elements
// "d0", "d1", ....
void enumerate_models(const Signature& sig, const OracleBounds& bounds, FrameClass l,
                      const std::function<bool(const NeighbourhoodModel&)>& visit);

struct OracleResult {
  bool sat = false;
  std::optional<NeighbourhoodModel> witness;
  // World of the witness that satisfies φ.
  std::string world;
  std::uint64_t nodes = 0;
};

// Searches the same space as enumerate_models, assigning only the bits the
// evaluation of φ actually reads.
OracleResult brute_force_sat(const Formula& phi, FrameClass l, const OracleBounds& bounds = {});

// Literal enumeration with enumerate_models; for cross-checking on tiny bounds.
OracleResult brute_force_sat_exhaustive(const Formula& phi, FrameClass l, const OracleBounds& bounds = {});

}  // namespace nnmdl

#endif  // NNMDL_ORACLE_HPP
