// Countermodel construction from complete, clash-free completion sets.

#ifndef NNMDL_EXTRACTION_HPP
#define NNMDL_EXTRACTION_HPP

#include "nnmdl/semantics.hpp"
#include "nnmdl/tableau.hpp"

namespace nnmdl {

// Label sets as world bitmasks (label n is bit n).
struct TruthApproximation {
  WorldSet floor = 0;
  WorldSet ceil = 0;
};

TruthApproximation floors_ceilings(const CompletionSet& t, const Formula& f);
TruthApproximation floors_ceilings(const CompletionSet& t, const Concept& c, VarId x);

// Worlds are the labels ("0", "1", ...), elements the variables ("x0", ...).
// Neighbourhoods are stored extensionally; throws ModelError when the set is
// not complete and clash-free or the neighbourhoods are too large to store.
NeighbourhoodModel extract_model(const CompletionSet& t, FrameClass l);

// Model checks φ at world "0" and the frame condition of l.
bool validate_model(const NeighbourhoodModel& m, const Formula& phi, FrameClass l);
bool validate(const CompletionSet& t, const Formula& phi, FrameClass l);

}  // namespace nnmdl

#endif  // NNMDL_EXTRACTION_HPP
