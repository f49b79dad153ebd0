// Finite neighbourhood models over ALC interpretations and their evaluation.

#ifndef NNMDL_SEMANTICS_HPP
#define NNMDL_SEMANTICS_HPP

#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nnmdl/syntax.hpp"

namespace nnmdl {

enum class FrameClass : std::uint8_t { E, M, C, N };

std::string to_string(FrameClass l);
FrameClass parse_frame_class(std::string_view s);
inline constexpr FrameClass kAllFrameClasses[] = {FrameClass::E, FrameClass::M, FrameClass::C, FrameClass::N};

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One bit per world index. Models are limited to 64 worlds.
using WorldSet = std::uint64_t;
inline constexpr std::size_t kMaxWorlds = 64;
// Supplementation closure enumerates supersets and refuses larger models.
inline constexpr std::size_t kMaxVerifiableWorlds = 16;

// Membership flags over NeighbourhoodModel::elements.
using ElementSet = std::vector<bool>;
using Neighbourhood = std::set<WorldSet>;

// Worlds and elements are addressed by index internally and by their string
// ids at the API boundary and in JSON.
struct NeighbourhoodModel {
  std::vector<std::string> worlds;
  // Union of all domains, sorted.
  std::vector<std::string> elements;
  bool constant_domain = false;
  // [world] -> domain
  std::vector<ElementSet> domains;
  // [world] -> concept name -> extension
  std::vector<std::map<std::string, ElementSet>> concepts;
  // [world] -> role name -> pairs of element indices
  std::vector<std::map<std::string, std::set<std::pair<std::size_t, std::size_t>>>> roles;
  // [modality - 1][world]
  std::vector<std::vector<Neighbourhood>> neighbourhoods;

  std::size_t world_index(std::string_view id) const;
  std::size_t element_index(std::string_view id) const;
  WorldSet all_worlds() const;
  int modality_count() const { return static_cast<int>(neighbourhoods.size()); }
};

// Builder-style helper: worlds and per-world domains given by id.
NeighbourhoodModel make_model(const std::vector<std::string>& worlds,
                              const std::map<std::string, std::vector<std::string>>& domains,
                              int modalities, bool constant_domain = false);
void set_concept(NeighbourhoodModel& m, std::string_view world, const std::string& name,
                 const std::vector<std::string>& members);
void add_role_edge(NeighbourhoodModel& m, std::string_view world, const std::string& role, std::string_view from,
                   std::string_view to);
void set_neighbourhood(NeighbourhoodModel& m, int modality, std::string_view world,
                       const std::vector<std::vector<std::string>>& sets);
WorldSet world_set(const NeighbourhoodModel& m, const std::vector<std::string>& ids);
std::vector<std::string> world_ids(const NeighbourhoodModel& m, WorldSet s);

// Throws ModelError when an invariant of the model structure is violated.
void check_well_formed(const NeighbourhoodModel& m);

// Evaluation over world/element indices. An Evaluator memoizes extensions and
// truth sets for a single model.
class Evaluator {
 public:
  explicit Evaluator(const NeighbourhoodModel& m) : m_(m) {}

  // Extension of c at world w.
  const ElementSet& interpret(std::size_t w, const Concept& c);
  // {v | d ∈ c^{I_v}}; worlds whose domain lacks d are excluded.
  WorldSet truth_set(std::size_t d, const Concept& c);
  WorldSet truth_set(const Formula& f);
  bool satisfies(std::size_t w, const Formula& f) { return (truth_set(f) >> w) & 1U; }

 private:
  const std::vector<ElementSet>& extension(const Concept& c);
  const Neighbourhood& neighbourhood(int modality, std::size_t w) const;

  const NeighbourhoodModel& m_;
  std::map<std::string, std::vector<ElementSet>> concept_memo_;
  std::map<std::string, WorldSet> formula_memo_;
};

std::set<std::string> interpret_concept(const NeighbourhoodModel& m, std::string_view world, const Concept& c);
std::set<std::string> truth_set_concept(const NeighbourhoodModel& m, std::string_view element, const Concept& c);
bool satisfies(const NeighbourhoodModel& m, std::string_view world, const Formula& f);

bool check_frame_class(const NeighbourhoodModel& m, FrameClass l);

NeighbourhoodModel close_supplementation(NeighbourhoodModel m);
NeighbourhoodModel close_intersection(NeighbourhoodModel m);
NeighbourhoodModel add_unit(NeighbourhoodModel m);

// JSON in the canonical layout: every set is a sorted array, object keys are
// sorted, and neighbourhood members are ordered lexicographically. The world
// list keeps its order, so the first world survives a round trip.
std::string model_to_json(const NeighbourhoodModel& m, int indent = -1);
NeighbourhoodModel model_from_json(std::string_view text);

}  // namespace nnmdl

#endif  // NNMDL_SEMANTICS_HPP
