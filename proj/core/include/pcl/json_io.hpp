#pragma once

#include <nlohmann/json.hpp>

#include "pcl/calculus.hpp"
#include "pcl/countermodel.hpp"
#include "pcl/search.hpp"
#include "pcl/semantics.hpp"

namespace pcl {

using Json = nlohmann::json;

// {"op": "atom", "name": "p"} / {"op": "implies", "args": [..., ...]}
Json formula_to_json(const Formula& f);
Formula formula_from_json(const Json& j);

// Labelled formulas travel in the text syntax.
// {"antecedent": ["x0 : p", ...], "succedent": [...]}
Json sequent_to_json(const Sequent& s);
Sequent sequent_from_json(const Json& j);

// Saturated branch: current sequent, histories and generation edges.
Json branch_to_json(const Branch& b);

// {"logic": name, "root": sequent,
//  "nodes": [{"sequent", "rule", "principal", "fresh", "children"}]}
Json derivation_to_json(const Derivation& d);
Derivation derivation_from_json(const Json& j);

// {"worlds": [...], "neighbourhoods": {world: [[world, ...], ...]},
//  "valuation": {atom: [world, ...]}, "root": world}
// Loading throws ModelError on unknown worlds or empty neighbourhoods.
Json model_to_json(const NeighbourhoodModel& m, World root);
struct LoadedModel {
  NeighbourhoodModel model;
  std::optional<World> root;
};
LoadedModel model_from_json(const Json& j);

Json trace_event_to_json(const TraceEvent& e);

}  // namespace pcl
