#pragma once

#include <string>
#include <vector>

#include "pcl/calculus.hpp"
#include "pcl/labels.hpp"
#include "pcl/semantics.hpp"

namespace pcl {

struct ExtractedModel {
  NeighbourhoodModel model;
  Realization realization;
  // Image of the generation-tree root.
  World root = 0;
};

// Model of a saturated branch: worlds are the world labels of the branch
// (classes of y in {x} under centering), N(x) collects the sets
// alpha_a = { y : y in a in Gamma } for a in N(x), and p holds where x : p is
// in the history.  Throws ModelError if the branch is not saturated or the
// logic has the absoluteness flag.
ExtractedModel extract_model(const Branch& leaf, const Logic& logic);

// Same construction without the saturation and absoluteness guards.  The
// caller must verify the result semantically.
ExtractedModel candidate_model(const Branch& leaf, const Logic& logic);

struct InvariantViolation {
  LabelledFormula formula;
  // True for a member of the history of Gamma that is not satisfied, false
  // for a member of the history of Delta that is satisfied.
  bool antecedent = true;
  std::string message;
};

// Every formula of down-Gamma satisfied, every formula of down-Delta
// falsified, and a <= b in Gamma realized as an inclusion.  Violations are
// listed in the order they were found.
std::vector<InvariantViolation> model_invariant_report(const NeighbourhoodModel& m,
                                                       const Branch& leaf,
                                                       const Realization& realization);

}  // namespace pcl
