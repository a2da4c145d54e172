#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "pcl/calculus.hpp"
#include "pcl/formula.hpp"
#include "pcl/labels.hpp"

namespace pcl {

using World = std::size_t;
using WorldSet = boost::dynamic_bitset<>;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Finite neighbourhood model <W, N, [[.]]>.  Worlds are 0..size()-1 with
// display names; every neighbourhood is a nonempty subset of W.
class NeighbourhoodModel {
 public:
  NeighbourhoodModel() = default;
  explicit NeighbourhoodModel(std::vector<std::string> world_names);
  static NeighbourhoodModel with_worlds(std::size_t n);

  std::size_t size() const { return names_.size(); }
  const std::string& world_name(World w) const { return names_.at(w); }
  std::optional<World> find_world(std::string_view name) const;

  WorldSet empty_set() const { return WorldSet(size()); }
  WorldSet singleton(World w) const;
  WorldSet set_of(std::initializer_list<World> ws) const;

  const std::vector<WorldSet>& neighbourhoods(World w) const { return nbhds_.at(w); }
  // Adds alpha to N(w) unless already present.  Rejects empty sets.
  void add_neighbourhood(World w, const WorldSet& alpha);
  bool has_neighbourhood(World w, const WorldSet& alpha) const;

  void set_valuation(const std::string& atom, const WorldSet& worlds);
  // Worlds where the atom is true; the empty set for unknown atoms.
  WorldSet valuation(const std::string& atom) const;
  const std::map<std::string, WorldSet>& valuations() const { return valuation_; }

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<WorldSet>> nbhds_;
  std::map<std::string, WorldSet> valuation_;
};

// Memoizing evaluator of truth sets over one model.  The model must outlive
// the evaluator and not change while it is in use.
class Evaluator {
 public:
  explicit Evaluator(const NeighbourhoodModel& m) : m_(m) {}
  const WorldSet& truth_set(const Formula& f);
  bool forces(World w, const Formula& f);
  // Condition (4) at x with [[A]] and [[A -> B]] given.
  bool conditional_holds(World x, const WorldSet& ant, const WorldSet& imp) const;
  // Some beta in N(x), beta <= within, with beta ||-E ant and beta ||-A imp.
  bool has_witness(World x, const WorldSet& within, const WorldSet& ant, const WorldSet& imp) const;

 private:
  const NeighbourhoodModel& m_;
  std::unordered_map<const void*, WorldSet> cache_;
};

WorldSet truth_set(const NeighbourhoodModel& m, const Formula& f);
bool forces(const NeighbourhoodModel& m, World w, const Formula& f);

struct FrameViolation {
  std::string condition;
  World world = 0;
  std::string detail;
};

// Checks the frame conditions of the logic (local readings).  Empty means
// the model is a frame of the logic.
std::vector<FrameViolation> check_frame(const NeighbourhoodModel& m, const Logic& logic);

// (rho, sigma).  Singleton labels {x} always denote {rho(x)}.
struct Realization {
  std::map<WorldLabel, World> worlds;
  std::map<NbhdLabel, WorldSet> nbhds;

  World world(WorldLabel x) const;
  WorldSet nbhd(NbhdLabel a, const NeighbourhoodModel& m) const;
};

// M |=_{rho,sigma} F.  Throws ModelError for labels the realization misses.
bool satisfies(const NeighbourhoodModel& m, const Realization& r, const LabelledFormula& f);
bool satisfies(Evaluator& ev, const NeighbourhoodModel& m, const Realization& r,
               const LabelledFormula& f);
bool satisfies_sequent(const NeighbourhoodModel& m, const Realization& r, const Sequent& s);

struct Countermodel {
  NeighbourhoodModel model;
  World world = 0;
};

// Exhaustive search over models with 1..max_worlds worlds whose valuation
// ranges over the atoms of f, filtered by the logic's frame conditions.
// Complete up to truth-preserving equivalence of neighbourhood systems.
std::optional<Countermodel> enumerate_countermodel(const Formula& f, const Logic& logic,
                                                   std::size_t max_worlds);

}  // namespace pcl
