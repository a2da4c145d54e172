#include "pcl/semantics.hpp"

#include <algorithm>

namespace pcl {

NeighbourhoodModel::NeighbourhoodModel(std::vector<std::string> world_names)
    : names_(std::move(world_names)), nbhds_(names_.size()) {
  std::vector<std::string> sorted = names_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw ModelError("duplicate world name");
}

NeighbourhoodModel NeighbourhoodModel::with_worlds(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("w" + std::to_string(i));
  return NeighbourhoodModel(std::move(names));
}

std::optional<World> NeighbourhoodModel::find_world(std::string_view name) const {
  for (World w = 0; w < names_.size(); ++w)
    if (names_[w] == name) return w;
  return std::nullopt;
}

WorldSet NeighbourhoodModel::singleton(World w) const {
  WorldSet s(size());
  s.set(w);
  return s;
}

WorldSet NeighbourhoodModel::set_of(std::initializer_list<World> ws) const {
  WorldSet s(size());
  for (World w : ws) s.set(w);
  return s;
}

void NeighbourhoodModel::add_neighbourhood(World w, const WorldSet& alpha) {
  if (w >= size()) throw ModelError("unknown world");
  if (alpha.size() != size()) throw ModelError("neighbourhood over the wrong world set");
  if (alpha.none()) throw ModelError("empty neighbourhood at world " + names_[w]);
  if (!has_neighbourhood(w, alpha)) nbhds_[w].push_back(alpha);
}

bool NeighbourhoodModel::has_neighbourhood(World w, const WorldSet& alpha) const {
  const auto& ns = nbhds_.at(w);
  return std::find(ns.begin(), ns.end(), alpha) != ns.end();
}

void NeighbourhoodModel::set_valuation(const std::string& atom, const WorldSet& worlds) {
  if (worlds.size() != size()) throw ModelError("valuation over the wrong world set");
  valuation_[atom] = worlds;
}

WorldSet NeighbourhoodModel::valuation(const std::string& atom) const {
  auto it = valuation_.find(atom);
  return it == valuation_.end() ? empty_set() : it->second;
}

bool Evaluator::has_witness(World x, const WorldSet& within, const WorldSet& ant,
                            const WorldSet& imp) const {
  for (const WorldSet& beta : m_.neighbourhoods(x))
    if (beta.is_subset_of(within) && beta.intersects(ant) && beta.is_subset_of(imp)) return true;
  return false;
}

bool Evaluator::conditional_holds(World x, const WorldSet& ant, const WorldSet& imp) const {
  for (const WorldSet& alpha : m_.neighbourhoods(x))
    if (alpha.intersects(ant) && !has_witness(x, alpha, ant, imp)) return false;
  return true;
}

const WorldSet& Evaluator::truth_set(const Formula& f) {
  if (auto it = cache_.find(f.id()); it != cache_.end()) return it->second;
  WorldSet out(m_.size());
  switch (f.op()) {
    case Op::Atom: out = m_.valuation(f.name()); break;
    case Op::Bottom: break;
    case Op::And: out = truth_set(f.left()) & truth_set(f.right()); break;
    case Op::Or: out = truth_set(f.left()) | truth_set(f.right()); break;
    case Op::Implies: out = ~truth_set(f.left()) | truth_set(f.right()); break;
    case Op::Cond: {
      const WorldSet ant = truth_set(f.left());
      const WorldSet imp = ~ant | truth_set(f.right());
      for (World x = 0; x < m_.size(); ++x)
        if (conditional_holds(x, ant, imp)) out.set(x);
      break;
    }
  }
  return cache_.emplace(f.id(), std::move(out)).first->second;
}

bool Evaluator::forces(World w, const Formula& f) {
  if (w >= m_.size()) throw ModelError("unknown world");
  return truth_set(f).test(w);
}

WorldSet truth_set(const NeighbourhoodModel& m, const Formula& f) {
  Evaluator ev(m);
  return ev.truth_set(f);
}

bool forces(const NeighbourhoodModel& m, World w, const Formula& f) {
  Evaluator ev(m);
  return ev.forces(w, f);
}

std::vector<FrameViolation> check_frame(const NeighbourhoodModel& m, const Logic& logic) {
  const Logic l = logic.normalized();
  std::vector<FrameViolation> out;
  auto union_of = [&](World x) {
    WorldSet u = m.empty_set();
    for (const WorldSet& a : m.neighbourhoods(x)) u |= a;
    return u;
  };
  auto sorted_system = [&](World x) {
    std::vector<WorldSet> s = m.neighbourhoods(x);
    std::sort(s.begin(), s.end());
    return s;
  };
  for (World x = 0; x < m.size(); ++x) {
    const auto& ns = m.neighbourhoods(x);
    const std::string& name = m.world_name(x);
    if (l.n && ns.empty()) out.push_back({"Normality", x, "N(" + name + ") is empty"});
    if (l.t && std::none_of(ns.begin(), ns.end(), [&](const WorldSet& a) { return a.test(x); }))
      out.push_back({"TotalReflexivity", x, "no neighbourhood of " + name + " contains it"});
    if (l.w && !std::all_of(ns.begin(), ns.end(), [&](const WorldSet& a) { return a.test(x); }))
      out.push_back({"WeakCentering", x, "some neighbourhood of " + name + " misses it"});
    if (l.c && !m.has_neighbourhood(x, m.singleton(x)))
      out.push_back({"Centering", x, "{" + name + "} is not in N(" + name + ")"});
    if (l.u || l.a) {
      const WorldSet ux = union_of(x);
      const auto sx = l.a ? sorted_system(x) : std::vector<WorldSet>{};
      for (World y = 0; y < m.size(); ++y) {
        if (!ux.test(y)) continue;
        if (l.u && union_of(y) != ux)
          out.push_back({"Uniformity", x,
                         "union of N(" + name + ") differs from union of N(" + m.world_name(y) + ")"});
        if (l.a && sorted_system(y) != sx)
          out.push_back({"Absoluteness", x,
                         "N(" + name + ") differs from N(" + m.world_name(y) + ")"});
      }
    }
  }
  return out;
}

World Realization::world(WorldLabel x) const {
  auto it = worlds.find(x);
  if (it == worlds.end()) throw ModelError("realization misses " + to_string(x));
  return it->second;
}

WorldSet Realization::nbhd(NbhdLabel a, const NeighbourhoodModel& m) const {
  if (a.is_singleton()) return m.singleton(world(a.singleton_of()));
  auto it = nbhds.find(a);
  if (it == nbhds.end()) throw ModelError("realization misses " + to_string(a));
  return it->second;
}

bool satisfies(Evaluator& ev, const NeighbourhoodModel& m, const Realization& r,
               const LabelledFormula& f) {
  switch (f.kind()) {
    case LfKind::InN: return m.has_neighbourhood(r.world(f.world()), r.nbhd(f.nbhd(), m));
    case LfKind::MemberOf: return r.nbhd(f.nbhd(), m).test(r.world(f.world()));
    case LfKind::SubsetOf: return r.nbhd(f.nbhd(), m).is_subset_of(r.nbhd(f.nbhd2(), m));
    case LfKind::At: return ev.forces(r.world(f.world()), f.formula());
    case LfKind::ForcesAll: return r.nbhd(f.nbhd(), m).is_subset_of(ev.truth_set(f.formula()));
    case LfKind::ForcesSome: return r.nbhd(f.nbhd(), m).intersects(ev.truth_set(f.formula()));
    case LfKind::CondAt: {
      const WorldSet ant = ev.truth_set(f.formula());
      const WorldSet imp = ~ant | ev.truth_set(f.formula2());
      return ev.has_witness(r.world(f.world()), r.nbhd(f.nbhd(), m), ant, imp);
    }
  }
  return false;
}

bool satisfies(const NeighbourhoodModel& m, const Realization& r, const LabelledFormula& f) {
  Evaluator ev(m);
  return satisfies(ev, m, r, f);
}

bool satisfies_sequent(const NeighbourhoodModel& m, const Realization& r, const Sequent& s) {
  // Validate totality first so a partial realization is rejected even when
  // an early member would decide the result.
  for (const Label& l : labels_of(s)) {
    if (l.is_world())
      r.world(l.world());
    else
      r.nbhd(l.nbhd(), m);
  }
  Evaluator ev(m);
  for (const auto& f : s.antecedent)
    if (!satisfies(ev, m, r, f)) return true;
  for (const auto& f : s.succedent)
    if (satisfies(ev, m, r, f)) return true;
  return false;
}

}  // namespace pcl
