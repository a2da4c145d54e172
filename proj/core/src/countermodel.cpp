#include "pcl/countermodel.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "pcl/search.hpp"

namespace pcl {

namespace {

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
};

}  // namespace

ExtractedModel candidate_model(const Branch& leaf, const Logic& logic) {
  const Logic l = logic.normalized();
  const FormulaSet& gamma = leaf.current().antecedent;

  // World labels of the history, in index order.
  std::set<WorldLabel> world_labels;
  std::set<NbhdLabel> nbhd_labels;
  std::vector<Label> scratch;
  for (const FormulaSet* side : {&leaf.down_gamma(), &leaf.down_delta()})
    for (const auto& f : *side) {
      scratch.clear();
      collect_labels(f, scratch);
      for (const Label& lb : scratch) {
        if (lb.is_world())
          world_labels.insert(lb.world());
        else if (!lb.nbhd().is_singleton())
          nbhd_labels.insert(lb.nbhd());
      }
    }
  if (auto r = leaf.gen_root(); r && r->is_world()) world_labels.insert(r->world());
  if (world_labels.empty()) throw ModelError("branch has no world labels");

  std::vector<WorldLabel> labels(world_labels.begin(), world_labels.end());
  std::map<WorldLabel, std::size_t> label_pos;
  for (std::size_t i = 0; i < labels.size(); ++i) label_pos[labels[i]] = i;

  // Under centering, worlds are the classes of y in {x}.
  UnionFind uf(labels.size());
  if (l.c)
    for (const auto& f : gamma)
      if (f.kind() == LfKind::MemberOf && f.nbhd().is_singleton()) {
        auto a = label_pos.find(f.world());
        auto b = label_pos.find(f.nbhd().singleton_of());
        if (a != label_pos.end() && b != label_pos.end()) uf.unite(a->second, b->second);
      }
  std::vector<std::size_t> class_of(labels.size());
  std::vector<std::string> names;
  std::map<std::size_t, std::size_t> rep_to_world;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::size_t rep = uf.find(i);
    auto [it, fresh] = rep_to_world.emplace(rep, names.size());
    if (fresh) names.push_back(to_string(labels[rep]));
    class_of[i] = it->second;
  }
  const std::size_t base_worlds = names.size();

  // Plain labels whose alpha would be empty need a stand-in (normality
  // clause); decide how many fresh worlds that takes before sizing sets.
  std::map<NbhdLabel, std::vector<WorldLabel>> members;
  std::map<WorldLabel, std::vector<NbhdLabel>> nbhds_of;
  for (const auto& f : gamma) {
    if (f.kind() == LfKind::MemberOf && !f.nbhd().is_singleton())
      members[f.nbhd()].push_back(f.world());
    else if (f.kind() == LfKind::InN)
      nbhds_of[f.world()].push_back(f.nbhd());
  }
  std::vector<NbhdLabel> empty_nbhds;
  for (NbhdLabel a : nbhd_labels)
    if (members[a].empty()) empty_nbhds.push_back(a);

  // Owner world of each empty label (its a in N(x) atom), and whether that
  // world has some nonempty neighbourhood to reuse.
  std::map<NbhdLabel, std::optional<NbhdLabel>> reuse;
  std::size_t fresh_count = 0;
  for (NbhdLabel a : empty_nbhds) {
    std::optional<NbhdLabel> donor;
    for (const auto& [x, ns] : nbhds_of) {
      if (std::find(ns.begin(), ns.end(), a) == ns.end()) continue;
      for (NbhdLabel b : ns)
        if (b.is_singleton() || !members[b].empty()) {
          donor = b;
          break;
        }
      break;
    }
    reuse[a] = donor;
    if (!donor) ++fresh_count;
  }
  for (std::size_t i = 0; i < fresh_count; ++i) names.push_back("u" + std::to_string(i));

  ExtractedModel out;
  out.model = NeighbourhoodModel(names);
  NeighbourhoodModel& m = out.model;
  Realization& r = out.realization;
  for (std::size_t i = 0; i < labels.size(); ++i) r.worlds[labels[i]] = class_of[i];

  for (NbhdLabel a : nbhd_labels) {
    WorldSet s = m.empty_set();
    for (WorldLabel y : members[a])
      if (auto it = label_pos.find(y); it != label_pos.end()) s.set(class_of[it->second]);
    r.nbhds[a] = s;
  }
  std::size_t next_fresh = base_worlds;
  for (NbhdLabel a : empty_nbhds) {
    if (const auto& donor = reuse[a]) {
      r.nbhds[a] = r.nbhd(*donor, m);
    } else {
      const World u = next_fresh++;
      r.nbhds[a] = m.singleton(u);
      m.add_neighbourhood(u, m.singleton(u));
    }
  }

  for (const auto& f : leaf.down_gamma()) {
    if (f.kind() == LfKind::InN)
      m.add_neighbourhood(r.world(f.world()), r.nbhd(f.nbhd(), m));
  }

  std::map<std::string, WorldSet> val;
  for (const auto& f : leaf.down_gamma())
    if (f.kind() == LfKind::At && f.formula().is_atom()) {
      auto [it, _] = val.try_emplace(f.formula().name(), m.empty_set());
      it->second.set(r.world(f.world()));
    }
  for (const FormulaSet* side : {&leaf.down_gamma(), &leaf.down_delta()})
    for (const auto& f : *side)
      if (f.kind() == LfKind::At || f.kind() == LfKind::ForcesAll ||
          f.kind() == LfKind::ForcesSome || f.kind() == LfKind::CondAt) {
        for (const std::string& p : atoms_of(f.formula())) val.try_emplace(p, m.empty_set());
        if (f.kind() == LfKind::CondAt)
          for (const std::string& p : atoms_of(f.formula2())) val.try_emplace(p, m.empty_set());
      }
  for (auto& [p, s] : val) m.set_valuation(p, s);

  const Label root = leaf.gen_root().value_or(Label(labels.front()));
  out.root = r.world(root.is_world() ? root.world() : labels.front());
  return out;
}

ExtractedModel extract_model(const Branch& leaf, const Logic& logic) {
  if (logic.normalized().a) throw ModelError("no countermodel extraction for absoluteness logics");
  const SaturationReport sat = is_saturated(leaf, logic);
  if (!sat.saturated)
    throw ModelError(sat.closed ? "branch is closed" : "branch is not saturated: " + sat.detail);
  return candidate_model(leaf, logic);
}

std::vector<InvariantViolation> model_invariant_report(const NeighbourhoodModel& m,
                                                       const Branch& leaf,
                                                       const Realization& realization) {
  std::vector<InvariantViolation> out;
  Evaluator ev(m);
  auto check = [&](const LabelledFormula& f, bool antecedent) {
    try {
      const bool holds = satisfies(ev, m, realization, f);
      if (holds != antecedent) {
        std::string msg = antecedent ? "not satisfied: " : "satisfied: ";
        if (antecedent && f.kind() == LfKind::SubsetOf) msg = "inclusion fails: ";
        out.push_back({f, antecedent, msg + render(f)});
      }
    } catch (const ModelError& e) {
      out.push_back({f, antecedent, e.what()});
    }
  };
  for (const auto& f : leaf.down_gamma()) check(f, true);
  for (const auto& f : leaf.down_delta()) check(f, false);
  return out;
}

}  // namespace pcl
