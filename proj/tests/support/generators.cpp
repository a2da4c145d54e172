#include "generators.hpp"

#include <algorithm>

namespace pcl::testing {

namespace {

std::size_t pick(Rng& rng, std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

WorldSet random_subset(Rng& rng, std::size_t n, const WorldSet& within) {
  WorldSet s(n);
  for (std::size_t i = 0; i < n; ++i)
    if (within.test(i) && coin(rng)) s.set(i);
  if (s.none()) {
    std::vector<std::size_t> members;
    for (std::size_t i = 0; i < n; ++i)
      if (within.test(i)) members.push_back(i);
    s.set(members[pick(rng, members.size())]);
  }
  return s;
}

}  // namespace

Formula random_formula(Rng& rng, std::size_t size, const std::vector<std::string>& atoms) {
  if (size <= 2) {
    if (coin(rng, 0.1)) return Formula::bottom();
    return Formula::atom(atoms[pick(rng, atoms.size())]);
  }
  const std::size_t left = 1 + pick(rng, size - 2);
  const Formula a = random_formula(rng, left, atoms);
  const Formula b = random_formula(rng, size - 1 - left, atoms);
  switch (pick(rng, 4)) {
    case 0: return Formula::conj(a, b);
    case 1: return Formula::disj(a, b);
    case 2: return Formula::implies(a, b);
    default: return Formula::cond(a, b);
  }
}

NeighbourhoodModel random_model(Rng& rng, std::size_t n, const Logic& logic,
                                const std::vector<std::string>& atoms) {
  const Logic l = logic.normalized();
  NeighbourhoodModel m = NeighbourhoodModel::with_worlds(n);
  WorldSet all(n);
  all.set();

  // Clusters: U and A constrain worlds inside one neighbourhood union.
  std::vector<std::size_t> cluster(n);
  for (std::size_t w = 0; w < n; ++w) cluster[w] = (l.u || l.a) ? pick(rng, n) : 0;
  // A shared system under C holds {w} and keeps w in every set, so each
  // world sits alone.
  if (l.a && l.c)
    for (std::size_t w = 0; w < n; ++w) cluster[w] = w;
  auto cluster_set = [&](std::size_t c) {
    WorldSet s(n);
    for (std::size_t w = 0; w < n; ++w)
      if (cluster[w] == c) s.set(w);
    return s;
  };

  if (l.a) {
    // One system per cluster, shared by all its members.
    std::vector<bool> done(n, false);
    for (std::size_t w = 0; w < n; ++w) {
      const std::size_t c = cluster[w];
      if (done[c]) continue;
      done[c] = true;
      const WorldSet home = cluster_set(c);
      std::vector<WorldSet> system;
      const std::size_t k = l.n || coin(rng, 0.8) ? 1 + pick(rng, 3) : 0;
      if (l.w) {
        // Every member lies in every set, so the only set is the cluster.
        if (k > 0) system.push_back(home);
      } else {
        for (std::size_t i = 0; i < k; ++i) system.push_back(random_subset(rng, n, home));
        if (l.t) system.push_back(home);
      }
      for (std::size_t v = 0; v < n; ++v)
        if (cluster[v] == c)
          for (const auto& s : system) m.add_neighbourhood(v, s);
    }
  } else {
    for (std::size_t w = 0; w < n; ++w) {
      const WorldSet home = l.u ? cluster_set(cluster[w]) : all;
      // Under U a world with no neighbourhoods would break the equal-union
      // condition for anyone pointing at it.
      const std::size_t k = l.u ? 1 + pick(rng, 3) : pick(rng, 4);
      for (std::size_t i = 0; i < k; ++i) {
        WorldSet s = random_subset(rng, n, home);
        if (l.w) s.set(w);
        m.add_neighbourhood(w, s);
      }
      if (l.c) m.add_neighbourhood(w, m.singleton(w));
      if (l.t && std::none_of(m.neighbourhoods(w).begin(), m.neighbourhoods(w).end(),
                              [&](const WorldSet& s) { return s.test(w); })) {
        WorldSet s = random_subset(rng, n, home);
        s.set(w);
        m.add_neighbourhood(w, s);
      }
      if (l.n && m.neighbourhoods(w).empty()) m.add_neighbourhood(w, random_subset(rng, n, home));
      if (l.u) {
        // The union must be the whole cluster.
        WorldSet u(n);
        for (const auto& s : m.neighbourhoods(w)) u |= s;
        if (!m.neighbourhoods(w).empty() && u != home) {
          WorldSet s = home - u;
          if (l.w) s.set(w);
          m.add_neighbourhood(w, s);
        }
      }
    }
  }
  for (const auto& p : atoms) {
    WorldSet s(n);
    for (std::size_t w = 0; w < n; ++w)
      if (coin(rng)) s.set(w);
    m.set_valuation(p, s);
  }
  return m;
}

Sequent random_sequent(Rng& rng, std::size_t worlds, std::size_t nbhds,
                       const std::vector<std::string>& atoms) {
  auto x = [&] { return WorldLabel{static_cast<std::uint32_t>(pick(rng, worlds))}; };
  auto a = [&] {
    if (coin(rng, 0.15)) return NbhdLabel::singleton(x());
    return NbhdLabel::plain(static_cast<std::uint32_t>(pick(rng, nbhds)));
  };
  auto f = [&] { return random_formula(rng, 1 + pick(rng, 6), atoms); };
  auto any = [&]() -> LabelledFormula {
    switch (pick(rng, 4)) {
      case 0: return LabelledFormula::at(x(), f());
      case 1: return LabelledFormula::forces_all(a(), f());
      case 2: return LabelledFormula::forces_some(a(), f());
      default: return LabelledFormula::cond_at(x(), a(), f(), f());
    }
  };
  Sequent s;
  const std::size_t relational = 2 + pick(rng, 6);
  for (std::size_t i = 0; i < relational; ++i) {
    switch (pick(rng, 3)) {
      case 0: s.antecedent.insert(LabelledFormula::in_n(a(), x())); break;
      case 1: s.antecedent.insert(LabelledFormula::member(x(), a())); break;
      default: s.antecedent.insert(LabelledFormula::subset(a(), a())); break;
    }
  }
  const std::size_t left = pick(rng, 4);
  const std::size_t right = pick(rng, 4);
  for (std::size_t i = 0; i < left; ++i) s.antecedent.insert(any());
  for (std::size_t i = 0; i < right; ++i) s.succedent.insert(any());
  return s;
}

Realization random_realization(Rng& rng, const NeighbourhoodModel& m, const Sequent& s) {
  Realization r;
  const std::size_t n = m.size();
  for (const Label& l : labels_of(s))
    if (l.is_world()) r.worlds[l.world()] = pick(rng, n);
  WorldSet all(n);
  all.set();
  for (const Label& l : labels_of(s)) {
    if (l.is_world() || l.nbhd().is_singleton()) continue;
    const NbhdLabel a = l.nbhd();
    std::optional<WorldSet> chosen;
    for (const auto& f : s.antecedent)
      if (f.kind() == LfKind::InN && f.nbhd() == a && coin(rng, 0.75)) {
        const auto& sys = m.neighbourhoods(r.worlds.at(f.world()));
        if (!sys.empty()) chosen = sys[pick(rng, sys.size())];
        break;
      }
    if (!chosen) chosen = random_subset(rng, n, all);
    for (const auto& f : s.antecedent)
      if (f.kind() == LfKind::MemberOf && f.nbhd() == a && coin(rng)) chosen->set(r.worlds.at(f.world()));
    r.nbhds[a] = *chosen;
  }
  return r;
}

std::vector<WorldSet> nonempty_subsets(const NeighbourhoodModel& m) {
  std::vector<WorldSet> out;
  const std::size_t n = m.size();
  for (std::size_t code = 1; code < (std::size_t{1} << n); ++code) {
    WorldSet s(n);
    for (std::size_t i = 0; i < n; ++i)
      if ((code >> i) & 1) s.set(i);
    out.push_back(s);
  }
  return out;
}

}  // namespace pcl::testing
