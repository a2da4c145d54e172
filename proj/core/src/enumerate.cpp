// Bounded countermodel search.
//
// A formula's truth in a model depends on each world's neighbourhood system
// only through finitely many bits: for every conditional A > B of the
// formula, whether condition (4) holds there given [[A]] and [[A -> B]].
// Systems are therefore grouped level by level (by conditional degree) into
// classes that agree on those bits, and only one choice per class is
// explored.  This is exhaustive up to isomorphism: valuations are generated
// with per-world vectors in non-decreasing order, the systems range over
// everything the frame conditions allow.

#include <algorithm>
#include <map>

#include "pcl/semantics.hpp"

namespace pcl {

namespace {

using Mask = std::uint32_t;

constexpr std::size_t kMaxWorlds = 4;

bool subset(Mask a, Mask b) { return (a & ~b) == 0; }

// Condition (4) at a world whose system is `sys` (bit s set when subset s is a
// neighbourhood), with ant = [[A]] and imp = [[A -> B]].
bool cond_holds(Mask sys, Mask ant, Mask imp) {
  for (Mask s = sys; s != 0; s &= s - 1) {
    const Mask alpha = static_cast<Mask>(__builtin_ctz(s));
    if ((alpha & ant) == 0) continue;
    bool witness = false;
    for (Mask t = sys; t != 0 && !witness; t &= t - 1) {
      const Mask beta = static_cast<Mask>(__builtin_ctz(t));
      witness = subset(beta, alpha) && (beta & ant) != 0 && subset(beta, imp);
    }
    if (!witness) return false;
  }
  return true;
}

Mask union_of(Mask sys) {
  Mask u = 0;
  for (Mask s = sys; s != 0; s &= s - 1) u |= static_cast<Mask>(__builtin_ctz(s));
  return u;
}

struct Level {
  std::vector<std::size_t> conds;   // indices of the degree-k conditionals
  std::vector<std::size_t> others;  // other degree-k formulas, children first
};

class Search {
 public:
  Search(const Formula& f, const Logic& logic, std::size_t n)
      : f_(f), logic_(logic.normalized()), n_(n), full_((Mask{1} << n) - 1) {
    subs_ = subformulas(f);
    for (std::size_t i = 0; i < subs_.size(); ++i) index_[subs_[i].id()] = i;
    atoms_ = atoms_of(f);
    const std::size_t depth = std::max<std::size_t>(1, conditional_degree(f));
    levels_.resize(depth + 1);
    for (std::size_t i = 0; i < subs_.size(); ++i) {
      const Formula& g = subs_[i];
      const std::size_t d = conditional_degree(g);
      if (g.op() == Op::Cond)
        levels_[d].conds.push_back(i);
      else
        levels_[d].others.push_back(i);
    }
    truth_.assign(subs_.size(), 0);
    build_systems();
  }

  std::optional<Countermodel> run() {
    if (systems_.empty()) return std::nullopt;
    for (std::size_t w = 0; w < n_; ++w)
      if (systems_[w].empty()) return std::nullopt;
    std::vector<Mask> val(n_, 0);
    if (enumerate_valuations(val, 0, 0)) return found_;
    return std::nullopt;
  }

 private:
  void build_systems() {
    // Bit s of a system is set when subset s is a neighbourhood; bit 0 (the
    // empty set) never is.
    systems_.assign(n_, {});
    const std::uint64_t limit = std::uint64_t{1} << (full_ + 1);
    for (std::uint64_t code = 0; code < limit; code += 2) {
      const Mask sys = static_cast<Mask>(code);
      for (std::size_t w = 0; w < n_; ++w) {
        const Mask me = Mask{1} << w;
        bool ok = true;
        if (logic_.n && sys == 0) ok = false;
        if (ok && logic_.t && (union_of(sys) & me) == 0) ok = false;
        if (ok && logic_.w)
          for (Mask s = sys; s != 0 && ok; s &= s - 1)
            ok = (static_cast<Mask>(__builtin_ctz(s)) & me) != 0;
        if (ok && logic_.c) ok = (sys >> me) & 1;
        if (ok) systems_[w].push_back(sys);
      }
    }
  }

  bool enumerate_valuations(std::vector<Mask>& val, std::size_t w, Mask lo) {
    if (w == n_) return try_valuation(val);
    const Mask top = Mask{1} << atoms_.size();
    for (Mask v = lo; v < top; ++v) {
      val[w] = v;
      if (enumerate_valuations(val, w + 1, v)) return true;
    }
    return false;
  }

  Mask eval_plain(std::size_t i) const {
    const Formula& g = subs_[i];
    auto t = [&](const Formula& h) { return truth_[index_.at(h.id())]; };
    switch (g.op()) {
      case Op::Bottom: return 0;
      case Op::And: return t(g.left()) & t(g.right());
      case Op::Or: return t(g.left()) | t(g.right());
      case Op::Implies: return (~t(g.left()) | t(g.right())) & full_;
      default: return truth_[i];
    }
  }

  bool try_valuation(const std::vector<Mask>& val) {
    for (std::size_t i : levels_[0].others) {
      const Formula& g = subs_[i];
      if (g.is_atom()) {
        const auto pos = std::find(atoms_.begin(), atoms_.end(), g.name()) - atoms_.begin();
        Mask m = 0;
        for (std::size_t w = 0; w < n_; ++w)
          if ((val[w] >> pos) & 1) m |= Mask{1} << w;
        truth_[i] = m;
      } else {
        truth_[i] = eval_plain(i);
      }
    }
    std::vector<std::vector<Mask>> cand(systems_);
    valuation_ = val;
    return refine(1, cand);
  }

  struct ClassSet {
    std::vector<std::vector<Mask>> members;
    std::vector<std::vector<bool>> bits;
    std::vector<Mask> unions;
  };

  bool refine(std::size_t k, const std::vector<std::vector<Mask>>& cand) {
    if (k >= levels_.size()) {
      if ((truth_[index_.at(f_.id())] & full_) == full_) return false;
      build_found(cand);
      return true;
    }
    const Level& lv = levels_[k];
    std::vector<std::pair<Mask, Mask>> args;
    for (std::size_t i : lv.conds) {
      const Formula& g = subs_[i];
      const Mask ant = truth_[index_.at(g.left().id())];
      const Mask imp = (~ant | truth_[index_.at(g.right().id())]) & full_;
      args.emplace_back(ant, imp);
    }
    const bool key_union = k == 1 && logic_.u;
    const bool key_system = k == 1 && logic_.a;
    std::vector<ClassSet> classes(n_);
    for (std::size_t w = 0; w < n_; ++w) {
      std::map<std::vector<std::uint32_t>, std::size_t> slot;
      for (Mask sys : cand[w]) {
        std::vector<std::uint32_t> key;
        key.reserve(args.size() + 1);
        if (key_system) key.push_back(sys);
        else if (key_union) key.push_back(union_of(sys));
        for (const auto& [ant, imp] : args) key.push_back(cond_holds(sys, ant, imp));
        auto [it, fresh] = slot.emplace(std::move(key), classes[w].members.size());
        if (fresh) {
          classes[w].members.emplace_back();
          std::vector<bool> b;
          for (const auto& [ant, imp] : args) b.push_back(cond_holds(sys, ant, imp));
          classes[w].bits.push_back(std::move(b));
          classes[w].unions.push_back(key_system ? sys : union_of(sys));
        }
        classes[w].members[it->second].push_back(sys);
      }
    }
    std::vector<std::size_t> choice(n_, 0);
    return product(k, classes, choice, 0);
  }

  // Cross-world constraints checked when world w gets its class.
  bool consistent(std::size_t k, const std::vector<ClassSet>& classes,
                  const std::vector<std::size_t>& choice, std::size_t w) const {
    if (k != 1 || (!logic_.u && !logic_.a)) return true;
    // For A the stored "union" slot holds the whole system.
    auto uni = [&](std::size_t v) {
      const Mask s = classes[v].unions[choice[v]];
      return logic_.a ? union_of(s) : s;
    };
    auto same = [&](std::size_t x, std::size_t y) {
      return classes[x].unions[choice[x]] == classes[y].unions[choice[y]];
    };
    for (std::size_t v = 0; v <= w; ++v) {
      if ((uni(w) >> v) & 1 && !same(w, v)) return false;
      if ((uni(v) >> w) & 1 && !same(v, w)) return false;
    }
    return true;
  }

  bool product(std::size_t k, const std::vector<ClassSet>& classes, std::vector<std::size_t>& choice,
               std::size_t w) {
    if (w == n_) {
      const Level& lv = levels_[k];
      const std::vector<Mask> saved = truth_;
      for (std::size_t j = 0; j < lv.conds.size(); ++j) {
        Mask m = 0;
        for (std::size_t v = 0; v < n_; ++v)
          if (classes[v].bits[choice[v]][j]) m |= Mask{1} << v;
        truth_[lv.conds[j]] = m;
      }
      for (std::size_t i : lv.others) truth_[i] = eval_plain(i);
      std::vector<std::vector<Mask>> next(n_);
      for (std::size_t v = 0; v < n_; ++v) next[v] = classes[v].members[choice[v]];
      if (refine(k + 1, next)) return true;
      truth_ = saved;
      return false;
    }
    for (std::size_t c = 0; c < classes[w].members.size(); ++c) {
      choice[w] = c;
      if (consistent(k, classes, choice, w) && product(k, classes, choice, w + 1)) return true;
    }
    return false;
  }

  void build_found(const std::vector<std::vector<Mask>>& cand) {
    NeighbourhoodModel m = NeighbourhoodModel::with_worlds(n_);
    for (std::size_t w = 0; w < n_; ++w) {
      const Mask sys = cand[w].front();
      for (Mask s = sys; s != 0; s &= s - 1) {
        const Mask alpha = static_cast<Mask>(__builtin_ctz(s));
        WorldSet set = m.empty_set();
        for (std::size_t v = 0; v < n_; ++v)
          if ((alpha >> v) & 1) set.set(v);
        m.add_neighbourhood(w, set);
      }
    }
    for (std::size_t a = 0; a < atoms_.size(); ++a) {
      WorldSet set = m.empty_set();
      for (std::size_t w = 0; w < n_; ++w)
        if ((valuation_[w] >> a) & 1) set.set(w);
      m.set_valuation(atoms_[a], set);
    }
    const Mask t = truth_[index_.at(f_.id())];
    World root = 0;
    while ((t >> root) & 1) ++root;
    found_ = Countermodel{std::move(m), root};
  }

  Formula f_;
  Logic logic_;
  std::size_t n_;
  Mask full_;
  std::vector<Formula> subs_;
  std::unordered_map<const void*, std::size_t> index_;
  std::vector<std::string> atoms_;
  std::vector<Level> levels_;
  std::vector<Mask> truth_;
  std::vector<std::vector<Mask>> systems_;
  std::vector<Mask> valuation_;
  std::optional<Countermodel> found_;
};

}  // namespace

std::optional<Countermodel> enumerate_countermodel(const Formula& f, const Logic& logic,
                                                   std::size_t max_worlds) {
  if (max_worlds > kMaxWorlds)
    throw std::invalid_argument("enumeration supports at most " + std::to_string(kMaxWorlds) +
                                " worlds");
  for (std::size_t n = 1; n <= max_worlds; ++n) {
    Search s(f, logic, n);
    if (auto cm = s.run()) return cm;
  }
  return std::nullopt;
}

}  // namespace pcl
