#include <algorithm>
#include <functional>
#include <map>

#include <boost/container/flat_map.hpp>

#include "pcl/calculus.hpp"

namespace pcl {
namespace {

using LF = LabelledFormula;

bool has(const FormulaSet& s, const LF& f) { return s.find(f) != s.end(); }

// Index over the current sequent of a branch.
struct Context {
  const Branch& branch;
  const Sequent& s;
  const FormulaSet& down_gamma;
  const FormulaSet& down_delta;
  // The antecedent is sorted so that each of these fills in key order.
  boost::container::flat_map<WorldLabel, std::vector<NbhdLabel>> nbhds_of;    // a in N(x), by x
  boost::container::flat_map<NbhdLabel, std::vector<WorldLabel>> members_of;  // x in a, by a
  boost::container::flat_map<NbhdLabel, std::vector<NbhdLabel>> supersets_of; // a <= b, by a
  boost::container::flat_map<NbhdLabel, std::vector<Formula>> forall_left;    // a ||-A A in Gamma
  // Every neighbourhood label of the sequent, singletons included.
  std::vector<NbhdLabel> nbhd_labels;
  std::vector<LF> left_by_kind[7];
  std::vector<LF> right_by_kind[7];

  Context(const Branch& b)
      : branch(b), s(b.current()), down_gamma(b.down_gamma()), down_delta(b.down_delta()) {
    for (const LF& f : s.antecedent) {
      left_by_kind[static_cast<int>(f.kind())].push_back(f);
      note_nbhds(f);
      switch (f.kind()) {
        case LfKind::InN: append(nbhds_of, f.world(), f.nbhd()); break;
        case LfKind::MemberOf: append(members_of, f.nbhd(), f.world()); break;
        case LfKind::SubsetOf: append(supersets_of, f.nbhd(), f.nbhd2()); break;
        case LfKind::ForcesAll: append(forall_left, f.nbhd(), f.formula()); break;
        default: break;
      }
    }
    for (const LF& f : s.succedent) {
      right_by_kind[static_cast<int>(f.kind())].push_back(f);
      note_nbhds(f);
    }
    std::sort(nbhd_labels.begin(), nbhd_labels.end());
    nbhd_labels.erase(std::unique(nbhd_labels.begin(), nbhd_labels.end()), nbhd_labels.end());
  }

  template <typename M, typename K, typename V>
  static void append(M& m, const K& k, const V& v) {
    if (m.empty() || m.rbegin()->first < k) m.emplace_hint(m.end(), k, std::vector<V>{});
    m[k].push_back(v);
  }

  void note_nbhds(const LF& f) {
    if (f.kind() != LfKind::At) nbhd_labels.push_back(f.nbhd());
    if (f.kind() == LfKind::SubsetOf) nbhd_labels.push_back(f.nbhd2());
  }

  const std::vector<LF>& left(LfKind k) const { return left_by_kind[static_cast<int>(k)]; }
  const std::vector<LF>& right(LfKind k) const { return right_by_kind[static_cast<int>(k)]; }

  template <typename M, typename K>
  static const typename M::mapped_type& lookup(const M& m, const K& k) {
    static const typename M::mapped_type empty{};
    auto it = m.find(k);
    return it == m.end() ? empty : it->second;
  }
  const std::vector<NbhdLabel>& nbhds(WorldLabel x) const { return lookup(nbhds_of, x); }
  const std::vector<WorldLabel>& members(NbhdLabel a) const { return lookup(members_of, a); }
  const std::vector<NbhdLabel>& supersets(NbhdLabel a) const { return lookup(supersets_of, a); }

  bool in_gamma(const LF& f) const { return has(s.antecedent, f); }
  bool in_delta(const LF& f) const { return has(s.succedent, f); }
  bool in_down_gamma(const LF& f) const { return has(down_gamma, f); }
  bool in_down_delta(const LF& f) const { return has(down_delta, f); }
};

using Sink = std::function<bool(RuleInstance&&)>;

class Emitter {
 public:
  Emitter(RuleId rule, const Sink& sink) : rule_(rule), sink_(sink) {}

  // Returns false when the sink asks to stop.
  bool emit(std::vector<LF> principal, std::vector<PremiseDelta> deltas,
            std::vector<Label> fresh = {}, std::vector<GenEdge> edges = {}) {
    RuleInstance inst;
    inst.rule = rule_;
    inst.principal = std::move(principal);
    inst.deltas = std::move(deltas);
    inst.fresh = std::move(fresh);
    inst.edges = std::move(edges);
    return sink_(std::move(inst));
  }

 private:
  RuleId rule_;
  const Sink& sink_;
};

PremiseDelta adds(std::vector<LF> left, std::vector<LF> right = {}) {
  PremiseDelta d;
  d.add_left = std::move(left);
  d.add_right = std::move(right);
  return d;
}

PremiseDelta consume_left(const LF& p, std::vector<LF> left, std::vector<LF> right = {}) {
  PremiseDelta d = adds(std::move(left), std::move(right));
  d.drop_left.push_back(p);
  return d;
}

PremiseDelta consume_right(const LF& p, std::vector<LF> left, std::vector<LF> right = {}) {
  PremiseDelta d = adds(std::move(left), std::move(right));
  d.drop_right.push_back(p);
  return d;
}

// At(x): x:P for atomic P, x in a, a in N(x).  The designated occurrence is
// the formula's world field.
bool is_at_formula(const LF& f) {
  if (f.kind() == LfKind::At) return f.formula().is_atom();
  return f.kind() == LfKind::MemberOf || f.kind() == LfKind::InN;
}

LF replace_designated(const LF& f, WorldLabel to) {
  switch (f.kind()) {
    case LfKind::At: return LF::at(to, f.formula());
    case LfKind::MemberOf: return LF::member(to, f.nbhd());
    case LfKind::InN: return LF::in_n(f.nbhd(), to);
    default: return f;
  }
}

bool rule_instances(RuleId rule, const Context& cx, const Sink& sink) {
  Emitter e(rule, sink);
  const Branch& b = cx.branch;
  const WorldLabel new_world = b.fresh_world();
  const NbhdLabel new_nbhd = b.fresh_nbhd();

  switch (rule) {
    case RuleId::Init:
    case RuleId::BotL:
    case RuleId::LCond:
      return true;

    case RuleId::Ref:
      for (NbhdLabel a : cx.nbhd_labels) {
        LF refl = LF::subset(a, a);
        if (!cx.in_gamma(refl) && !e.emit({}, {adds({refl})})) return false;
      }
      return true;

    case RuleId::Tr:
      for (const LF& cb : cx.left(LfKind::SubsetOf))
        for (NbhdLabel a : cx.supersets(cb.nbhd2())) {
          LF ca = LF::subset(cb.nbhd(), a);
          if (!cx.in_gamma(ca) && !e.emit({cb, LF::subset(cb.nbhd2(), a)}, {adds({ca})}))
            return false;
        }
      return true;

    case RuleId::LSubset:
      for (const LF& xa : cx.left(LfKind::MemberOf))
        for (NbhdLabel bl : cx.supersets(xa.nbhd())) {
          LF xb = LF::member(xa.world(), bl);
          if (!cx.in_gamma(xb) && !e.emit({xa, LF::subset(xa.nbhd(), bl)}, {adds({xb})}))
            return false;
        }
      return true;

    case RuleId::MonForall:
      for (const LF& ba : cx.left(LfKind::SubsetOf)) {
        auto it = cx.forall_left.find(ba.nbhd2());
        if (it == cx.forall_left.end()) continue;
        for (const Formula& A : it->second) {
          LF bA = LF::forces_all(ba.nbhd(), A);
          if (!cx.in_gamma(bA) && !e.emit({ba, LF::forces_all(ba.nbhd2(), A)}, {adds({bA})}))
            return false;
        }
      }
      return true;

    case RuleId::LForall:
      for (const LF& xa : cx.left(LfKind::MemberOf)) {
        auto it = cx.forall_left.find(xa.nbhd());
        if (it == cx.forall_left.end()) continue;
        for (const Formula& A : it->second) {
          LF xA = LF::at(xa.world(), A);
          if (!cx.in_down_gamma(xA) &&
              !e.emit({xa, LF::forces_all(xa.nbhd(), A)}, {adds({xA})}))
            return false;
        }
      }
      return true;

    case RuleId::RExists:
      for (const LF& aA : cx.right(LfKind::ForcesSome))
        for (WorldLabel x : cx.members(aA.nbhd())) {
          LF xA = LF::at(x, aA.formula());
          if (!cx.in_down_delta(xA) &&
              !e.emit({LF::member(x, aA.nbhd()), aA}, {adds({}, {xA})}))
            return false;
        }
      return true;

    case RuleId::W:
      for (const LF& ax : cx.left(LfKind::InN)) {
        LF xa = LF::member(ax.world(), ax.nbhd());
        if (!cx.in_gamma(xa) && !e.emit({ax}, {adds({xa})})) return false;
      }
      return true;

    case RuleId::Single:
      for (const LF& ax : cx.left(LfKind::InN)) {
        if (!ax.nbhd().is_singleton() || ax.nbhd().singleton_of() != ax.world()) continue;
        LF xx = LF::member(ax.world(), ax.nbhd());
        if (!cx.in_gamma(xx) && !e.emit({ax}, {adds({xx})})) return false;
      }
      return true;

    case RuleId::C:
      for (const LF& ax : cx.left(LfKind::InN)) {
        const NbhdLabel single = NbhdLabel::singleton(ax.world());
        LF s_in = LF::in_n(single, ax.world());
        LF s_sub = LF::subset(single, ax.nbhd());
        if (cx.in_gamma(s_in) && cx.in_gamma(s_sub)) continue;
        std::vector<GenEdge> edges;
        if (!b.has_label(single)) edges.push_back({ax.world(), single});
        if (!e.emit({ax}, {adds({s_in, s_sub})}, {}, std::move(edges))) return false;
      }
      return true;

    case RuleId::Repl1:
    case RuleId::Repl2: {
      for (const LF& yx : cx.left(LfKind::MemberOf)) {
        if (!yx.nbhd().is_singleton()) continue;
        const WorldLabel x = yx.nbhd().singleton_of();
        const WorldLabel y = yx.world();
        if (x == y) continue;
        const WorldLabel from = rule == RuleId::Repl1 ? x : y;
        const WorldLabel to = rule == RuleId::Repl1 ? y : x;
        for (const LF& f : cx.s.antecedent) {
          if (!is_at_formula(f) || f.world() != from) continue;
          LF g = replace_designated(f, to);
          if (!cx.in_gamma(g) && !e.emit({yx, f}, {adds({g})})) return false;
        }
      }
      return true;
    }

    case RuleId::Abs1:
      for (const LF& ax : cx.left(LfKind::InN))
        for (WorldLabel y : cx.members(ax.nbhd()))
          for (NbhdLabel bl : cx.nbhds(ax.world())) {
            LF by = LF::in_n(bl, y);
            if (!cx.in_gamma(by) &&
                !e.emit({ax, LF::member(y, ax.nbhd()), LF::in_n(bl, ax.world())}, {adds({by})}))
              return false;
          }
      return true;

    case RuleId::Abs2:
      for (const LF& ax : cx.left(LfKind::InN))
        for (WorldLabel y : cx.members(ax.nbhd()))
          for (NbhdLabel bl : cx.nbhds(y)) {
            LF bx = LF::in_n(bl, ax.world());
            if (!cx.in_gamma(bx) &&
                !e.emit({ax, LF::member(y, ax.nbhd()), LF::in_n(bl, y)}, {adds({bx})}))
              return false;
          }
      return true;

    case RuleId::LAnd:
      for (const LF& p : cx.left(LfKind::At)) {
        if (p.formula().op() != Op::And) continue;
        LF l = LF::at(p.world(), p.formula().left());
        LF r = LF::at(p.world(), p.formula().right());
        if (cx.in_down_gamma(l) && cx.in_down_gamma(r)) continue;
        if (!e.emit({p}, {consume_left(p, {l, r})})) return false;
      }
      return true;

    case RuleId::ROr:
      for (const LF& p : cx.right(LfKind::At)) {
        if (p.formula().op() != Op::Or) continue;
        LF l = LF::at(p.world(), p.formula().left());
        LF r = LF::at(p.world(), p.formula().right());
        if (cx.in_down_delta(l) && cx.in_down_delta(r)) continue;
        if (!e.emit({p}, {consume_right(p, {}, {l, r})})) return false;
      }
      return true;

    case RuleId::RImp:
      for (const LF& p : cx.right(LfKind::At)) {
        if (p.formula().op() != Op::Implies) continue;
        LF l = LF::at(p.world(), p.formula().left());
        LF r = LF::at(p.world(), p.formula().right());
        if (cx.in_down_gamma(l) && cx.in_down_delta(r)) continue;
        if (!e.emit({p}, {consume_right(p, {l}, {r})})) return false;
      }
      return true;

    case RuleId::LOr:
      for (const LF& p : cx.left(LfKind::At)) {
        if (p.formula().op() != Op::Or) continue;
        LF l = LF::at(p.world(), p.formula().left());
        LF r = LF::at(p.world(), p.formula().right());
        if (cx.in_down_gamma(l) || cx.in_down_gamma(r)) continue;
        if (!e.emit({p}, {consume_left(p, {l}), consume_left(p, {r})})) return false;
      }
      return true;

    case RuleId::RAnd:
      for (const LF& p : cx.right(LfKind::At)) {
        if (p.formula().op() != Op::And) continue;
        LF l = LF::at(p.world(), p.formula().left());
        LF r = LF::at(p.world(), p.formula().right());
        if (cx.in_down_delta(l) || cx.in_down_delta(r)) continue;
        if (!e.emit({p}, {consume_right(p, {}, {l}), consume_right(p, {}, {r})})) return false;
      }
      return true;

    case RuleId::LImp:
      for (const LF& p : cx.left(LfKind::At)) {
        if (p.formula().op() != Op::Implies) continue;
        LF l = LF::at(p.world(), p.formula().left());
        LF r = LF::at(p.world(), p.formula().right());
        if (cx.in_down_gamma(r) || cx.in_down_delta(l)) continue;
        if (!e.emit({p}, {consume_left(p, {}, {l}), consume_left(p, {r})})) return false;
      }
      return true;

    case RuleId::RBar:
      for (const LF& p : cx.right(LfKind::CondAt)) {
        const Formula A = p.formula();
        const Formula AB = Formula::implies(A, p.formula2());
        for (NbhdLabel c : cx.nbhds(p.world())) {
          LF sub = LF::subset(c, p.nbhd());
          if (!cx.in_gamma(sub)) continue;
          LF cA = LF::forces_some(c, A);
          LF cAB = LF::forces_all(c, AB);
          if (cx.in_delta(cA) || cx.in_down_delta(cAB)) continue;
          if (!e.emit({LF::in_n(c, p.world()), sub, p}, {adds({}, {cA}), adds({}, {cAB})}))
            return false;
        }
      }
      return true;

    case RuleId::RCond:
      for (const LF& p : cx.right(LfKind::At)) {
        if (p.formula().op() != Op::Cond) continue;
        const WorldLabel x = p.world();
        const Formula A = p.formula().left();
        const Formula B = p.formula().right();
        bool blocked = false;
        for (NbhdLabel a : cx.nbhds(x))
          if (cx.in_down_gamma(LF::forces_some(a, A)) && cx.in_delta(LF::cond_at(x, a, A, B))) {
            blocked = true;
            break;
          }
        if (blocked) continue;
        if (!e.emit({p},
                    {consume_right(p, {LF::in_n(new_nbhd, x), LF::forces_some(new_nbhd, A)},
                                   {LF::cond_at(x, new_nbhd, A, B)})},
                    {new_nbhd}, {{x, new_nbhd}}))
          return false;
      }
      return true;

    case RuleId::LCondStar:
      for (const LF& p : cx.left(LfKind::At)) {
        if (p.formula().op() != Op::Cond) continue;
        const WorldLabel x = p.world();
        const Formula A = p.formula().left();
        const Formula B = p.formula().right();
        for (NbhdLabel a : cx.nbhds(x)) {
          LF aA = LF::forces_some(a, A);
          LF bar = LF::cond_at(x, a, A, B);
          if (cx.in_down_delta(aA) || (cx.in_down_gamma(aA) && cx.in_down_gamma(bar))) continue;
          if (!e.emit({LF::in_n(a, x), p}, {adds({}, {aA}), adds({aA, bar})})) return false;
        }
      }
      return true;

    case RuleId::LExists:
      for (const LF& p : cx.left(LfKind::ForcesSome)) {
        const NbhdLabel a = p.nbhd();
        bool blocked = false;
        for (WorldLabel x : cx.members(a))
          if (cx.in_down_gamma(LF::at(x, p.formula()))) {
            blocked = true;
            break;
          }
        if (blocked) continue;
        if (!e.emit({p}, {consume_left(p, {LF::member(new_world, a), LF::at(new_world, p.formula())})},
                    {new_world}, {{a, new_world}}))
          return false;
      }
      return true;

    case RuleId::RForall:
      for (const LF& p : cx.right(LfKind::ForcesAll)) {
        const NbhdLabel a = p.nbhd();
        bool blocked = false;
        for (WorldLabel x : cx.members(a))
          if (cx.in_down_delta(LF::at(x, p.formula()))) {
            blocked = true;
            break;
          }
        if (blocked) continue;
        if (!e.emit({p},
                    {consume_right(p, {LF::member(new_world, a)}, {LF::at(new_world, p.formula())})},
                    {new_world}, {{a, new_world}}))
          return false;
      }
      return true;

    case RuleId::LBar:
      for (const LF& p : cx.left(LfKind::CondAt)) {
        const WorldLabel x = p.world();
        const NbhdLabel a = p.nbhd();
        const Formula A = p.formula();
        const Formula AB = Formula::implies(A, p.formula2());
        bool blocked = false;
        for (NbhdLabel c : cx.nbhds(x))
          if (cx.in_gamma(LF::subset(c, a)) && cx.in_down_gamma(LF::forces_some(c, A)) &&
              cx.in_gamma(LF::forces_all(c, AB))) {
            blocked = true;
            break;
          }
        if (blocked) continue;
        const NbhdLabel c = new_nbhd;
        if (!e.emit({p},
                    {consume_left(p, {LF::in_n(c, x), LF::subset(c, a), LF::forces_some(c, A),
                                      LF::forces_all(c, AB)})},
                    {c}, {{x, c}}))
          return false;
      }
      return true;

    case RuleId::T:
      for (WorldLabel x : b.worlds()) {
        bool blocked = false;
        for (NbhdLabel a : cx.nbhds(x))
          if (cx.in_gamma(LF::member(x, a))) {
            blocked = true;
            break;
          }
        if (blocked) continue;
        if (!e.emit({}, {adds({LF::member(x, new_nbhd), LF::in_n(new_nbhd, x)})}, {new_nbhd},
                    {{x, new_nbhd}}))
          return false;
      }
      return true;

    case RuleId::N:
      for (WorldLabel x : b.worlds()) {
        if (!cx.nbhds(x).empty()) continue;
        if (!e.emit({}, {adds({LF::in_n(new_nbhd, x)})}, {new_nbhd}, {{x, new_nbhd}}))
          return false;
      }
      return true;

    case RuleId::Zero:
      for (const LF& ax : cx.left(LfKind::InN)) {
        const NbhdLabel a = ax.nbhd();
        if (!cx.members(a).empty()) continue;
        // Only for neighbourhoods that some local forcing formula is about.
        bool wanted = cx.forall_left.count(a) > 0;
        for (const LF& f : cx.right(LfKind::ForcesSome))
          if (f.nbhd() == a) wanted = true;
        if (!wanted) continue;
        if (!e.emit({ax}, {adds({LF::member(new_world, a)})}, {new_world}, {{a, new_world}}))
          return false;
      }
      return true;

    case RuleId::Unif1:
      for (const LF& ax : cx.left(LfKind::InN))
        for (WorldLabel y : cx.members(ax.nbhd()))
          for (NbhdLabel bl : cx.nbhds(y))
            for (WorldLabel z : cx.members(bl)) {
              const WorldLabel x = ax.world();
              bool blocked = false;
              for (NbhdLabel c : cx.nbhds(x))
                if (cx.in_gamma(LF::member(z, c))) {
                  blocked = true;
                  break;
                }
              if (blocked) continue;
              if (!e.emit({ax, LF::member(y, ax.nbhd()), LF::in_n(bl, y), LF::member(z, bl)},
                          {adds({LF::member(z, new_nbhd), LF::in_n(new_nbhd, x)})}, {new_nbhd},
                          {{x, new_nbhd}}))
                return false;
            }
      return true;

    case RuleId::Unif2:
      for (const LF& ax : cx.left(LfKind::InN))
        for (WorldLabel y : cx.members(ax.nbhd()))
          for (NbhdLabel bl : cx.nbhds(ax.world()))
            for (WorldLabel z : cx.members(bl)) {
              bool blocked = false;
              for (NbhdLabel c : cx.nbhds(y))
                if (cx.in_gamma(LF::member(z, c))) {
                  blocked = true;
                  break;
                }
              if (blocked) continue;
              if (!e.emit({ax, LF::member(y, ax.nbhd()), LF::in_n(bl, ax.world()),
                           LF::member(z, bl)},
                          {adds({LF::member(z, new_nbhd), LF::in_n(new_nbhd, y)})}, {new_nbhd},
                          {{y, new_nbhd}}))
                return false;
            }
      return true;
  }
  return true;
}

// Strategy order: non-branching static rules, branching static rules, R>,
// L>*, then the dynamic rules.
const std::vector<RuleId>& strategy_order() {
  using R = RuleId;
  static const std::vector<RuleId> order = {
      R::Ref,   R::Tr,    R::LSubset, R::MonForall, R::LForall, R::RExists, R::W,
      R::Single, R::C,    R::Repl1,   R::Repl2,     R::Abs1,    R::Abs2,    R::LAnd,
      R::ROr,   R::RImp,  R::LOr,     R::RAnd,      R::LImp,    R::RBar,    R::RCond,
      R::LCondStar, R::LExists, R::RForall, R::LBar, R::T,      R::N,       R::Zero,
      R::Unif1, R::Unif2,
  };
  return order;
}

void materialize(RuleInstance& inst, const Sequent& conclusion) {
  inst.premises.clear();
  for (const PremiseDelta& d : inst.deltas) inst.premises.push_back(apply_delta(conclusion, d));
}

}  // namespace

std::vector<RuleInstance> applicable_instances(const Branch& branch, const Logic& logic) {
  std::vector<RuleInstance> out;
  if (is_closed(branch.current())) return out;
  const std::set<RuleId> table = rule_table(logic, RuleMode::Search);
  Context cx(branch);
  Sink sink = [&](RuleInstance&& inst) {
    materialize(inst, branch.current());
    out.push_back(std::move(inst));
    return true;
  };
  for (RuleId r : strategy_order())
    if (table.count(r)) rule_instances(r, cx, sink);
  return out;
}

std::optional<RuleInstance> first_applicable(const Branch& branch, const Logic& logic,
                                             bool with_premises) {
  if (is_closed(branch.current())) return std::nullopt;
  const std::set<RuleId> table = rule_table(logic, RuleMode::Search);
  Context cx(branch);
  std::optional<RuleInstance> found;
  Sink sink = [&](RuleInstance&& inst) {
    found = std::move(inst);
    return false;
  };
  for (RuleId r : strategy_order()) {
    if (!table.count(r)) continue;
    rule_instances(r, cx, sink);
    if (found) {
      if (with_premises) materialize(*found, branch.current());
      return found;
    }
  }
  return std::nullopt;
}

}  // namespace pcl
