#include <algorithm>
#include <map>
#include <optional>

#include "pcl/calculus.hpp"

namespace pcl {
namespace {

using LF = LabelledFormula;

bool has(const FormulaSet& s, const LF& f) { return s.find(f) != s.end(); }

class NodeChecker {
 public:
  NodeChecker(const DerivationNode& node, const std::vector<const Sequent*>& premises,
              const std::map<Label, int>& path_labels)
      : node_(node), s_(node.sequent), premises_(premises), path_(path_labels) {}

  std::optional<std::string> run() {
    try {
      check();
    } catch (const std::string& msg) {
      return msg;
    }
    return std::nullopt;
  }

 private:
  [[noreturn]] static void fail(const std::string& msg) { throw msg; }

  const LF& principal(std::size_t i, std::size_t expected) {
    if (node_.principal.size() != expected)
      fail(std::string(rule_name(node_.rule)) + " expects " + std::to_string(expected) +
           " principal formula(s), got " + std::to_string(node_.principal.size()));
    return node_.principal[i];
  }

  const LF& left(std::size_t i, std::size_t n, LfKind k) {
    const LF& f = principal(i, n);
    if (f.kind() != k) fail("principal " + render(f) + " has the wrong shape");
    if (!has(s_.antecedent, f)) fail("principal " + render(f) + " is not in the antecedent");
    return f;
  }

  const LF& right(std::size_t i, std::size_t n, LfKind k) {
    const LF& f = principal(i, n);
    if (f.kind() != k) fail("principal " + render(f) + " has the wrong shape");
    if (!has(s_.succedent, f)) fail("principal " + render(f) + " is not in the succedent");
    return f;
  }

  Formula connective(const LF& f, Op op) {
    if (f.formula().op() != op) fail("principal " + render(f) + " has the wrong main connective");
    return f.formula();
  }

  void same(bool ok, const std::string& what) {
    if (!ok) fail("principal formulas disagree on " + what);
  }

  void no_fresh() {
    if (!node_.fresh.empty()) fail(std::string(rule_name(node_.rule)) + " introduces no label");
  }

  WorldLabel fresh_world() {
    if (node_.fresh.size() != 1 || !node_.fresh[0].is_world())
      fail(std::string(rule_name(node_.rule)) + " needs exactly one fresh world label");
    check_fresh(node_.fresh[0]);
    return node_.fresh[0].world();
  }

  NbhdLabel fresh_nbhd() {
    if (node_.fresh.size() != 1 || node_.fresh[0].is_world() ||
        node_.fresh[0].nbhd().is_singleton())
      fail(std::string(rule_name(node_.rule)) + " needs exactly one fresh neighbourhood label");
    check_fresh(node_.fresh[0]);
    return node_.fresh[0].nbhd();
  }

  void check_fresh(const Label& l) {
    auto it = path_.find(l);
    if (it != path_.end() && it->second > 0)
      fail("freshness violated: " + to_string(l) + " already occurs on the branch");
  }

  static PremiseDelta add(std::vector<LF> l, std::vector<LF> r = {}) {
    PremiseDelta d;
    d.add_left = std::move(l);
    d.add_right = std::move(r);
    return d;
  }

  // Premise i must be the conclusion plus the additions, optionally without
  // the consumed principal.
  void expect(std::vector<PremiseDelta> deltas, const std::optional<LF>& consumed_left = {},
              const std::optional<LF>& consumed_right = {}) {
    for (std::size_t i = 0; i < deltas.size(); ++i) {
      const Sequent& actual = *premises_[i];
      Sequent kept = apply_delta(s_, deltas[i]);
      if (actual == kept) continue;
      PremiseDelta dropped = deltas[i];
      if (consumed_left) dropped.drop_left.push_back(*consumed_left);
      if (consumed_right) dropped.drop_right.push_back(*consumed_right);
      if ((consumed_left || consumed_right) && actual == apply_delta(s_, dropped)) continue;
      fail("premise " + std::to_string(i + 1) + " does not match " +
           std::string(rule_name(node_.rule)) + ": expected " + render(kept) + ", found " +
           render(actual));
    }
  }

  // Formulas the single premise adds, for rules without principal formulas.
  std::vector<LF> added_left() {
    const Sequent& p = *premises_[0];
    if (p.succedent != s_.succedent) fail("premise changes the succedent");
    std::vector<LF> out;
    for (const LF& f : s_.antecedent)
      if (!has(p.antecedent, f)) fail("premise drops " + render(f));
    for (const LF& f : p.antecedent)
      if (!has(s_.antecedent, f)) out.push_back(f);
    return out;
  }

  void check() {
    using R = RuleId;
    const RuleId r = node_.rule;
    switch (r) {
      case R::Init: {
        for (const LF& f : s_.antecedent)
          if (f.kind() == LfKind::At && f.formula().is_atom() && has(s_.succedent, f)) return;
        fail("not an initial sequent");
      }
      case R::BotL: {
        for (const LF& f : s_.antecedent)
          if (f.kind() == LfKind::At && f.formula().op() == Op::Bottom) return;
        fail("no x : false in the antecedent");
      }
      case R::LAnd: {
        no_fresh();
        const LF& p = left(0, 1, LfKind::At);
        Formula f = connective(p, Op::And);
        expect({add({LF::at(p.world(), f.left()), LF::at(p.world(), f.right())})}, p);
        return;
      }
      case R::RAnd: {
        no_fresh();
        const LF& p = right(0, 1, LfKind::At);
        Formula f = connective(p, Op::And);
        expect({add({}, {LF::at(p.world(), f.left())}), add({}, {LF::at(p.world(), f.right())})},
               {}, p);
        return;
      }
      case R::LOr: {
        no_fresh();
        const LF& p = left(0, 1, LfKind::At);
        Formula f = connective(p, Op::Or);
        expect({add({LF::at(p.world(), f.left())}), add({LF::at(p.world(), f.right())})}, p);
        return;
      }
      case R::ROr: {
        no_fresh();
        const LF& p = right(0, 1, LfKind::At);
        Formula f = connective(p, Op::Or);
        expect({add({}, {LF::at(p.world(), f.left()), LF::at(p.world(), f.right())})}, {}, p);
        return;
      }
      case R::LImp: {
        no_fresh();
        const LF& p = left(0, 1, LfKind::At);
        Formula f = connective(p, Op::Implies);
        expect({add({}, {LF::at(p.world(), f.left())}), add({LF::at(p.world(), f.right())})}, p);
        return;
      }
      case R::RImp: {
        no_fresh();
        const LF& p = right(0, 1, LfKind::At);
        Formula f = connective(p, Op::Implies);
        expect({add({LF::at(p.world(), f.left())}, {LF::at(p.world(), f.right())})}, {}, p);
        return;
      }
      case R::LForall: {
        no_fresh();
        const LF& xa = left(0, 2, LfKind::MemberOf);
        const LF& aA = left(1, 2, LfKind::ForcesAll);
        same(xa.nbhd() == aA.nbhd(), "the neighbourhood label");
        expect({add({LF::at(xa.world(), aA.formula())})});
        return;
      }
      case R::RForall: {
        const LF& aA = right(0, 1, LfKind::ForcesAll);
        WorldLabel y = fresh_world();
        expect({add({LF::member(y, aA.nbhd())}, {LF::at(y, aA.formula())})}, {}, aA);
        return;
      }
      case R::LExists: {
        const LF& aA = left(0, 1, LfKind::ForcesSome);
        WorldLabel y = fresh_world();
        expect({add({LF::member(y, aA.nbhd()), LF::at(y, aA.formula())})}, aA);
        return;
      }
      case R::RExists: {
        no_fresh();
        const LF& xa = left(0, 2, LfKind::MemberOf);
        const LF& aA = right(1, 2, LfKind::ForcesSome);
        same(xa.nbhd() == aA.nbhd(), "the neighbourhood label");
        expect({add({}, {LF::at(xa.world(), aA.formula())})});
        return;
      }
      case R::RCond: {
        const LF& p = right(0, 1, LfKind::At);
        Formula f = connective(p, Op::Cond);
        NbhdLabel a = fresh_nbhd();
        expect({add({LF::in_n(a, p.world()), LF::forces_some(a, f.left())},
                    {LF::cond_at(p.world(), a, f.left(), f.right())})},
               {}, p);
        return;
      }
      case R::LCond:
      case R::LCondStar: {
        no_fresh();
        const LF& ax = left(0, 2, LfKind::InN);
        const LF& p = left(1, 2, LfKind::At);
        Formula f = connective(p, Op::Cond);
        same(ax.world() == p.world(), "the world label");
        LF aA = LF::forces_some(ax.nbhd(), f.left());
        LF bar = LF::cond_at(p.world(), ax.nbhd(), f.left(), f.right());
        if (r == R::LCond)
          expect({add({}, {aA}), add({bar})});
        else
          expect({add({}, {aA}), add({aA, bar})});
        return;
      }
      case R::RBar: {
        no_fresh();
        const LF& cx = left(0, 3, LfKind::InN);
        const LF& ca = left(1, 3, LfKind::SubsetOf);
        const LF& p = right(2, 3, LfKind::CondAt);
        same(cx.world() == p.world(), "the world label");
        same(cx.nbhd() == ca.nbhd() && ca.nbhd2() == p.nbhd(), "the neighbourhood labels");
        expect({add({}, {LF::forces_some(cx.nbhd(), p.formula())}),
                add({}, {LF::forces_all(cx.nbhd(), Formula::implies(p.formula(), p.formula2()))})});
        return;
      }
      case R::LBar: {
        const LF& p = left(0, 1, LfKind::CondAt);
        NbhdLabel c = fresh_nbhd();
        expect({add({LF::in_n(c, p.world()), LF::subset(c, p.nbhd()),
                     LF::forces_some(c, p.formula()),
                     LF::forces_all(c, Formula::implies(p.formula(), p.formula2()))})},
               p);
        return;
      }
      case R::Ref: {
        no_fresh();
        if (!node_.principal.empty()) fail("Ref has no principal formula");
        std::vector<LF> added = added_left();
        if (added.size() != 1 || added[0].kind() != LfKind::SubsetOf ||
            added[0].nbhd() != added[0].nbhd2())
          fail("Ref must add exactly one formula a <= a");
        return;
      }
      case R::Tr: {
        no_fresh();
        const LF& cb = left(0, 2, LfKind::SubsetOf);
        const LF& ba = left(1, 2, LfKind::SubsetOf);
        same(cb.nbhd2() == ba.nbhd(), "the middle label");
        expect({add({LF::subset(cb.nbhd(), ba.nbhd2())})});
        return;
      }
      case R::LSubset: {
        no_fresh();
        const LF& xa = left(0, 2, LfKind::MemberOf);
        const LF& ab = left(1, 2, LfKind::SubsetOf);
        same(xa.nbhd() == ab.nbhd(), "the neighbourhood label");
        expect({add({LF::member(xa.world(), ab.nbhd2())})});
        return;
      }
      case R::MonForall: {
        no_fresh();
        const LF& ba = left(0, 2, LfKind::SubsetOf);
        const LF& aA = left(1, 2, LfKind::ForcesAll);
        same(ba.nbhd2() == aA.nbhd(), "the neighbourhood label");
        expect({add({LF::forces_all(ba.nbhd(), aA.formula())})});
        return;
      }
      case R::N: {
        if (!node_.principal.empty()) fail("N has no principal formula");
        NbhdLabel a = fresh_nbhd();
        std::vector<LF> added = added_left();
        if (added.size() != 1 || added[0].kind() != LfKind::InN || added[0].nbhd() != a)
          fail("N must add exactly a in N(x) for the fresh a");
        return;
      }
      case R::T: {
        if (!node_.principal.empty()) fail("T has no principal formula");
        NbhdLabel a = fresh_nbhd();
        std::vector<LF> added = added_left();
        bool ok = added.size() == 2;
        if (ok) {
          const LF& in_n = added[0].kind() == LfKind::InN ? added[0] : added[1];
          ok = in_n.kind() == LfKind::InN && in_n.nbhd() == a &&
               std::find(added.begin(), added.end(), LF::member(in_n.world(), a)) != added.end();
        }
        if (!ok) fail("T must add exactly x in a and a in N(x) for the fresh a");
        return;
      }
      case R::Zero: {
        const LF& ax = left(0, 1, LfKind::InN);
        WorldLabel y = fresh_world();
        expect({add({LF::member(y, ax.nbhd())})});
        return;
      }
      case R::W: {
        no_fresh();
        const LF& ax = left(0, 1, LfKind::InN);
        expect({add({LF::member(ax.world(), ax.nbhd())})});
        return;
      }
      case R::Single: {
        no_fresh();
        const LF& ax = left(0, 1, LfKind::InN);
        same(ax.nbhd() == NbhdLabel::singleton(ax.world()), "the singleton");
        expect({add({LF::member(ax.world(), ax.nbhd())})});
        return;
      }
      case R::C: {
        no_fresh();
        const LF& ax = left(0, 1, LfKind::InN);
        const NbhdLabel single = NbhdLabel::singleton(ax.world());
        expect({add({LF::in_n(single, ax.world()), LF::subset(single, ax.nbhd())})});
        return;
      }
      case R::Repl1:
      case R::Repl2: {
        no_fresh();
        const LF& yx = left(0, 2, LfKind::MemberOf);
        const LF& f = principal(1, 2);
        if (!has(s_.antecedent, f)) fail("principal " + render(f) + " is not in the antecedent");
        if (!yx.nbhd().is_singleton()) fail("Repl needs y in {x}");
        const WorldLabel x = yx.nbhd().singleton_of();
        const WorldLabel y = yx.world();
        const WorldLabel from = r == R::Repl1 ? x : y;
        const WorldLabel to = r == R::Repl1 ? y : x;
        LF g = f;
        if (f.kind() == LfKind::At && f.formula().is_atom() && f.world() == from)
          g = LF::at(to, f.formula());
        else if (f.kind() == LfKind::MemberOf && f.world() == from)
          g = LF::member(to, f.nbhd());
        else if (f.kind() == LfKind::InN && f.world() == from)
          g = LF::in_n(f.nbhd(), to);
        else
          fail(render(f) + " is not an atomic formula about " + to_string(from));
        expect({add({g})});
        return;
      }
      case R::Unif1:
      case R::Unif2: {
        const LF& ax = left(0, 4, LfKind::InN);
        const LF& ya = left(1, 4, LfKind::MemberOf);
        const LF& bw = left(2, 4, LfKind::InN);
        const LF& zb = left(3, 4, LfKind::MemberOf);
        same(ya.nbhd() == ax.nbhd() && zb.nbhd() == bw.nbhd(), "the neighbourhood labels");
        const WorldLabel x = ax.world();
        const WorldLabel y = ya.world();
        if (r == R::Unif1)
          same(bw.world() == y, "the world owning b");
        else
          same(bw.world() == x, "the world owning b");
        NbhdLabel c = fresh_nbhd();
        expect({add({LF::member(zb.world(), c), LF::in_n(c, r == R::Unif1 ? x : y)})});
        return;
      }
      case R::Abs1:
      case R::Abs2: {
        no_fresh();
        const LF& ax = left(0, 3, LfKind::InN);
        const LF& ya = left(1, 3, LfKind::MemberOf);
        const LF& bw = left(2, 3, LfKind::InN);
        same(ya.nbhd() == ax.nbhd(), "the neighbourhood label");
        if (r == R::Abs1) {
          same(bw.world() == ax.world(), "the world owning b");
          expect({add({LF::in_n(bw.nbhd(), ya.world())})});
        } else {
          same(bw.world() == ya.world(), "the world owning b");
          expect({add({LF::in_n(bw.nbhd(), ax.world())})});
        }
        return;
      }
    }
    fail("unknown rule");
  }

  const DerivationNode& node_;
  const Sequent& s_;
  const std::vector<const Sequent*>& premises_;
  const std::map<Label, int>& path_;
};

}  // namespace

CheckResult check_derivation(const Derivation& d, const Logic& logic) {
  CheckResult result;
  auto error = [&](std::size_t node, std::string msg) {
    result.error = RuleError{node, std::move(msg)};
    return result;
  };
  if (d.nodes.empty()) return error(0, "empty derivation");

  std::vector<int> parents(d.nodes.size(), 0);
  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    for (std::size_t c : d.nodes[i].children) {
      if (c >= d.nodes.size() || c == 0) return error(i, "child index out of range");
      if (++parents[c] > 1) return error(c, "node has more than one parent");
    }

  std::set<RuleId> table = rule_table(logic, RuleMode::Calculus);
  table.insert(RuleId::LCondStar);
  table.insert(RuleId::MonForall);

  std::map<Label, int> path;
  auto adjust = [&](const Sequent& s, int delta) {
    for (const Label& l : labels_of(s)) path[l] += delta;
  };

  std::vector<bool> visited(d.nodes.size(), false);
  // (node, entering?)
  std::vector<std::pair<std::size_t, bool>> stack{{0, true}};
  while (!stack.empty()) {
    auto [i, entering] = stack.back();
    stack.pop_back();
    const DerivationNode& node = d.nodes[i];
    if (!entering) {
      adjust(node.sequent, -1);
      continue;
    }
    visited[i] = true;
    for (const LF& f : node.sequent.succedent)
      if (f.is_relational()) return error(i, "relational atom in succedent: " + render(f));
    if (!table.count(node.rule))
      return error(i, std::string(rule_name(node.rule)) + " is not a rule of " + logic.name());
    if (node.children.size() != premise_count(node.rule))
      return error(i, std::string(rule_name(node.rule)) + " needs " +
                          std::to_string(premise_count(node.rule)) + " premise(s), node has " +
                          std::to_string(node.children.size()));
    adjust(node.sequent, +1);
    std::vector<const Sequent*> premises;
    for (std::size_t c : node.children) premises.push_back(&d.nodes[c].sequent);
    NodeChecker checker(node, premises, path);
    if (auto msg = checker.run()) return error(i, *msg);
    stack.emplace_back(i, false);
    for (auto it = node.children.rbegin(); it != node.children.rend(); ++it)
      stack.emplace_back(*it, true);
  }
  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    if (!visited[i]) return error(i, "node is not reachable from the root");
  return result;
}

}  // namespace pcl
