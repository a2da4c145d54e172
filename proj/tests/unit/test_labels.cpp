#include <doctest.h>

#include "generators.hpp"
#include "pcl/calculus.hpp"
#include "pcl/labels.hpp"

using namespace pcl;
using LF = LabelledFormula;

namespace {
const WorldLabel x0{0}, x1{1}, x2{2};
const NbhdLabel a0 = NbhdLabel::plain(0), a1 = NbhdLabel::plain(1);
const Formula p = Formula::atom("p"), q = Formula::atom("q");
using W = std::pair<std::size_t, std::size_t>;
}  // namespace

TEST_CASE("labelled weight") {
  CHECK(labelled_weight(LF::at(x0, p)) == W{1, 0});
  CHECK(labelled_weight(LF::forces_all(a0, p)) == W{1, 1});
  CHECK(labelled_weight(LF::forces_some(a0, Formula::cond(p, q))) == W{5, 1});
  CHECK(labelled_weight(LF::cond_at(x0, a0, p, q)) == W{4, 0});
  CHECK(labelled_weight(LF::in_n(a0, x0)) == W{0, 0});
  CHECK(labelled_weight(LF::member(x0, a0)) == W{0, 0});
  CHECK(labelled_weight(LF::subset(a0, a1)) == W{0, 0});
}

TEST_CASE("substitution") {
  CHECK(substitute_nbhd(LF::forces_some(a0, p), a0, a1) == LF::forces_some(a1, p));
  CHECK(substitute_world(LF::cond_at(x0, a0, p, q), x0, x1) == LF::cond_at(x1, a0, p, q));
  const LF f = LF::member(x2, a0);
  CHECK(substitute_world(f, x2, x2) == f);
  CHECK(substitute_nbhd(f, a0, a0) == f);
  // Singleton tags follow their world.
  CHECK(substitute_world(LF::in_n(NbhdLabel::singleton(x0), x0), x0, x1) ==
        LF::in_n(NbhdLabel::singleton(x1), x1));
  CHECK(substitute_world(LF::subset(NbhdLabel::singleton(x0), a0), x0, x2) ==
        LF::subset(NbhdLabel::singleton(x2), a0));
  // Other labels are untouched.
  CHECK(substitute_world(LF::at(x2, p), x0, x1) == LF::at(x2, p));
}

TEST_CASE("singleton labels compare equal only to themselves") {
  CHECK(NbhdLabel::singleton(x0) == NbhdLabel::singleton(x0));
  CHECK(NbhdLabel::singleton(x0) != NbhdLabel::singleton(x1));
  CHECK(NbhdLabel::singleton(x0) != NbhdLabel::plain(0));
}

TEST_CASE("text syntax") {
  for (const char* text : {"a0 in N(x0)", "x1 in a2", "x0 in {x1}", "a0 <= a1", "x0 : p > q",
                           "a0 ||-A p -> q", "a3 ||-E p & q", "x0 ||-a1 p ; q | r", "{x2} in N(x2)"}) {
    CAPTURE(text);
    CHECK(render(parse_labelled(text)) == text);
  }
  const Sequent s = parse_sequent("a0 in N(x0), x0 : p => x0 : q, a0 ||-E p");
  CHECK(s.antecedent.size() == 2);
  CHECK(s.succedent.size() == 2);
  CHECK(parse_sequent(render(s)) == s);
  CHECK(parse_sequent("=>").antecedent.empty());
  CHECK_THROWS(parse_labelled("x0 : "));
  CHECK_THROWS(parse_labelled("y0 : p"));
}

TEST_CASE("relational atoms are antecedent-only") {
  Sequent s;
  s.succedent.insert(LF::in_n(a0, x0));
  CHECK_THROWS_AS(validate_sequent(s), std::invalid_argument);
  CHECK_THROWS(parse_sequent("=> x0 in a0"));
}

TEST_CASE("extend_branch: fresh neighbourhood records a generation edge") {
  Branch b = Branch::root(Formula::cond(p, q));
  Sequent premise = parse_sequent("a0 in N(x0), a0 ||-E p => x0 ||-a0 p ; q");
  Branch next = extend_branch(b, premise, {GenEdge{x0, a0}});
  REQUIRE(next.gen_tree().count(Label(a0)) == 1);
  CHECK(next.gen_tree().at(Label(a0)) == Label(x0));
  CHECK(next.current() == premise);
  // The principal has left the current sequent but stays in the history.
  CHECK(next.down_delta().count(LF::at(x0, Formula::cond(p, q))) == 1);
  CHECK(next.down_gamma().count(LF::in_n(a0, x0)) == 1);
}

TEST_CASE("extend_branch: static premise adds no edge and re-adding is idempotent") {
  Branch b = Branch::from_sequent(parse_sequent("x0 : p & q => x0 : p"));
  Branch next = b.extend(parse_sequent("x0 : p & q, x0 : p, x0 : q => x0 : p"), {});
  CHECK(next.gen_tree() == b.gen_tree());
  Branch again = next.extend(parse_sequent("x0 : p & q, x0 : p, x0 : q => x0 : p"), {});
  CHECK(again.down_gamma() == next.down_gamma());
  CHECK(again.down_delta() == next.down_delta());
}

TEST_CASE("extend_branch: a label gets one parent") {
  Branch b = Branch::root(p);
  Branch next = b.extend(parse_sequent("a0 in N(x0) => x0 : p"), {GenEdge{x0, a0}});
  CHECK_THROWS_AS(next.extend(parse_sequent("a0 in N(x0), x1 in a0 => x0 : p"), {GenEdge{x1, a0}}),
                  BranchError);
  CHECK_THROWS_AS(b.extend(parse_sequent("=> x0 : p"), {GenEdge{x2, a1}}), BranchError);
}

TEST_CASE("branch history contains the current sequent") {
  testing::Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Branch b = Branch::from_sequent(testing::random_sequent(rng, 3, 3, {"p", "q"}));
    for (int step = 0; step < 6; ++step) {
      auto inst = first_applicable(b, Logic::pcl());
      if (!inst) break;
      b = b.extend(inst->premises.front(), inst->edges);
      for (const auto& f : b.current().antecedent) CHECK(b.down_gamma().count(f) == 1);
      for (const auto& f : b.current().succedent) CHECK(b.down_delta().count(f) == 1);
      // Generation tree: every label reaches the root without cycles.
      for (const auto& [child, parent] : b.gen_tree()) {
        Label at = child;
        std::size_t hops = 0;
        while (b.gen_tree().count(at) && hops <= b.gen_tree().size()) {
          at = b.gen_tree().at(at);
          ++hops;
        }
        CHECK(hops <= b.gen_tree().size());
        CHECK(at == *b.gen_root());
      }
    }
  }
}

TEST_CASE("property: logical rules decrease the weight of new formulas") {
  const std::set<RuleId> logical{RuleId::LAnd,    RuleId::RAnd,    RuleId::LOr,      RuleId::ROr,
                                 RuleId::LImp,    RuleId::RImp,    RuleId::LForall,  RuleId::RForall,
                                 RuleId::LExists, RuleId::RExists, RuleId::RCond,    RuleId::LCondStar,
                                 RuleId::RBar,    RuleId::LBar};
  testing::Rng rng(11);
  std::map<RuleId, int> seen;
  for (int i = 0; i < 600; ++i) {
    Branch b = Branch::from_sequent(testing::random_sequent(rng, 3, 3, {"p", "q"}));
    if (is_closed(b.current())) continue;
    for (const RuleInstance& inst : applicable_instances(b, Logic::pcl())) {
      if (!logical.count(inst.rule)) continue;
      ++seen[inst.rule];
      W top{0, 0};
      for (const auto& f : inst.principal) top = std::max(top, labelled_weight(f));
      for (const Sequent& prem : inst.premises) {
        for (const auto* side : {&prem.antecedent, &prem.succedent})
          for (const auto& f : *side) {
            const auto& from = side == &prem.antecedent ? b.current().antecedent : b.current().succedent;
            if (from.count(f)) continue;
            CAPTURE(render(f));
            CHECK(labelled_weight(f) < top);
          }
      }
    }
  }
  CHECK(seen.size() == logical.size());
}
