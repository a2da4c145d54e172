#include <doctest.h>

#include "generators.hpp"
#include "pcl/countermodel.hpp"
#include "pcl/search.hpp"
#include "pcl/semantics.hpp"

using namespace pcl;
using R = RuleId;

namespace {

Logic L(const char* name) { return *logic_from_name(name); }

SearchOutcome run(const char* f, const char* logic) { return prove(parse_formula(f), L(logic)); }

}  // namespace

TEST_CASE("prove: identity") {
  const auto o = run("p > p", "PCL");
  REQUIRE(o.verdict == Verdict::Provable);
  CHECK(check_derivation(*o.derivation, L("PCL")).valid());
  CHECK(o.derivation->root() == parse_sequent("=> x0 : p > p"));
}

TEST_CASE("prove: cautious monotonicity") {
  const auto o = run("((p>q) & (p>r)) -> ((p&q) > r)", "PCL");
  REQUIRE(o.verdict == Verdict::Provable);
  CHECK(check_derivation(*o.derivation, L("PCL")).valid());
}

TEST_CASE("prove: strengthening is refuted with a countermodel") {
  const Formula f = parse_formula("(p>q) -> ((p & r) > q)");
  const auto o = prove(f, Logic::pcl());
  REQUIRE(o.verdict == Verdict::Refutable);
  REQUIRE(o.leaf);
  CHECK(is_saturated(*o.leaf, Logic::pcl()).saturated);
  const ExtractedModel em = extract_model(*o.leaf, Logic::pcl());
  CHECK_FALSE(forces(em.model, em.root, f));
}

TEST_CASE("prove: normality and total reflexivity axioms") {
  CHECK(run("~(true > false)", "PN").verdict == Verdict::Provable);
  CHECK(run("p -> ~(p > false)", "PT").verdict == Verdict::Provable);
  CHECK(run("~(true > false)", "PCL").verdict == Verdict::Refutable);
  CHECK(run("p -> ~(p > false)", "PN").verdict == Verdict::Refutable);
}

TEST_CASE("prove: classical tautologies and non-tautologies") {
  CHECK(run("p -> p", "PCL").verdict == Verdict::Provable);
  CHECK(run("p | ~p", "PCL").verdict == Verdict::Provable);
  CHECK(run("((p -> q) -> p) -> p", "PCL").verdict == Verdict::Provable);
  CHECK(run("p", "PCL").verdict == Verdict::Refutable);
  CHECK(run("false", "PC").verdict == Verdict::Refutable);
  CHECK(run("true", "PC").verdict == Verdict::Provable);
}

TEST_CASE("prove: budget exhaustion gives Unknown") {
  Budget b;
  b.max_nodes = 3;
  const auto o = prove(parse_formula("(p > q) & (p > r) -> (p & q) > r"), Logic::pcl(), b);
  CHECK(o.verdict == Verdict::Unknown);
  CHECK(o.reason.find("node budget") != std::string::npos);
  Budget labels;
  labels.max_labels = 1;
  CHECK(prove(parse_formula("p > p"), Logic::pcl(), labels).verdict == Verdict::Unknown);
}

TEST_CASE("prove: results are deterministic") {
  const Formula f = parse_formula("(p > q) & (q > p) -> (p > r) -> q > r");
  const auto a = prove(f, Logic::pcl());
  const auto b = prove(f, Logic::pcl());
  REQUIRE(a.verdict == Verdict::Provable);
  REQUIRE(b.verdict == Verdict::Provable);
  CHECK(a.derivation->nodes.size() == b.derivation->nodes.size());
  for (std::size_t i = 0; i < a.derivation->nodes.size(); ++i)
    CHECK(a.derivation->nodes[i].sequent == b.derivation->nodes[i].sequent);
}

TEST_CASE("is_closed") {
  CHECK(is_closed(parse_sequent("x0 : p => x0 : p")));
  CHECK(is_closed(parse_sequent("x0 : false, x1 : q => x2 : r")));
  CHECK_FALSE(is_closed(parse_sequent("x0 : p & q => x0 : p & q")));
  CHECK_FALSE(is_closed(parse_sequent("x0 : p => x1 : p")));
}

TEST_CASE("is_saturated") {
  const auto closed = is_saturated(Branch::from_sequent(parse_sequent("x0 : p => x0 : p")), Logic::pcl());
  CHECK(closed.closed);
  CHECK_FALSE(closed.saturated);

  // Top of a blocked L> / L| loop.
  Branch blocked = Branch::from_sequent(parse_sequent(
      "a0 in N(x0), a0 <= a0, x1 in a0, x1 : p, x1 : q, a0 ||-E p, a0 ||-A p -> q, "
      "x0 : p > q, x0 ||-a0 p ; q, x1 : p -> q => a0 ||-E false, x1 : false, x1 : r"));
  const auto top = is_saturated(blocked, Logic::pcl());
  CAPTURE(top.detail);
  CHECK(top.saturated);

  Branch subset = Branch::from_sequent(parse_sequent("x0 in a0, a0 <= a1, a0 <= a0, a1 <= a1 => x0 : q"));
  const auto rep = is_saturated(subset, Logic::pcl());
  CHECK_FALSE(rep.saturated);
  REQUIRE(rep.unmet);
  CHECK(*rep.unmet == R::LSubset);
}

TEST_CASE("trace: identity starts with RCond") {
  SearchOptions opts;
  opts.record_trace = true;
  const auto o = prove(parse_formula("p > p"), Logic::pcl(), {}, opts);
  REQUIRE_FALSE(search_trace(o).empty());
  CHECK(search_trace(o).front().rule == R::RCond);
  CHECK(search_trace(o).front().dynamic);
}

TEST_CASE("property: strategy compliance") {
  // No dynamic rule fires while a static one is applicable (R> before L>*
  // excepted), and Zero only fires for a neighbourhood with an obligation.
  testing::Rng rng(99);
  std::size_t firings = 0;
  std::size_t zeros = 0;
  for (const char* name : {"PCL", "PN", "PT", "PCU"}) {
    const Logic logic = L(name);
    for (int i = 0; i < 40; ++i) {
      const Formula f = testing::random_formula(rng, 3 + i % 8, {"p", "q"});
      SearchOptions opts;
      opts.observer = [&](const Branch& b, const RuleInstance& inst) {
        ++firings;
        if (is_dynamic(inst.rule)) {
          for (const auto& other : applicable_instances(b, logic)) {
            if (is_dynamic(other.rule)) continue;
            if (inst.rule == R::RCond && other.rule == R::LCondStar) continue;
            FAIL_CHECK(std::string(rule_name(inst.rule)) << " fired while "
                       << std::string(rule_name(other.rule)) << " was applicable");
          }
        }
        if (inst.rule == R::Zero) {
          ++zeros;
          const NbhdLabel a = inst.principal.front().nbhd();
          bool obligation = false;
          for (const auto& g : b.current().succedent)
            obligation = obligation || (g.kind() == LfKind::ForcesSome && g.nbhd() == a);
          for (const auto& g : b.current().antecedent)
            obligation = obligation || (g.kind() == LfKind::ForcesAll && g.nbhd() == a);
          CHECK(obligation);
        }
      };
      Budget budget;
      budget.max_nodes = 20000;
      prove(f, logic, budget, opts);
    }
  }
  CHECK(firings > 0);
  CHECK(zeros > 0);
}

TEST_CASE("property: provable outcomes replay, refutable ones saturate") {
  testing::Rng rng(1234);
  for (const char* name : {"PCL", "PW", "PU", "PC"}) {
    const Logic logic = L(name);
    for (int i = 0; i < 60; ++i) {
      const Formula f = testing::random_formula(rng, 1 + i % 10, {"p", "q", "r"});
      CAPTURE(render_formula(f));
      const auto o = prove(f, logic);
      REQUIRE(o.verdict != Verdict::Unknown);
      if (o.verdict == Verdict::Provable) {
        CHECK(check_derivation(*o.derivation, logic).valid());
        CHECK_FALSE(enumerate_countermodel(f, logic, 2));
      } else {
        CHECK(is_saturated(*o.leaf, logic).saturated);
      }
    }
  }
}

TEST_CASE("absoluteness logics confirm refutations semantically") {
  const auto o = run("p > q", "PA");
  CHECK(o.verdict == Verdict::Refutable);
  CHECK(run("(p > q) -> r > (p > q)", "PA").verdict == Verdict::Provable);
  CHECK(run("(p > q) -> r > (p > q)", "PCL").verdict == Verdict::Refutable);
}
