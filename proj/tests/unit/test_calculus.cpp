#include <doctest.h>

#include "generators.hpp"
#include "pcl/calculus.hpp"
#include "pcl/search.hpp"
#include "proof_script.hpp"

using namespace pcl;
using LF = LabelledFormula;
using R = RuleId;

namespace {

std::string data(const std::string& rel) { return std::string(PCL_DATA_DIR) + "/" + rel; }

Logic L(const char* name) { return *logic_from_name(name); }

std::set<RuleId> base_rules() { return rule_table(Logic::pcl()); }

std::set<RuleId> with(std::set<RuleId> s, std::initializer_list<RuleId> more) {
  s.insert(more);
  return s;
}

}  // namespace

TEST_CASE("logic names cover the fifteen lattice points") {
  CHECK(all_logics().size() == 15);
  for (const char* name : {"PCL", "PN", "PT", "PW", "PC", "PU", "PNU", "PTU", "PWU", "PCU", "PA", "PNA",
                           "PTA", "PWA", "PCA"}) {
    CAPTURE(name);
    REQUIRE(logic_from_name(name));
    CHECK(logic_from_name(name)->name() == name);
  }
  CHECK_FALSE(logic_from_name("PX"));
  CHECK(L("PC").w);
  CHECK(L("PC").t);
  CHECK(L("PC").n);
  CHECK_FALSE(L("PT").w);
}

TEST_CASE("rule tables") {
  const std::set<RuleId> base{R::Init,    R::BotL,    R::LAnd,  R::RAnd,  R::LOr,  R::ROr,
                              R::LImp,    R::RImp,    R::LForall, R::RForall, R::LExists,
                              R::RExists, R::RCond,   R::LCond, R::RBar,  R::LBar, R::Ref,
                              R::Tr,      R::LSubset};
  CHECK(base_rules() == base);
  CHECK(rule_table(L("PN")) == with(base, {R::N, R::Zero}));
  CHECK(rule_table(L("PTU")) == with(base, {R::N, R::Zero, R::T, R::Unif1, R::Unif2}));
  CHECK(rule_table(L("PCA")) == with(base, {R::N, R::Zero, R::T, R::W, R::C, R::Single, R::Repl1,
                                            R::Repl2, R::Abs1, R::Abs2}));
  const auto search = rule_table(Logic::pcl(), RuleMode::Search);
  CHECK(search.count(R::LCondStar) == 1);
  CHECK(search.count(R::MonForall) == 1);
  CHECK(search.count(R::LCond) == 0);
}

TEST_CASE("rule tables grow along the lattice") {
  for (const Logic& lo : all_logics())
    for (const Logic& hi : all_logics()) {
      if (!logic_below(lo, hi)) continue;
      CAPTURE(lo.name());
      CAPTURE(hi.name());
      for (auto mode : {RuleMode::Calculus, RuleMode::Search}) {
        const auto small = rule_table(lo, mode);
        const auto big = rule_table(hi, mode);
        CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
      }
    }
}

TEST_CASE("applicable instances: conditional on the right") {
  Branch b = Branch::root(parse_formula("p > q"));
  const auto all = applicable_instances(b, Logic::pcl());
  REQUIRE(all.size() == 1);
  const RuleInstance& inst = all.front();
  CHECK(inst.rule == R::RCond);
  REQUIRE(inst.fresh.size() == 1);
  CHECK(inst.fresh.front() == Label(NbhdLabel::plain(0)));
  REQUIRE(inst.premises.size() == 1);
  const Sequent& prem = inst.premises.front();
  CHECK(prem.antecedent.count(parse_labelled("a0 in N(x0)")) == 1);
  CHECK(prem.antecedent.count(parse_labelled("a0 ||-E p")) == 1);
  CHECK(prem.succedent.count(parse_labelled("x0 ||-a0 p ; q")) == 1);
}

TEST_CASE("applicable instances: LBar is blocked by an existing witness") {
  // A loop of L> and L| stops once some c in N(x), c <= b carries the pair
  // of forcing formulas; here b itself does.
  Sequent s = parse_sequent(
      "a1 in N(x0), a1 <= a1, a1 ||-E p, a1 ||-A p -> q, x0 ||-a1 p ; q, x0 : p > q => x0 : r");
  Branch b = Branch::from_sequent(s);
  for (const auto& inst : applicable_instances(b, Logic::pcl())) CHECK(inst.rule != R::LBar);
  // Without the witness, LBar applies.
  Branch open = Branch::from_sequent(parse_sequent("a1 in N(x0), x0 ||-a1 p ; q => x0 : r"));
  bool lbar = false;
  for (const auto& inst : applicable_instances(open, Logic::pcl())) lbar = lbar || inst.rule == R::LBar;
  CHECK(lbar);
}

TEST_CASE("applicable instances: closed sequents have none") {
  CHECK(applicable_instances(Branch::from_sequent(parse_sequent("x0 : p => x0 : p")), Logic::pcl())
            .empty());
  CHECK(applicable_instances(Branch::from_sequent(parse_sequent("x0 : false => x0 : q > p")),
                             Logic::pcl())
            .empty());
}

TEST_CASE("applicable instances: Zero only for neighbourhoods with forcing obligations") {
  // a0 has no a ||-E in the succedent and no a ||-A in the antecedent.
  Branch idle = Branch::from_sequent(parse_sequent("a0 in N(x0) => x0 : p"));
  for (const auto& inst : applicable_instances(idle, L("PN"))) CHECK(inst.rule != R::Zero);
  Branch busy = Branch::from_sequent(parse_sequent("a0 in N(x0) => a0 ||-E p"));
  bool zero = false;
  for (const auto& inst : applicable_instances(busy, L("PN"))) zero = zero || inst.rule == R::Zero;
  CHECK(zero);
}

TEST_CASE("applicable instances: static before dynamic, RCond before LCondStar") {
  testing::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    Branch b = Branch::from_sequent(testing::random_sequent(rng, 3, 2, {"p", "q"}));
    if (is_closed(b.current())) continue;
    const auto all = applicable_instances(b, L("PCU"));
    bool seen_dynamic = false;
    bool seen_lcond = false;
    for (const auto& inst : all) {
      if (is_dynamic(inst.rule)) seen_dynamic = true;
      else if (inst.rule != R::LCondStar) CHECK_FALSE(seen_dynamic);
      if (inst.rule == R::LCondStar) seen_lcond = true;
      if (inst.rule == R::RCond) CHECK_FALSE(seen_lcond);
      // Fresh labels occur nowhere in the conclusion.
      const auto used = labels_of(b.current());
      for (const Label& l : inst.fresh) CHECK(std::find(used.begin(), used.end(), l) == used.end());
    }
  }
}

TEST_CASE("check_derivation: one-node initial sequent") {
  Derivation d;
  d.logic = Logic::pcl();
  d.nodes.push_back(DerivationNode{parse_sequent("x0 : p => x0 : p"), R::Init, {}, {}, {}});
  CHECK(check_derivation(d, Logic::pcl()).valid());
  d.nodes[0].sequent = parse_sequent("x0 : p & q => x0 : p & q");
  CHECK_FALSE(check_derivation(d, Logic::pcl()).valid());
}

TEST_CASE("check_derivation: RCond must use a fresh label") {
  auto o = prove(parse_formula("p > p"), Logic::pcl());
  REQUIRE(o.derivation);
  Derivation d = *o.derivation;
  REQUIRE(d.nodes[0].rule == R::RCond);
  // Plant the label RCond introduces into every sequent, the root included.
  const LabelledFormula clash = parse_labelled("a0 in N(x0)");
  for (auto& n : d.nodes) n.sequent.antecedent.insert(clash);
  const CheckResult res = check_derivation(d, Logic::pcl());
  REQUIRE_FALSE(res.valid());
  CHECK(res.error->node == 0);
  CHECK(res.error->message.find("freshness") != std::string::npos);
}

TEST_CASE("check_derivation: open leaves and wrong premises are rejected") {
  Derivation d = testing::parse_proof_script(R"(
logic PCL
root => x0 : p -> p
RImp!
  @ x0 : p -> p
  + x0 : p => x0 : p
init
)");
  CHECK(check_derivation(d, Logic::pcl()).valid());
  Derivation wrong = d;
  wrong.nodes[1].sequent = parse_sequent("x0 : p => x0 : p, x0 : q");
  CHECK_FALSE(check_derivation(wrong, Logic::pcl()).valid());
  Derivation open = d;
  open.nodes[1].rule = R::LAnd;
  CHECK_FALSE(check_derivation(open, Logic::pcl()).valid());
}

TEST_CASE("check_derivation: transcribed appendix derivations") {
  for (const char* file : {"cm.proof", "n.proof", "t.proof", "u1.proof"}) {
    CAPTURE(file);
    const Derivation d = testing::load_proof_script(data(std::string("appendix/") + file));
    const CheckResult res = check_derivation(d, d.logic);
    CAPTURE(res.error ? res.error->message : "");
    CHECK(res.valid());
  }
  // Each needs its own extension rules.
  CHECK_FALSE(check_derivation(testing::load_proof_script(data("appendix/n.proof")), Logic::pcl()).valid());
  CHECK_FALSE(check_derivation(testing::load_proof_script(data("appendix/t.proof")), L("PN")).valid());
  CHECK_FALSE(check_derivation(testing::load_proof_script(data("appendix/u1.proof")), L("PC")).valid());
}

TEST_CASE("check_derivation: a single changed formula breaks an appendix proof") {
  const Derivation d = testing::load_proof_script(data("appendix/cm.proof"));
  testing::Rng rng(5);
  for (int i = 0; i < 40; ++i) {
    Derivation bad = d;
    const std::size_t at = 1 + rng() % (bad.nodes.size() - 1);
    bad.nodes[at].sequent.succedent.insert(parse_labelled("x9 : s"));
    CHECK_FALSE(check_derivation(bad, d.logic).valid());
  }
}
