#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "pcl/labels.hpp"

namespace pcl {

// A point of the preferential lattice: PCL plus frame-condition flags.
// Flags are kept closed upwards along C -> W -> T -> N.
struct Logic {
  bool n = false;
  bool t = false;
  bool w = false;
  bool c = false;
  bool u = false;
  bool a = false;

  static Logic pcl() { return {}; }
  static Logic from_flags(bool n, bool t, bool w, bool c, bool u, bool a);
  Logic normalized() const;
  std::string name() const;
  friend bool operator==(const Logic&, const Logic&) = default;
};

std::optional<Logic> logic_from_name(std::string_view name);
// The fifteen lattice points, in the order PCL, PN, PT, PW, PC, PU, PNU, ...
const std::vector<Logic>& all_logics();
// True iff every frame condition of `lower` is also one of `upper`.
bool logic_below(const Logic& lower, const Logic& upper);

enum class RuleId : std::uint8_t {
  Init, BotL,
  LAnd, RAnd, LOr, ROr, LImp, RImp,
  LForall, RForall, LExists, RExists,
  RCond, LCond, LCondStar, RBar, LBar,
  Ref, Tr, LSubset, MonForall,
  N, Zero, T, W, Single, C, Repl1, Repl2,
  Unif1, Unif2, Abs1, Abs2,
};

inline constexpr std::size_t kRuleCount = static_cast<std::size_t>(RuleId::Abs2) + 1;

std::string_view rule_name(RuleId r);
std::optional<RuleId> rule_from_name(std::string_view name);
// Dynamic rules introduce a fresh label.
bool is_dynamic(RuleId r);
std::size_t premise_count(RuleId r);
std::vector<RuleId> all_rules();

enum class RuleMode { Calculus, Search };

// Calculus mode: the rules of the sequent calculus for `logic` (with L>).
// Search mode: L> replaced by L>*, plus Mon-forall.
std::set<RuleId> rule_table(const Logic& logic, RuleMode mode = RuleMode::Calculus);

// Formulas a premise adds to, and removes from, the conclusion.
struct PremiseDelta {
  std::vector<LabelledFormula> add_left;
  std::vector<LabelledFormula> add_right;
  std::vector<LabelledFormula> drop_left;
  std::vector<LabelledFormula> drop_right;
};

Sequent apply_delta(const Sequent& conclusion, const PremiseDelta& d);

struct RuleInstance {
  RuleId rule = RuleId::Init;
  std::vector<LabelledFormula> principal;
  std::vector<Label> fresh;
  std::vector<PremiseDelta> deltas;
  std::vector<Sequent> premises;
  std::vector<GenEdge> edges;
};

// Backward-applicable instances on the branch's current sequent whose
// saturation condition is not yet met, in strategy order.  Empty when the
// sequent is closed or saturated.
std::vector<RuleInstance> applicable_instances(const Branch& branch, const Logic& logic);
// First instance in strategy order.  Premises are materialized unless
// with_premises is false, in which case only the deltas are filled in.
std::optional<RuleInstance> first_applicable(const Branch& branch, const Logic& logic,
                                             bool with_premises = true);

bool is_closed(const Sequent& s);

struct DerivationNode {
  Sequent sequent;
  RuleId rule = RuleId::Init;
  std::vector<LabelledFormula> principal;
  std::vector<Label> fresh;
  std::vector<std::size_t> children;
};

// Proof tree stored flat; node 0 is the root.
struct Derivation {
  Logic logic;
  std::vector<DerivationNode> nodes;

  const Sequent& root() const { return nodes.front().sequent; }
  std::size_t height() const;
};

struct RuleError {
  std::size_t node = 0;
  std::string message;
};

struct CheckResult {
  std::optional<RuleError> error;
  bool valid() const { return !error.has_value(); }
};

CheckResult check_derivation(const Derivation& d, const Logic& logic);

}  // namespace pcl
