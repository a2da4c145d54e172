#include "pcl/calculus.hpp"

#include <algorithm>
#include <array>

namespace pcl {

Logic Logic::from_flags(bool n, bool t, bool w, bool c, bool u, bool a) {
  return Logic{n, t, w, c, u, a}.normalized();
}

Logic Logic::normalized() const {
  Logic l = *this;
  l.w = l.w || l.c;
  l.t = l.t || l.w;
  l.n = l.n || l.t;
  return l;
}

std::string Logic::name() const {
  Logic l = normalized();
  std::string out = "P";
  if (l.c) out += "C";
  else if (l.w) out += "W";
  else if (l.t) out += "T";
  else if (l.n) out += "N";
  if (l.u) out += "U";
  if (l.a) out += "A";
  return out == "P" ? "PCL" : out;
}

const std::vector<Logic>& all_logics() {
  static const std::vector<Logic> logics = [] {
    std::vector<Logic> out;
    for (int extra = 0; extra < 3; ++extra) {
      const bool u = extra == 1;
      const bool a = extra == 2;
      out.push_back(Logic::from_flags(false, false, false, false, u, a));
      out.push_back(Logic::from_flags(true, false, false, false, u, a));
      out.push_back(Logic::from_flags(true, true, false, false, u, a));
      out.push_back(Logic::from_flags(true, true, true, false, u, a));
      out.push_back(Logic::from_flags(true, true, true, true, u, a));
    }
    return out;
  }();
  return logics;
}

std::optional<Logic> logic_from_name(std::string_view name) {
  for (const Logic& l : all_logics())
    if (l.name() == name) return l;
  return std::nullopt;
}

bool logic_below(const Logic& lower, const Logic& upper) {
  Logic l = lower.normalized();
  Logic u = upper.normalized();
  auto le = [](bool a, bool b) { return !a || b; };
  return le(l.n, u.n) && le(l.t, u.t) && le(l.w, u.w) && le(l.c, u.c) && le(l.u, u.u) &&
         le(l.a, u.a);
}

namespace {
constexpr std::array<std::string_view, kRuleCount> kRuleNames = {
    "init", "BotL",
    "LAnd", "RAnd", "LOr", "ROr", "LImp", "RImp",
    "LForall", "RForall", "LExists", "RExists",
    "RCond", "LCond", "LCondStar", "RBar", "LBar",
    "Ref", "Tr", "LSubset", "MonForall",
    "N", "Zero", "T", "W", "Single", "C", "Repl1", "Repl2",
    "Unif1", "Unif2", "Abs1", "Abs2",
};
}  // namespace

std::string_view rule_name(RuleId r) { return kRuleNames[static_cast<std::size_t>(r)]; }

std::optional<RuleId> rule_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kRuleCount; ++i)
    if (kRuleNames[i] == name) return static_cast<RuleId>(i);
  return std::nullopt;
}

bool is_dynamic(RuleId r) {
  switch (r) {
    case RuleId::RForall:
    case RuleId::LExists:
    case RuleId::RCond:
    case RuleId::LBar:
    case RuleId::N:
    case RuleId::Zero:
    case RuleId::T:
    case RuleId::Unif1:
    case RuleId::Unif2:
      return true;
    default:
      return false;
  }
}

std::size_t premise_count(RuleId r) {
  switch (r) {
    case RuleId::Init:
    case RuleId::BotL:
      return 0;
    case RuleId::RAnd:
    case RuleId::LOr:
    case RuleId::LImp:
    case RuleId::LCond:
    case RuleId::LCondStar:
    case RuleId::RBar:
      return 2;
    default:
      return 1;
  }
}

std::vector<RuleId> all_rules() {
  std::vector<RuleId> out;
  for (std::size_t i = 0; i < kRuleCount; ++i) out.push_back(static_cast<RuleId>(i));
  return out;
}

std::set<RuleId> rule_table(const Logic& logic, RuleMode mode) {
  using R = RuleId;
  std::set<RuleId> out = {R::Init,    R::BotL,    R::LAnd,    R::RAnd,    R::LOr,
                          R::ROr,     R::LImp,    R::RImp,    R::LForall, R::RForall,
                          R::LExists, R::RExists, R::RCond,   R::RBar,    R::LBar,
                          R::Ref,     R::Tr,      R::LSubset};
  if (mode == RuleMode::Calculus) {
    out.insert(R::LCond);
  } else {
    out.insert(R::LCondStar);
    out.insert(R::MonForall);
  }
  const Logic l = logic.normalized();
  if (l.n) out.insert({R::N, R::Zero});
  if (l.t) out.insert(R::T);
  if (l.w) out.insert(R::W);
  if (l.c) out.insert({R::C, R::Single, R::Repl1, R::Repl2});
  if (l.u) out.insert({R::Unif1, R::Unif2});
  if (l.a) out.insert({R::Abs1, R::Abs2});
  return out;
}

Sequent apply_delta(const Sequent& conclusion, const PremiseDelta& d) {
  Sequent s = conclusion;
  for (const auto& f : d.drop_left) s.antecedent.erase(f);
  for (const auto& f : d.drop_right) s.succedent.erase(f);
  s.antecedent.insert(d.add_left.begin(), d.add_left.end());
  s.succedent.insert(d.add_right.begin(), d.add_right.end());
  return s;
}

bool is_closed(const Sequent& s) {
  for (const auto& f : s.antecedent) {
    if (f.kind() != LfKind::At) continue;
    const Op op = f.formula().op();
    if (op == Op::Bottom) return true;
    if (op == Op::Atom && s.succedent.find(f) != s.succedent.end()) return true;
  }
  return false;
}

std::size_t Derivation::height() const {
  if (nodes.empty()) return 0;
  std::size_t best = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 1}};
  while (!stack.empty()) {
    auto [i, depth] = stack.back();
    stack.pop_back();
    best = std::max(best, depth);
    for (std::size_t c : nodes[i].children)
      if (c < nodes.size()) stack.emplace_back(c, depth + 1);
  }
  return best;
}

}  // namespace pcl
