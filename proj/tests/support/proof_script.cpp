#include "proof_script.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <boost/algorithm/string/predicate.hpp>
#include <boost/algorithm/string/trim.hpp>

namespace pcl::testing {

namespace {

struct Step {
  std::size_t line = 0;
  RuleId rule = RuleId::Init;
  bool consume = false;
  std::vector<Label> fresh;
  std::vector<LabelledFormula> principal;
  std::vector<Sequent> additions;
};

// Rules whose principal formula sits in the succedent.
bool right_principal(RuleId r) {
  switch (r) {
    case RuleId::RAnd:
    case RuleId::ROr:
    case RuleId::RImp:
    case RuleId::RForall:
    case RuleId::RCond:
      return true;
    default:
      return false;
  }
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw std::runtime_error("proof script line " + std::to_string(line) + ": " + msg);
}

Label parse_any_label(const std::string& s) {
  if (!s.empty() && s.front() == 'x') return parse_world_label(s);
  return parse_nbhd_label(s);
}

Step parse_rule_line(std::size_t n, const std::string& line) {
  Step st;
  st.line = n;
  std::istringstream in(line);
  std::string name;
  in >> name;
  if (!name.empty() && name.back() == '!') {
    st.consume = true;
    name.pop_back();
  }
  auto r = rule_from_name(name);
  if (!r) fail(n, "unknown rule '" + name + "'");
  st.rule = *r;
  std::string word;
  while (in >> word) {
    if (word != "fresh") fail(n, "unexpected '" + word + "'");
    std::string labels;
    in >> labels;
    std::istringstream ls(labels);
    for (std::string l; std::getline(ls, l, ',');) st.fresh.push_back(parse_any_label(l));
  }
  return st;
}

}  // namespace

Derivation parse_proof_script(const std::string& text) {
  std::istringstream in(text);
  std::optional<Logic> logic;
  std::optional<Sequent> root;
  std::vector<Step> steps;
  std::string raw;
  for (std::size_t n = 1; std::getline(in, raw); ++n) {
    std::string line = boost::algorithm::trim_copy(raw);
    if (line.empty() || line.front() == '#') continue;
    try {
      if (boost::algorithm::starts_with(line, "logic ")) {
        logic = logic_from_name(line.substr(6));
        if (!logic) fail(n, "unknown logic");
      } else if (boost::algorithm::starts_with(line, "root ")) {
        root = parse_sequent(line.substr(5));
      } else if (line.front() == '@') {
        if (steps.empty()) fail(n, "principal formula before any rule");
        steps.back().principal.push_back(parse_labelled(boost::algorithm::trim_copy(line.substr(1))));
      } else if (line.front() == '+') {
        if (steps.empty()) fail(n, "premise before any rule");
        steps.back().additions.push_back(parse_sequent(line.substr(1)));
      } else {
        steps.push_back(parse_rule_line(n, line));
      }
    } catch (const std::runtime_error& e) {
      if (boost::algorithm::starts_with(e.what(), "proof script")) throw;
      fail(n, e.what());
    } catch (const std::invalid_argument& e) {
      fail(n, e.what());
    }
  }
  if (!logic) throw std::runtime_error("proof script has no logic line");
  if (!root) throw std::runtime_error("proof script has no root line");

  Derivation d;
  d.logic = *logic;
  d.nodes.emplace_back();
  d.nodes[0].sequent = *root;
  std::vector<std::size_t> open{0};
  for (const Step& st : steps) {
    if (open.empty()) fail(st.line, "no open sequent left");
    const std::size_t at = open.back();
    open.pop_back();
    const Sequent conclusion = d.nodes[at].sequent;
    std::vector<std::size_t> children;
    for (const Sequent& add : st.additions) {
      Sequent premise = conclusion;
      if (st.consume) {
        if (st.principal.empty()) fail(st.line, "'!' needs a principal formula");
        if (right_principal(st.rule))
          premise.succedent.erase(st.principal.front());
        else
          premise.antecedent.erase(st.principal.front());
      }
      premise.antecedent.insert(add.antecedent.begin(), add.antecedent.end());
      premise.succedent.insert(add.succedent.begin(), add.succedent.end());
      DerivationNode child;
      child.sequent = std::move(premise);
      children.push_back(d.nodes.size());
      d.nodes.push_back(std::move(child));
    }
    DerivationNode& node = d.nodes[at];
    node.rule = st.rule;
    node.principal = st.principal;
    node.fresh = st.fresh;
    node.children = children;
    for (auto it = children.rbegin(); it != children.rend(); ++it) open.push_back(*it);
  }
  if (!open.empty())
    throw std::runtime_error("proof script leaves " + std::to_string(open.size()) + " sequent(s) open");
  return d;
}

Derivation load_proof_script(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_proof_script(ss.str());
}

}  // namespace pcl::testing
