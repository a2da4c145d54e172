#include "pcl/json_io.hpp"

#include <stdexcept>

namespace pcl {

namespace {

std::string_view op_tag(Op op) {
  switch (op) {
    case Op::Atom: return "atom";
    case Op::Bottom: return "false";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "implies";
    case Op::Cond: return "cond";
  }
  return "false";
}

Json formula_list(const FormulaSet& s) {
  Json out = Json::array();
  for (const auto& f : s) out.push_back(render(f));
  return out;
}

FormulaSet formula_set(const Json& j) {
  FormulaSet out;
  for (const auto& e : j) out.insert(parse_labelled(e.get<std::string>()));
  return out;
}

Label parse_label(const std::string& s) {
  if (!s.empty() && s.front() == 'x') return parse_world_label(s);
  return parse_nbhd_label(s);
}

}  // namespace

Json formula_to_json(const Formula& f) {
  Json j;
  j["op"] = op_tag(f.op());
  if (f.is_atom()) j["name"] = f.name();
  if (f.is_binary()) j["args"] = Json::array({formula_to_json(f.left()), formula_to_json(f.right())});
  return j;
}

Formula formula_from_json(const Json& j) {
  const std::string op = j.at("op").get<std::string>();
  if (op == "atom") return Formula::atom(j.at("name").get<std::string>());
  if (op == "false") return Formula::bottom();
  const Json& args = j.at("args");
  if (args.size() != 2) throw std::invalid_argument("binary connective needs two args");
  const Formula a = formula_from_json(args[0]);
  const Formula b = formula_from_json(args[1]);
  if (op == "and") return Formula::conj(a, b);
  if (op == "or") return Formula::disj(a, b);
  if (op == "implies") return Formula::implies(a, b);
  if (op == "cond") return Formula::cond(a, b);
  throw std::invalid_argument("unknown connective '" + op + "'");
}

Json sequent_to_json(const Sequent& s) {
  return Json{{"antecedent", formula_list(s.antecedent)}, {"succedent", formula_list(s.succedent)}};
}

Sequent sequent_from_json(const Json& j) {
  Sequent s{formula_set(j.at("antecedent")), formula_set(j.at("succedent"))};
  validate_sequent(s);
  return s;
}

Json branch_to_json(const Branch& b) {
  Json edges = Json::array();
  for (const auto& [child, parent] : b.gen_tree())
    edges.push_back(Json::array({to_string(parent), to_string(child)}));
  Json j{{"current", sequent_to_json(b.current())},
         {"down_antecedent", formula_list(b.down_gamma())},
         {"down_succedent", formula_list(b.down_delta())},
         {"edges", edges}};
  if (b.gen_root()) j["root_label"] = to_string(*b.gen_root());
  return j;
}

Json derivation_to_json(const Derivation& d) {
  Json nodes = Json::array();
  for (const auto& n : d.nodes) {
    Json principal = Json::array();
    for (const auto& f : n.principal) principal.push_back(render(f));
    Json fresh = Json::array();
    for (const auto& l : n.fresh) fresh.push_back(to_string(l));
    nodes.push_back(Json{{"sequent", sequent_to_json(n.sequent)},
                         {"rule", rule_name(n.rule)},
                         {"principal", principal},
                         {"fresh", fresh},
                         {"children", n.children}});
  }
  Json j{{"logic", d.logic.name()}, {"nodes", nodes}};
  if (!d.nodes.empty()) j["root"] = sequent_to_json(d.root());
  return j;
}

Derivation derivation_from_json(const Json& j) {
  Derivation d;
  const std::string logic = j.at("logic").get<std::string>();
  auto l = logic_from_name(logic);
  if (!l) throw std::invalid_argument("unknown logic '" + logic + "'");
  d.logic = *l;
  for (const auto& jn : j.at("nodes")) {
    DerivationNode n;
    n.sequent = sequent_from_json(jn.at("sequent"));
    const std::string rule = jn.at("rule").get<std::string>();
    auto r = rule_from_name(rule);
    if (!r) throw std::invalid_argument("unknown rule '" + rule + "'");
    n.rule = *r;
    if (jn.contains("principal"))
      for (const auto& p : jn.at("principal")) n.principal.push_back(parse_labelled(p.get<std::string>()));
    if (jn.contains("fresh"))
      for (const auto& f : jn.at("fresh")) n.fresh.push_back(parse_label(f.get<std::string>()));
    n.children = jn.at("children").get<std::vector<std::size_t>>();
    d.nodes.push_back(std::move(n));
  }
  if (j.contains("root") && !d.nodes.empty() && sequent_from_json(j.at("root")) != d.root())
    throw std::invalid_argument("root sequent differs from node 0");
  return d;
}

Json model_to_json(const NeighbourhoodModel& m, World root) {
  Json worlds = Json::array();
  Json nbhds = Json::object();
  auto set_json = [&](const WorldSet& s) {
    Json a = Json::array();
    for (World w = 0; w < m.size(); ++w)
      if (s.test(w)) a.push_back(m.world_name(w));
    return a;
  };
  for (World w = 0; w < m.size(); ++w) {
    worlds.push_back(m.world_name(w));
    Json list = Json::array();
    for (const WorldSet& a : m.neighbourhoods(w)) list.push_back(set_json(a));
    nbhds[m.world_name(w)] = list;
  }
  Json val = Json::object();
  for (const auto& [p, s] : m.valuations()) val[p] = set_json(s);
  return Json{{"worlds", worlds}, {"neighbourhoods", nbhds}, {"valuation", val},
              {"root", m.world_name(root)}};
}

LoadedModel model_from_json(const Json& j) {
  LoadedModel out;
  out.model = NeighbourhoodModel(j.at("worlds").get<std::vector<std::string>>());
  NeighbourhoodModel& m = out.model;
  auto world = [&](const Json& name) {
    auto w = m.find_world(name.get<std::string>());
    if (!w) throw ModelError("unknown world '" + name.get<std::string>() + "'");
    return *w;
  };
  auto set_of = [&](const Json& a) {
    WorldSet s = m.empty_set();
    for (const auto& name : a) s.set(world(name));
    return s;
  };
  if (j.contains("neighbourhoods"))
    for (const auto& [name, list] : j.at("neighbourhoods").items()) {
      const World w = world(Json(name));
      for (const auto& a : list) m.add_neighbourhood(w, set_of(a));
    }
  if (j.contains("valuation"))
    for (const auto& [atom, a] : j.at("valuation").items()) m.set_valuation(atom, set_of(a));
  if (j.contains("root")) out.root = world(j.at("root"));
  return out;
}

Json trace_event_to_json(const TraceEvent& e) {
  Json principal = Json::array();
  for (const auto& f : e.principal) principal.push_back(render(f));
  Json fresh = Json::array();
  for (const auto& l : e.fresh) fresh.push_back(to_string(l));
  return Json{{"step", e.step},         {"depth", e.depth},   {"node", e.node},
              {"rule", rule_name(e.rule)}, {"dynamic", e.dynamic}, {"principal", principal},
              {"fresh", fresh}};
}

}  // namespace pcl
