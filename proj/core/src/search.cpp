#include "pcl/search.hpp"

#include <algorithm>

#include "pcl/countermodel.hpp"
#include "pcl/semantics.hpp"

namespace pcl {

std::string_view verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Provable: return "provable";
    case Verdict::Refutable: return "refutable";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

SaturationReport is_saturated(const Branch& branch, const Logic& logic) {
  SaturationReport r;
  if (is_closed(branch.current())) {
    r.closed = true;
    r.detail = "sequent is closed";
    return r;
  }
  if (auto inst = first_applicable(branch, logic)) {
    r.unmet = inst->rule;
    r.detail = std::string(rule_name(inst->rule));
    if (!inst->principal.empty()) r.detail += " on " + render(inst->principal.front());
    return r;
  }
  r.saturated = true;
  return r;
}

const std::vector<TraceEvent>& search_trace(const SearchOutcome& outcome) { return outcome.trace; }

namespace {

struct Frame {
  Branch branch;
  std::size_t node;
  std::size_t depth;
};

// A saturated branch counts as a refutation once the model read off it is
// confirmed to be a countermodel in the right frame class.
bool confirm_refutation(const Branch& leaf, const Logic& logic, Formula f) {
  try {
    ExtractedModel em = candidate_model(leaf, logic);
    if (!check_frame(em.model, logic).empty()) return false;
    return !forces(em.model, em.root, f);
  } catch (const std::exception&) {
    return false;
  }
}

}  // namespace

SearchOutcome prove(Formula f, const Logic& logic, const Budget& budget,
                    const SearchOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  SearchOutcome out;
  Derivation d;
  d.logic = logic;
  d.nodes.emplace_back();

  // Branches deeper than depth_limit are set aside until every shallower
  // frame is done, then the limit doubles.  A branch that grows forever
  // cannot hide a sibling that saturates.
  // Nodes keep only their delta from the parent; full sequents are rebuilt
  // once a proof is found.
  std::vector<PremiseDelta> deltas(1);
  std::vector<Frame> stack;
  std::vector<Frame> deferred;
  std::size_t depth_limit = options.initial_depth_limit;
  bool unconfirmed = false;
  stack.push_back({Branch::root(f), 0, 0});

  auto finish = [&](Verdict v, std::string reason) {
    out.verdict = v;
    out.reason = std::move(reason);
    out.stats.nodes = d.nodes.size();
    out.stats.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(Clock::now() - start);
    return out;
  };

  while (!stack.empty() || !deferred.empty()) {
    if (stack.empty()) {
      depth_limit *= 2;
      std::reverse(deferred.begin(), deferred.end());
      stack.swap(deferred);
    }
    Frame fr = std::move(stack.back());
    stack.pop_back();
    if (fr.depth > depth_limit) {
      deferred.push_back(std::move(fr));
      continue;
    }
    DerivationNode& node = d.nodes[fr.node];
    const Sequent& seq = fr.branch.current();
    out.stats.max_labels = std::max(out.stats.max_labels, fr.branch.label_count());

    if (is_closed(seq)) {
      node.rule = RuleId::Init;
      for (const auto& g : seq.antecedent)
        if (g.kind() == LfKind::At && g.formula().op() == Op::Bottom) {
          node.rule = RuleId::BotL;
          node.principal = {g};
          break;
        }
      if (node.rule == RuleId::Init)
        for (const auto& g : seq.antecedent)
          if (g.kind() == LfKind::At && g.formula().is_atom() &&
              seq.succedent.find(g) != seq.succedent.end()) {
            node.principal = {g};
            break;
          }
      continue;
    }

    if (d.nodes.size() > budget.max_nodes) return finish(Verdict::Unknown, "node budget exhausted");
    if (fr.branch.label_count() > budget.max_labels)
      return finish(Verdict::Unknown, "label budget exhausted");
    if (budget.wall_clock && (out.stats.steps & 63) == 0 &&
        Clock::now() - start > *budget.wall_clock)
      return finish(Verdict::Unknown, "time budget exhausted");

    std::optional<RuleInstance> inst = first_applicable(fr.branch, logic, false);
    if (!inst) {
      if (!confirm_refutation(fr.branch, logic, f)) {
        if (!unconfirmed) out.leaf = fr.branch;
        unconfirmed = true;
        continue;
      }
      out.leaf = std::move(fr.branch);
      return finish(Verdict::Refutable, "saturated branch");
    }

    if (options.observer) options.observer(fr.branch, *inst);
    ++out.stats.steps;
    if (options.record_trace)
      out.trace.push_back(TraceEvent{out.stats.steps, fr.depth, fr.node, inst->rule,
                                     is_dynamic(inst->rule), inst->principal, inst->fresh});

    node.rule = inst->rule;
    node.principal = inst->principal;
    node.fresh = inst->fresh;
    const std::size_t first_child = d.nodes.size();
    const std::size_t arity = inst->deltas.size();
    for (std::size_t i = 0; i < arity; ++i) node.children.push_back(first_child + i);
    d.nodes.resize(first_child + arity);
    deltas.insert(deltas.end(), inst->deltas.begin(), inst->deltas.end());
    // Push in reverse so the first premise is explored first.
    for (std::size_t i = arity; i-- > 0;)
      stack.push_back({fr.branch.extend(inst->deltas[i].add_left, inst->deltas[i].add_right,
                                        inst->deltas[i].drop_left, inst->deltas[i].drop_right,
                                        inst->edges),
                       first_child + i, fr.depth + 1});
  }

  if (unconfirmed)
    return finish(Verdict::Unknown, "saturated branch without a confirmed countermodel");
  finish(Verdict::Provable, "all branches closed");
  d.nodes[0].sequent = Branch::root(f).current();
  for (std::size_t i = 0; i < d.nodes.size(); ++i)
    for (std::size_t c : d.nodes[i].children)
      d.nodes[c].sequent = apply_delta(d.nodes[i].sequent, deltas[c]);
  out.derivation = std::move(d);
  return out;
}

}  // namespace pcl
