#include "pcl/labels.hpp"

#include <algorithm>

namespace pcl {

std::string to_string(WorldLabel x) { return "x" + std::to_string(x.index); }

std::string to_string(NbhdLabel a) {
  if (a.is_singleton()) return "{x" + std::to_string(a.index) + "}";
  return "a" + std::to_string(a.index);
}

std::string to_string(const Label& l) {
  return l.is_world() ? to_string(l.world()) : to_string(l.nbhd());
}

LabelledFormula LabelledFormula::in_n(NbhdLabel a, WorldLabel x) {
  LabelledFormula f;
  f.kind_ = LfKind::InN;
  f.nbhd_ = a;
  f.world_ = x;
  f.seal();
  return f;
}

LabelledFormula LabelledFormula::member(WorldLabel x, NbhdLabel a) {
  LabelledFormula f;
  f.kind_ = LfKind::MemberOf;
  f.world_ = x;
  f.nbhd_ = a;
  f.seal();
  return f;
}

LabelledFormula LabelledFormula::subset(NbhdLabel a, NbhdLabel b) {
  LabelledFormula f;
  f.kind_ = LfKind::SubsetOf;
  f.nbhd_ = a;
  f.nbhd2_ = b;
  f.seal();
  return f;
}

LabelledFormula LabelledFormula::at(WorldLabel x, Formula g) {
  LabelledFormula f;
  f.kind_ = LfKind::At;
  f.world_ = x;
  f.f_ = g;
  f.seal();
  return f;
}

LabelledFormula LabelledFormula::forces_all(NbhdLabel a, Formula g) {
  LabelledFormula f;
  f.kind_ = LfKind::ForcesAll;
  f.nbhd_ = a;
  f.f_ = g;
  f.seal();
  return f;
}

LabelledFormula LabelledFormula::forces_some(NbhdLabel a, Formula g) {
  LabelledFormula f;
  f.kind_ = LfKind::ForcesSome;
  f.nbhd_ = a;
  f.f_ = g;
  f.seal();
  return f;
}

LabelledFormula LabelledFormula::cond_at(WorldLabel x, NbhdLabel a, Formula antecedent,
                                         Formula consequent) {
  LabelledFormula f;
  f.kind_ = LfKind::CondAt;
  f.world_ = x;
  f.nbhd_ = a;
  f.f_ = antecedent;
  f.g_ = consequent;
  f.seal();
  return f;
}

namespace {
std::uint64_t encode(NbhdLabel a) {
  return (static_cast<std::uint64_t>(a.kind) << 32) | a.index;
}
}  // namespace

// World-first kinds sort by their world label so that all formulas about one
// world are contiguous; the others sort by neighbourhood label.  Labels are
// packed into two integers so most comparisons touch no formula.
void LabelledFormula::seal() {
  const bool world_first = kind_ == LfKind::InN || kind_ == LfKind::At || kind_ == LfKind::CondAt;
  const std::uint64_t primary = world_first ? world_.index : encode(nbhd_);
  // nbhd2 is set only for SubsetOf, which leaves world_ at its default.
  const std::uint64_t secondary = (world_first ? encode(nbhd_) : world_.index) + encode(nbhd2_);
  key1_ = (static_cast<std::uint64_t>(kind_) << 40) | primary;
  key2_ = secondary;
}

std::strong_ordering operator<=>(const LabelledFormula& a, const LabelledFormula& b) {
  if (auto c = a.key1_ <=> b.key1_; c != 0) return c;
  if (auto c = a.key2_ <=> b.key2_; c != 0) return c;
  if (auto c = a.f_ <=> b.f_; c != 0) return c;
  return a.g_ <=> b.g_;
}

void validate_sequent(const Sequent& s) {
  for (const auto& f : s.succedent)
    if (f.is_relational())
      throw std::invalid_argument("relational atom in succedent: " + render(f));
}

std::pair<std::size_t, std::size_t> labelled_weight(const LabelledFormula& f) {
  switch (f.kind()) {
    case LfKind::At: return {f.formula().weight(), 0};
    case LfKind::ForcesAll:
    case LfKind::ForcesSome: return {f.formula().weight(), 1};
    case LfKind::CondAt: return {f.formula().weight() + f.formula2().weight() + 2, 0};
    default: return {0, 0};
  }
}

LabelledFormula substitute_world(const LabelledFormula& f, WorldLabel from, WorldLabel to) {
  auto sub = [&](WorldLabel x) { return x == from ? to : x; };
  auto sub_n = [&](NbhdLabel a) {
    return a.is_singleton() && a.singleton_of() == from ? NbhdLabel::singleton(to) : a;
  };
  switch (f.kind()) {
    case LfKind::InN: return LabelledFormula::in_n(sub_n(f.nbhd()), sub(f.world()));
    case LfKind::MemberOf: return LabelledFormula::member(sub(f.world()), sub_n(f.nbhd()));
    case LfKind::SubsetOf: return LabelledFormula::subset(sub_n(f.nbhd()), sub_n(f.nbhd2()));
    case LfKind::At: return LabelledFormula::at(sub(f.world()), f.formula());
    case LfKind::ForcesAll: return LabelledFormula::forces_all(sub_n(f.nbhd()), f.formula());
    case LfKind::ForcesSome: return LabelledFormula::forces_some(sub_n(f.nbhd()), f.formula());
    case LfKind::CondAt:
      return LabelledFormula::cond_at(sub(f.world()), sub_n(f.nbhd()), f.formula(), f.formula2());
  }
  return f;
}

LabelledFormula substitute_nbhd(const LabelledFormula& f, NbhdLabel from, NbhdLabel to) {
  auto sub = [&](NbhdLabel a) { return a == from ? to : a; };
  switch (f.kind()) {
    case LfKind::InN: return LabelledFormula::in_n(sub(f.nbhd()), f.world());
    case LfKind::MemberOf: return LabelledFormula::member(f.world(), sub(f.nbhd()));
    case LfKind::SubsetOf: return LabelledFormula::subset(sub(f.nbhd()), sub(f.nbhd2()));
    case LfKind::At: return f;
    case LfKind::ForcesAll: return LabelledFormula::forces_all(sub(f.nbhd()), f.formula());
    case LfKind::ForcesSome: return LabelledFormula::forces_some(sub(f.nbhd()), f.formula());
    case LfKind::CondAt:
      return LabelledFormula::cond_at(f.world(), sub(f.nbhd()), f.formula(), f.formula2());
  }
  return f;
}

namespace {
template <typename Fn>
Sequent map_sequent(const Sequent& s, Fn fn) {
  Sequent out;
  for (const auto& f : s.antecedent) out.antecedent.insert(fn(f));
  for (const auto& f : s.succedent) out.succedent.insert(fn(f));
  return out;
}
}  // namespace

Sequent substitute_world(const Sequent& s, WorldLabel from, WorldLabel to) {
  return map_sequent(s, [&](const LabelledFormula& f) { return substitute_world(f, from, to); });
}

Sequent substitute_nbhd(const Sequent& s, NbhdLabel from, NbhdLabel to) {
  return map_sequent(s, [&](const LabelledFormula& f) { return substitute_nbhd(f, from, to); });
}

void collect_labels(const LabelledFormula& f, std::vector<Label>& out) {
  auto nb = [&](NbhdLabel a) {
    out.emplace_back(a);
    if (a.is_singleton()) out.emplace_back(a.singleton_of());
  };
  switch (f.kind()) {
    case LfKind::InN:
    case LfKind::MemberOf:
    case LfKind::CondAt:
      out.emplace_back(f.world());
      nb(f.nbhd());
      break;
    case LfKind::SubsetOf:
      nb(f.nbhd());
      nb(f.nbhd2());
      break;
    case LfKind::At: out.emplace_back(f.world()); break;
    case LfKind::ForcesAll:
    case LfKind::ForcesSome: nb(f.nbhd()); break;
  }
}

std::vector<Label> labels_of(const Sequent& s) {
  std::vector<Label> out;
  for (const auto& f : s.antecedent) collect_labels(f, out);
  for (const auto& f : s.succedent) collect_labels(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

Branch Branch::root(Formula f) {
  Sequent s;
  s.succedent.insert(LabelledFormula::at(WorldLabel{0}, f));
  return from_sequent(std::move(s));
}

Branch Branch::from_sequent(Sequent s) {
  validate_sequent(s);
  Branch b;
  std::vector<Label> labels = labels_of(s);
  auto first_world = std::find_if(labels.begin(), labels.end(),
                                  [](const Label& l) { return l.is_world(); });
  if (first_world != labels.end()) {
    b.gen_root_ = *first_world;
    for (const Label& l : labels) {
      if (l == *first_world) continue;
      Label parent = *first_world;
      if (!l.is_world() && l.nbhd().is_singleton()) parent = l.nbhd().singleton_of();
      if (parent == l) parent = *first_world;
      b.parent_.emplace(l, parent);
    }
  } else if (!labels.empty()) {
    b.gen_root_ = labels.front();
    for (std::size_t i = 1; i < labels.size(); ++i) b.parent_.emplace(labels[i], labels.front());
  }
  for (const Label& l : labels) b.note_label(l);
  b.down_gamma_ = s.antecedent;
  b.down_delta_ = s.succedent;
  b.current_ = std::move(s);
  return b;
}

bool Branch::has_label(const Label& l) const {
  return (gen_root_ && *gen_root_ == l) || parent_.count(l) > 0;
}

std::vector<WorldLabel> Branch::worlds() const {
  std::vector<WorldLabel> out;
  if (gen_root_ && gen_root_->is_world()) out.push_back(gen_root_->world());
  for (const auto& [child, parent] : parent_)
    if (child.is_world()) out.push_back(child.world());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NbhdLabel> Branch::nbhds() const {
  std::vector<NbhdLabel> out;
  for (const auto& [child, parent] : parent_)
    if (!child.is_world() && !child.nbhd().is_singleton()) out.push_back(child.nbhd());
  std::sort(out.begin(), out.end());
  return out;
}

void Branch::note_label(const Label& l) {
  if (l.is_world())
    next_world_ = std::max(next_world_, l.index + 1);
  else if (!l.nbhd().is_singleton())
    next_nbhd_ = std::max(next_nbhd_, l.index + 1);
}

void Branch::add_edge(const GenEdge& e) {
  if (!has_label(e.parent))
    throw BranchError("generation edge from " + to_string(e.parent) + " which is not on the branch");
  if (has_label(e.child))
    throw BranchError("label " + to_string(e.child) + " would get a second parent");
  parent_.emplace(e.child, e.parent);
  note_label(e.child);
}

void Branch::absorb(FormulaSet& down, const LabelledFormula& f) {
  if (!down.insert(f).second) return;
  std::vector<Label> labels;
  collect_labels(f, labels);
  for (const Label& l : labels)
    if (!has_label(l)) throw BranchError("label " + to_string(l) + " appears without a generation edge");
}

Branch Branch::extend(const Sequent& premise, const std::vector<GenEdge>& new_edges) const {
  validate_sequent(premise);
  Branch b = *this;
  for (const GenEdge& e : new_edges) b.add_edge(e);
  for (const auto& f : premise.antecedent) b.absorb(b.down_gamma_, f);
  for (const auto& f : premise.succedent) b.absorb(b.down_delta_, f);
  b.current_ = premise;
  return b;
}

Branch Branch::extend(const std::vector<LabelledFormula>& add_left,
                      const std::vector<LabelledFormula>& add_right,
                      const std::vector<LabelledFormula>& drop_left,
                      const std::vector<LabelledFormula>& drop_right,
                      const std::vector<GenEdge>& new_edges) const {
  for (const auto& f : add_right)
    if (f.is_relational()) throw std::invalid_argument("relational atom in succedent: " + render(f));
  Branch b = *this;
  for (const GenEdge& e : new_edges) b.add_edge(e);
  // The current sequent is already part of the history.
  for (const auto& f : add_left) b.absorb(b.down_gamma_, f);
  for (const auto& f : add_right) b.absorb(b.down_delta_, f);
  for (const auto& f : drop_left) b.current_.antecedent.erase(f);
  for (const auto& f : drop_right) b.current_.succedent.erase(f);
  b.current_.antecedent.insert(add_left.begin(), add_left.end());
  b.current_.succedent.insert(add_right.begin(), add_right.end());
  return b;
}

Branch extend_branch(const Branch& b, const Sequent& premise, const std::vector<GenEdge>& new_edges) {
  return b.extend(premise, new_edges);
}

}  // namespace pcl
