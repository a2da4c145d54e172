#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/container/flat_set.hpp>

#include "pcl/formula.hpp"

namespace pcl {

struct WorldLabel {
  std::uint32_t index = 0;
  friend auto operator<=>(const WorldLabel&, const WorldLabel&) = default;
};

// A neighbourhood label: either an ordinary label a_i or the singleton {x_i}.
struct NbhdLabel {
  enum class Kind : std::uint8_t { Plain, Singleton };
  Kind kind = Kind::Plain;
  std::uint32_t index = 0;

  static NbhdLabel plain(std::uint32_t i) { return {Kind::Plain, i}; }
  static NbhdLabel singleton(WorldLabel x) { return {Kind::Singleton, x.index}; }
  bool is_singleton() const { return kind == Kind::Singleton; }
  WorldLabel singleton_of() const { return {index}; }
  friend auto operator<=>(const NbhdLabel&, const NbhdLabel&) = default;
};

// Either sort of label, used for generation-tree nodes and fresh-label lists.
struct Label {
  enum class Sort : std::uint8_t { World, Nbhd };
  Sort sort = Sort::World;
  NbhdLabel::Kind kind = NbhdLabel::Kind::Plain;
  std::uint32_t index = 0;

  Label() = default;
  Label(WorldLabel x) : sort(Sort::World), index(x.index) {}
  Label(NbhdLabel a) : sort(Sort::Nbhd), kind(a.kind), index(a.index) {}
  bool is_world() const { return sort == Sort::World; }
  WorldLabel world() const { return {index}; }
  NbhdLabel nbhd() const { return {kind, index}; }
  friend auto operator<=>(const Label&, const Label&) = default;
};

std::string to_string(WorldLabel x);
std::string to_string(NbhdLabel a);
std::string to_string(const Label& l);

enum class LfKind : std::uint8_t {
  InN,         // a in N(x)
  MemberOf,    // x in a
  SubsetOf,    // a <= b
  At,          // x : A
  ForcesAll,   // a ||-A A
  ForcesSome,  // a ||-E A
  CondAt,      // x ||-_a A | B
};

class LabelledFormula {
 public:
  static LabelledFormula in_n(NbhdLabel a, WorldLabel x);
  static LabelledFormula member(WorldLabel x, NbhdLabel a);
  static LabelledFormula subset(NbhdLabel a, NbhdLabel b);
  static LabelledFormula at(WorldLabel x, Formula f);
  static LabelledFormula forces_all(NbhdLabel a, Formula f);
  static LabelledFormula forces_some(NbhdLabel a, Formula f);
  static LabelledFormula cond_at(WorldLabel x, NbhdLabel a, Formula antecedent, Formula consequent);

  LfKind kind() const { return kind_; }
  bool is_relational() const { return kind_ <= LfKind::SubsetOf; }

  // Field accessors; meaningful only for the kinds that carry them.
  WorldLabel world() const { return world_; }
  NbhdLabel nbhd() const { return nbhd_; }
  // Right-hand label of SubsetOf.
  NbhdLabel nbhd2() const { return nbhd2_; }
  Formula formula() const { return f_; }
  // Consequent of CondAt.
  Formula formula2() const { return g_; }

  friend bool operator==(const LabelledFormula&, const LabelledFormula&) = default;
  friend std::strong_ordering operator<=>(const LabelledFormula& a, const LabelledFormula& b);

 private:
  void seal();

  std::uint64_t key1_ = static_cast<std::uint64_t>(LfKind::At) << 40;
  std::uint64_t key2_ = 0;
  LfKind kind_ = LfKind::At;
  WorldLabel world_{};
  NbhdLabel nbhd_{};
  NbhdLabel nbhd2_{};
  Formula f_;
  Formula g_;
};

using FormulaSet = boost::container::flat_set<LabelledFormula>;

struct Sequent {
  FormulaSet antecedent;
  FormulaSet succedent;

  friend bool operator==(const Sequent&, const Sequent&) = default;
};

// Throws std::invalid_argument if a relational atom sits in the succedent.
void validate_sequent(const Sequent& s);

// Lexicographic pair <weight of the pure part, weight of the label>.
std::pair<std::size_t, std::size_t> labelled_weight(const LabelledFormula& f);

LabelledFormula substitute_world(const LabelledFormula& f, WorldLabel from, WorldLabel to);
LabelledFormula substitute_nbhd(const LabelledFormula& f, NbhdLabel from, NbhdLabel to);
Sequent substitute_world(const Sequent& s, WorldLabel from, WorldLabel to);
Sequent substitute_nbhd(const Sequent& s, NbhdLabel from, NbhdLabel to);

// Labels occurring in a formula / sequent.  Singleton {x} contributes both
// itself and x.
void collect_labels(const LabelledFormula& f, std::vector<Label>& out);
std::vector<Label> labels_of(const Sequent& s);

struct GenEdge {
  Label parent;
  Label child;
  friend bool operator==(const GenEdge&, const GenEdge&) = default;
};

class BranchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A branch of a derivation seen from its current (topmost) sequent.
class Branch {
 public:
  // Branch whose only sequent is  => x0 : f.
  static Branch root(Formula f);
  // Branch for an arbitrary starting sequent; every label of the sequent is
  // attached to the generation tree below its first world label.
  static Branch from_sequent(Sequent s);

  const Sequent& current() const { return current_; }
  const FormulaSet& down_gamma() const { return down_gamma_; }
  const FormulaSet& down_delta() const { return down_delta_; }
  // child -> parent
  const std::map<Label, Label>& gen_tree() const { return parent_; }
  const std::optional<Label>& gen_root() const { return gen_root_; }
  bool has_label(const Label& l) const;
  std::uint32_t next_world() const { return next_world_; }
  std::uint32_t next_nbhd() const { return next_nbhd_; }
  std::size_t label_count() const { return parent_.size() + (gen_root_ ? 1 : 0); }
  // World labels on the branch, in creation order.
  std::vector<WorldLabel> worlds() const;
  // Ordinary (non-singleton) neighbourhood labels on the branch.
  std::vector<NbhdLabel> nbhds() const;

  WorldLabel fresh_world() const { return {next_world_}; }
  NbhdLabel fresh_nbhd() const { return NbhdLabel::plain(next_nbhd_); }

  // Moves the branch to `premise`, growing the history and the generation
  // tree.  Rejects an edge whose child already has a parent or whose parent
  // is not yet on the branch.
  Branch extend(const Sequent& premise, const std::vector<GenEdge>& new_edges) const;
  // Same, for a premise given as formulas added to and dropped from the
  // current sequent.
  Branch extend(const std::vector<LabelledFormula>& add_left,
                const std::vector<LabelledFormula>& add_right,
                const std::vector<LabelledFormula>& drop_left,
                const std::vector<LabelledFormula>& drop_right,
                const std::vector<GenEdge>& new_edges) const;

 private:
  void absorb(FormulaSet& down, const LabelledFormula& f);
  void add_edge(const GenEdge& e);
  void note_label(const Label& l);

  Sequent current_;
  FormulaSet down_gamma_;
  FormulaSet down_delta_;
  std::map<Label, Label> parent_;
  std::optional<Label> gen_root_;
  std::uint32_t next_world_ = 0;
  std::uint32_t next_nbhd_ = 0;
};

Branch extend_branch(const Branch& b, const Sequent& premise, const std::vector<GenEdge>& new_edges);

// Text syntax (see README):
//   a0 in N(x0)   x0 in a0   x0 in {x1}   a0 <= a1
//   x0 : A   a0 ||-A A   a0 ||-E A   x0 ||-a0 A ; B
//   Gamma => Delta  (comma separated)
LabelledFormula parse_labelled(std::string_view text);
Sequent parse_sequent(std::string_view text);
WorldLabel parse_world_label(std::string_view text);
NbhdLabel parse_nbhd_label(std::string_view text);
std::string render(const LabelledFormula& f);
std::string render(const Sequent& s);

}  // namespace pcl
