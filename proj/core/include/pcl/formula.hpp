#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace pcl {

enum class Op : std::uint8_t { Atom, Bottom, And, Or, Implies, Cond };

namespace detail {
struct FormulaNode;
}

// Immutable, hash-consed formula of the conditional language.  Two formulas
// are equal iff they share a node, so equality is a pointer comparison; the
// ordering is structural, which keeps iteration order independent of
// allocation order.
class Formula {
 public:
  // Default-constructed formula is Bottom.
  Formula();

  static Formula atom(std::string_view name);
  static Formula bottom();
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula implies(Formula a, Formula b);
  static Formula cond(Formula a, Formula b);
  static Formula negation(Formula a) { return implies(a, bottom()); }
  static Formula top() { return implies(bottom(), bottom()); }
  static Formula make(Op op, Formula a, Formula b);

  Op op() const;
  bool is_atom() const { return op() == Op::Atom; }
  bool is_binary() const { return op() != Op::Atom && op() != Op::Bottom; }
  // Atom name; empty for non-atoms.
  const std::string& name() const;
  Formula left() const;
  Formula right() const;

  std::size_t size() const;
  std::size_t degree() const;
  std::size_t weight() const;
  std::size_t hash() const;
  // Stable identity of the shared node; usable as a cache key.
  const void* id() const { return node_; }

  friend bool operator==(const Formula& a, const Formula& b) { return a.node_ == b.node_; }
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  explicit Formula(const detail::FormulaNode* n) : node_(n) {}
  const detail::FormulaNode* node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, const std::string& message);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

Formula parse_formula(std::string_view text);
std::string render_formula(const Formula& f);

std::size_t conditional_degree(const Formula& f);
std::size_t formula_size(const Formula& f);
std::size_t formula_weight(const Formula& f);

// Atom names occurring in f, sorted and without duplicates.
std::vector<std::string> atoms_of(const Formula& f);
// Distinct subformulas of f, each listed after its children.
std::vector<Formula> subformulas(const Formula& f);

}  // namespace pcl

template <>
struct std::hash<pcl::Formula> {
  std::size_t operator()(const pcl::Formula& f) const noexcept { return f.hash(); }
};
