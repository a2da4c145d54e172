#include "pcl/formula.hpp"

#include <algorithm>
#include <deque>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include <boost/container_hash/hash.hpp>

namespace pcl {
namespace detail {

struct FormulaNode {
  Op op;
  std::string name;
  const FormulaNode* left;
  const FormulaNode* right;
  std::size_t hash;
  std::size_t size;
  std::size_t degree;
  std::size_t weight;
};

namespace {

struct NodeKey {
  Op op;
  std::string_view name;
  const FormulaNode* left;
  const FormulaNode* right;
};

std::size_t key_hash(const NodeKey& k) {
  std::size_t h = static_cast<std::size_t>(k.op);
  boost::hash_combine(h, k.name);
  boost::hash_combine(h, k.left ? k.left->hash : 0);
  boost::hash_combine(h, k.right ? k.right->hash : 0);
  return h;
}

struct NodeHash {
  using is_transparent = void;
  std::size_t operator()(const FormulaNode* n) const { return n->hash; }
  std::size_t operator()(const NodeKey& k) const { return key_hash(k); }
};

struct NodeEq {
  using is_transparent = void;
  static bool same(const FormulaNode* n, const NodeKey& k) {
    return n->op == k.op && n->left == k.left && n->right == k.right && n->name == k.name;
  }
  bool operator()(const FormulaNode* a, const FormulaNode* b) const { return a == b; }
  bool operator()(const FormulaNode* a, const NodeKey& b) const { return same(a, b); }
  bool operator()(const NodeKey& a, const FormulaNode* b) const { return same(b, a); }
};

class Interner {
 public:
  const FormulaNode* intern(Op op, std::string_view name, const FormulaNode* l,
                            const FormulaNode* r) {
    NodeKey key{op, name, l, r};
    std::lock_guard lock(mutex_);
    if (auto it = table_.find(key); it != table_.end()) return *it;
    FormulaNode& n = storage_.emplace_back();
    n.op = op;
    n.name = std::string(name);
    n.left = l;
    n.right = r;
    n.hash = key_hash(key);
    if (l == nullptr) {
      n.size = 1;
      n.degree = 0;
      n.weight = 1;
    } else {
      n.size = l->size + r->size + 1;
      n.degree = std::max(l->degree, r->degree) + (op == Op::Cond ? 1 : 0);
      n.weight = l->weight + r->weight + (op == Op::Cond ? 3 : 1);
    }
    table_.insert(&n);
    return &n;
  }

 private:
  std::mutex mutex_;
  std::deque<FormulaNode> storage_;
  std::unordered_set<const FormulaNode*, NodeHash, NodeEq> table_;
};

Interner& interner() {
  static Interner* instance = new Interner();
  return *instance;
}

std::strong_ordering compare_nodes(const FormulaNode* a, const FormulaNode* b) {
  if (a == b) return std::strong_ordering::equal;
  if (auto c = a->op <=> b->op; c != 0) return c;
  if (a->op == Op::Atom) return a->name.compare(b->name) <=> 0;
  if (a->op == Op::Bottom) return std::strong_ordering::equal;
  if (auto c = compare_nodes(a->left, b->left); c != 0) return c;
  return compare_nodes(a->right, b->right);
}

}  // namespace
}  // namespace detail

namespace {
const detail::FormulaNode* bottom_node() {
  static const detail::FormulaNode* n =
      detail::interner().intern(Op::Bottom, {}, nullptr, nullptr);
  return n;
}

bool valid_atom_name(std::string_view name) {
  if (name.empty() || name[0] < 'a' || name[0] > 'z') return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  });
}
}  // namespace

Formula::Formula() : node_(bottom_node()) {}

Formula Formula::atom(std::string_view name) {
  if (!valid_atom_name(name))
    throw std::invalid_argument("invalid atom name '" + std::string(name) + "'");
  return Formula(detail::interner().intern(Op::Atom, name, nullptr, nullptr));
}

Formula Formula::bottom() { return Formula(bottom_node()); }

Formula Formula::make(Op op, Formula a, Formula b) {
  if (op == Op::Atom || op == Op::Bottom)
    throw std::invalid_argument("Formula::make expects a binary connective");
  return Formula(detail::interner().intern(op, {}, a.node_, b.node_));
}

Formula Formula::conj(Formula a, Formula b) { return make(Op::And, a, b); }
Formula Formula::disj(Formula a, Formula b) { return make(Op::Or, a, b); }
Formula Formula::implies(Formula a, Formula b) { return make(Op::Implies, a, b); }
Formula Formula::cond(Formula a, Formula b) { return make(Op::Cond, a, b); }

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }

Formula Formula::left() const {
  if (!node_->left) throw std::logic_error("left() of a leaf formula");
  return Formula(node_->left);
}

Formula Formula::right() const {
  if (!node_->right) throw std::logic_error("right() of a leaf formula");
  return Formula(node_->right);
}

std::size_t Formula::size() const { return node_->size; }
std::size_t Formula::degree() const { return node_->degree; }
std::size_t Formula::weight() const { return node_->weight; }
std::size_t Formula::hash() const { return node_->hash; }

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  return detail::compare_nodes(a.node_, b.node_);
}

ParseError::ParseError(std::size_t position, const std::string& message)
    : std::runtime_error("parse error at " + std::to_string(position) + ": " + message),
      position_(position) {}

std::size_t conditional_degree(const Formula& f) { return f.degree(); }
std::size_t formula_size(const Formula& f) { return f.size(); }
std::size_t formula_weight(const Formula& f) { return f.weight(); }

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Implies: return 1;
    case Op::Cond: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    default: return 5;
  }
}

const char* symbol(Op op) {
  switch (op) {
    case Op::And: return " & ";
    case Op::Or: return " | ";
    case Op::Implies: return " -> ";
    case Op::Cond: return " > ";
    default: return "";
  }
}

void render_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::Atom: out += f.name(); return;
    case Op::Bottom: out += "false"; return;
    default: break;
  }
  const int p = precedence(f.op());
  Formula l = f.left();
  Formula r = f.right();
  // & and | associate to the left, -> to the right, > not at all.
  bool paren_l = l.is_binary() && (precedence(l.op()) < p ||
                                   (precedence(l.op()) == p && f.op() != Op::And && f.op() != Op::Or));
  bool paren_r = r.is_binary() && (precedence(r.op()) < p ||
                                   (precedence(r.op()) == p && f.op() != Op::Implies));
  if (paren_l) out += '(';
  render_into(l, out);
  if (paren_l) out += ')';
  out += symbol(f.op());
  if (paren_r) out += '(';
  render_into(r, out);
  if (paren_r) out += ')';
}

}  // namespace

std::string render_formula(const Formula& f) {
  std::string out;
  render_into(f, out);
  return out;
}

std::vector<Formula> subformulas(const Formula& f) {
  std::vector<Formula> out;
  std::unordered_set<Formula> seen;
  std::vector<std::pair<Formula, bool>> stack{{f, false}};
  while (!stack.empty()) {
    auto [g, expanded] = stack.back();
    stack.pop_back();
    if (seen.count(g)) continue;
    if (expanded || !g.is_binary()) {
      seen.insert(g);
      out.push_back(g);
      continue;
    }
    stack.emplace_back(g, true);
    stack.emplace_back(g.right(), false);
    stack.emplace_back(g.left(), false);
  }
  return out;
}

std::vector<std::string> atoms_of(const Formula& f) {
  std::vector<std::string> out;
  for (const Formula& g : subformulas(f))
    if (g.is_atom()) out.push_back(g.name());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace pcl
