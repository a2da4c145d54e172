#include <cctype>

#include "pcl/formula.hpp"
#include "pcl/labels.hpp"

namespace pcl {
namespace {

enum class Tok {
  Ident, LParen, RParen, LBrace, RBrace, Not, And, Or, Arrow, Gt,
  Turnstile, Colon, Comma, Semi, Seq, Subset, End
};

struct Token {
  Tok kind;
  std::string_view text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token next() {
    Token t = tok_;
    advance();
    return t;
  }

  Token expect(Tok kind, const char* what) {
    if (tok_.kind != kind) fail(std::string("expected ") + what);
    return next();
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::string near = tok_.kind == Tok::End ? "end of input" : "'" + std::string(tok_.text) + "'";
    throw ParseError(tok_.pos, msg + " near " + near);
  }

 private:
  void advance() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    const std::size_t start = pos_;
    if (pos_ >= src_.size()) {
      tok_ = {Tok::End, {}, start};
      return;
    }
    auto starts = [&](std::string_view s) { return src_.substr(pos_, s.size()) == s; };
    auto emit = [&](Tok k, std::size_t len) {
      tok_ = {k, src_.substr(start, len), start};
      pos_ += len;
    };
    const char c = src_[pos_];
    if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      emit(Tok::Ident, end - pos_);
      return;
    }
    if (starts("||-")) return emit(Tok::Turnstile, 3);
    if (starts("->")) return emit(Tok::Arrow, 2);
    if (starts("=>")) return emit(Tok::Seq, 2);
    if (starts("<=")) return emit(Tok::Subset, 2);
    switch (c) {
      case '(': return emit(Tok::LParen, 1);
      case ')': return emit(Tok::RParen, 1);
      case '{': return emit(Tok::LBrace, 1);
      case '}': return emit(Tok::RBrace, 1);
      case '~': return emit(Tok::Not, 1);
      case '&': return emit(Tok::And, 1);
      case '|': return emit(Tok::Or, 1);
      case '>': return emit(Tok::Gt, 1);
      case ':': return emit(Tok::Colon, 1);
      case ',': return emit(Tok::Comma, 1);
      case ';': return emit(Tok::Semi, 1);
      default: break;
    }
    throw ParseError(start, std::string("unknown token '") + c + "'");
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  Token tok_{Tok::End, {}, 0};
};

class FormulaParser {
 public:
  explicit FormulaParser(Lexer& lex) : lex_(lex) {}

  Formula implication() {
    Formula lhs = conditional();
    if (lex_.peek().kind == Tok::Arrow) {
      lex_.next();
      return Formula::implies(lhs, implication());
    }
    return lhs;
  }

 private:
  Formula conditional() {
    Formula lhs = disjunction();
    if (lex_.peek().kind != Tok::Gt) return lhs;
    lex_.next();
    Formula rhs = disjunction();
    if (lex_.peek().kind == Tok::Gt) lex_.fail("nested '>' needs parentheses");
    return Formula::cond(lhs, rhs);
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (lex_.peek().kind == Tok::Or) {
      lex_.next();
      lhs = Formula::disj(lhs, conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (lex_.peek().kind == Tok::And) {
      lex_.next();
      lhs = Formula::conj(lhs, unary());
    }
    return lhs;
  }

  Formula unary() {
    if (lex_.peek().kind == Tok::Not) {
      lex_.next();
      return Formula::negation(unary());
    }
    return primary();
  }

  Formula primary() {
    const Token& t = lex_.peek();
    if (t.kind == Tok::LParen) {
      lex_.next();
      Formula inner = implication();
      lex_.expect(Tok::RParen, "')'");
      return inner;
    }
    if (t.kind != Tok::Ident) lex_.fail("expected a formula");
    if (t.text == "false") {
      lex_.next();
      return Formula::bottom();
    }
    if (t.text == "true") {
      lex_.next();
      return Formula::top();
    }
    const char c0 = t.text[0];
    if (c0 < 'a' || c0 > 'z') lex_.fail("atom names start with a lowercase letter");
    for (char c : t.text)
      if (std::isupper(static_cast<unsigned char>(c))) lex_.fail("atom names are lowercase");
    return Formula::atom(lex_.next().text);
  }

  Lexer& lex_;
};

bool parse_index(std::string_view digits, std::uint32_t& out) {
  if (digits.empty() || digits.size() > 9) return false;
  out = 0;
  for (char c : digits) {
    if (c < '0' || c > '9') return false;
    out = out * 10 + static_cast<std::uint32_t>(c - '0');
  }
  return true;
}

class LabelledParser {
 public:
  explicit LabelledParser(Lexer& lex) : lex_(lex), formulas_(lex) {}

  WorldLabel world() {
    Token t = lex_.expect(Tok::Ident, "a world label");
    std::uint32_t i;
    if (t.text.size() < 2 || t.text[0] != 'x' || !parse_index(t.text.substr(1), i))
      throw ParseError(t.pos, "expected a world label like x0");
    return {i};
  }

  NbhdLabel nbhd() {
    if (lex_.peek().kind == Tok::LBrace) {
      lex_.next();
      WorldLabel x = world();
      lex_.expect(Tok::RBrace, "'}'");
      return NbhdLabel::singleton(x);
    }
    Token t = lex_.expect(Tok::Ident, "a neighbourhood label");
    std::uint32_t i;
    if (t.text.size() < 2 || t.text[0] != 'a' || !parse_index(t.text.substr(1), i))
      throw ParseError(t.pos, "expected a neighbourhood label like a0");
    return NbhdLabel::plain(i);
  }

  LabelledFormula labelled() {
    if (lex_.peek().kind == Tok::LBrace) {
      NbhdLabel a = nbhd();
      return after_nbhd(a);
    }
    const Token t = lex_.peek();
    if (t.kind != Tok::Ident) lex_.fail("expected a labelled formula");
    if (t.text[0] == 'a') return after_nbhd(nbhd());
    WorldLabel x = world();
    const Token op = lex_.next();
    if (op.kind == Tok::Colon) return LabelledFormula::at(x, formulas_.implication());
    if (op.kind == Tok::Ident && op.text == "in") {
      NbhdLabel a = nbhd();
      return LabelledFormula::member(x, a);
    }
    if (op.kind == Tok::Turnstile) {
      NbhdLabel a = nbhd();
      Formula lhs = formulas_.implication();
      lex_.expect(Tok::Semi, "';' between the two sides of a labelled conditional");
      Formula rhs = formulas_.implication();
      return LabelledFormula::cond_at(x, a, lhs, rhs);
    }
    throw ParseError(op.pos, "expected ':', 'in' or '||-' after a world label");
  }

  FormulaSet list(Tok stop) {
    FormulaSet out;
    if (lex_.peek().kind == stop) return out;
    out.insert(labelled());
    while (lex_.peek().kind == Tok::Comma) {
      lex_.next();
      out.insert(labelled());
    }
    return out;
  }

 private:
  LabelledFormula after_nbhd(NbhdLabel a) {
    const Token op = lex_.next();
    if (op.kind == Tok::Subset) return LabelledFormula::subset(a, nbhd());
    if (op.kind == Tok::Ident && op.text == "in") {
      Token n = lex_.expect(Tok::Ident, "'N'");
      if (n.text != "N") throw ParseError(n.pos, "expected 'N'");
      lex_.expect(Tok::LParen, "'('");
      WorldLabel x = world();
      lex_.expect(Tok::RParen, "')'");
      return LabelledFormula::in_n(a, x);
    }
    if (op.kind == Tok::Turnstile) {
      Token q = lex_.expect(Tok::Ident, "'A' or 'E'");
      if (q.text == "A") return LabelledFormula::forces_all(a, formulas_.implication());
      if (q.text == "E") return LabelledFormula::forces_some(a, formulas_.implication());
      throw ParseError(q.pos, "expected 'A' or 'E' after '||-'");
    }
    throw ParseError(op.pos, "expected 'in', '<=' or '||-' after a neighbourhood label");
  }

  Lexer& lex_;
  FormulaParser formulas_;
};

void expect_end(Lexer& lex) {
  if (lex.peek().kind != Tok::End) lex.fail("unexpected trailing input");
}

}  // namespace

Formula parse_formula(std::string_view text) {
  Lexer lex(text);
  FormulaParser p(lex);
  Formula f = p.implication();
  expect_end(lex);
  return f;
}

LabelledFormula parse_labelled(std::string_view text) {
  Lexer lex(text);
  LabelledParser p(lex);
  LabelledFormula f = p.labelled();
  expect_end(lex);
  return f;
}

Sequent parse_sequent(std::string_view text) {
  Lexer lex(text);
  LabelledParser p(lex);
  Sequent s;
  s.antecedent = p.list(Tok::Seq);
  lex.expect(Tok::Seq, "'=>'");
  s.succedent = p.list(Tok::End);
  expect_end(lex);
  for (const auto& f : s.succedent)
    if (f.is_relational()) throw ParseError(0, "relational atom in succedent: " + render(f));
  return s;
}

WorldLabel parse_world_label(std::string_view text) {
  Lexer lex(text);
  LabelledParser p(lex);
  WorldLabel x = p.world();
  expect_end(lex);
  return x;
}

NbhdLabel parse_nbhd_label(std::string_view text) {
  Lexer lex(text);
  LabelledParser p(lex);
  NbhdLabel a = p.nbhd();
  expect_end(lex);
  return a;
}

std::string render(const LabelledFormula& f) {
  switch (f.kind()) {
    case LfKind::InN: return to_string(f.nbhd()) + " in N(" + to_string(f.world()) + ")";
    case LfKind::MemberOf: return to_string(f.world()) + " in " + to_string(f.nbhd());
    case LfKind::SubsetOf: return to_string(f.nbhd()) + " <= " + to_string(f.nbhd2());
    case LfKind::At: return to_string(f.world()) + " : " + render_formula(f.formula());
    case LfKind::ForcesAll: return to_string(f.nbhd()) + " ||-A " + render_formula(f.formula());
    case LfKind::ForcesSome: return to_string(f.nbhd()) + " ||-E " + render_formula(f.formula());
    case LfKind::CondAt:
      return to_string(f.world()) + " ||-" + to_string(f.nbhd()) + " " +
             render_formula(f.formula()) + " ; " + render_formula(f.formula2());
  }
  return {};
}

std::string render(const Sequent& s) {
  std::string out;
  bool first = true;
  for (const auto& f : s.antecedent) {
    if (!first) out += ", ";
    out += render(f);
    first = false;
  }
  out += out.empty() ? "=>" : " =>";
  first = true;
  for (const auto& f : s.succedent) {
    out += first ? " " : ", ";
    out += render(f);
    first = false;
  }
  return out;
}

}  // namespace pcl
