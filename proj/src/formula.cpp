#include "mefit/formula.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <utility>

namespace mefit {

Term::Term(std::vector<std::string> variables)
    : variables_(std::move(variables)) {
  std::sort(variables_.begin(), variables_.end());
  variables_.erase(std::unique(variables_.begin(), variables_.end()),
                   variables_.end());
}

bool Term::contains(const std::string& name) const {
  return std::binary_search(variables_.begin(), variables_.end(), name);
}

Term Term::combined_with(const Term& other) const {
  std::vector<std::string> merged;
  merged.reserve(variables_.size() + other.variables_.size());
  std::set_union(variables_.begin(), variables_.end(),
                 other.variables_.begin(), other.variables_.end(),
                 std::back_inserter(merged));
  Term t;
  t.variables_ = std::move(merged);
  return t;
}

Term Term::without(const std::string& name) const {
  Term t;
  for (const auto& v : variables_) {
    if (v != name) t.variables_.push_back(v);
  }
  return t;
}

std::string Term::label() const {
  std::string out;
  for (const auto& v : variables_) {
    if (!out.empty()) out += ':';
    out += v;
  }
  return out;
}

bool Formula::has_term(const Term& t) const {
  return std::find(terms.begin(), terms.end(), t) != terms.end();
}

namespace {

enum class TokKind {
  ident,
  one,
  zero,
  tilde,
  plus,
  minus,
  star,
  colon,
  lparen,
  rparen,
  end
};

struct Token {
  TokKind kind;
  std::string text;
  std::size_t pos = 0;
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::vector<Token> lex(const std::string& text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (is_ident_start(c)) {
      while (i < text.size() && is_ident_char(text[i])) ++i;
      out.push_back({TokKind::ident, text.substr(start, i - start), start});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() &&
             (std::isdigit(static_cast<unsigned char>(text[i])) ||
              text[i] == '.')) {
        ++i;
      }
      std::string num = text.substr(start, i - start);
      if (num == "1") {
        out.push_back({TokKind::one, num, start});
      } else if (num == "0") {
        out.push_back({TokKind::zero, num, start});
      } else {
        throw FormulaError("numeric literal '" + num +
                               "' is not supported (only 0 and 1)",
                           start);
      }
      continue;
    }
    switch (c) {
      case '~': out.push_back({TokKind::tilde, "~", start}); break;
      case '+': out.push_back({TokKind::plus, "+", start}); break;
      case '-': out.push_back({TokKind::minus, "-", start}); break;
      case '*': out.push_back({TokKind::star, "*", start}); break;
      case ':': out.push_back({TokKind::colon, ":", start}); break;
      case '(': out.push_back({TokKind::lparen, "(", start}); break;
      case ')': out.push_back({TokKind::rparen, ")", start}); break;
      case '^':
        throw FormulaError("power operator '^' is not supported", start);
      case '/':
        throw FormulaError("nesting operator '/' is not supported", start);
      case '%':
        throw FormulaError("'%'-delimited operators (e.g. %in%) are not supported",
                           start);
      default:
        throw FormulaError(std::string("unexpected character '") + c + "'",
                           start);
    }
    ++i;
  }
  out.push_back({TokKind::end, "", text.size()});
  return out;
}

// Value of a sub-expression during evaluation: an ordered unique term
// list plus the most recent explicit intercept mention, if any.
struct Value {
  std::vector<Term> terms;
  enum class Mention { none, on, off } intercept = Mention::none;
};

void append_unique(std::vector<Term>& terms, const Term& t) {
  if (std::find(terms.begin(), terms.end(), t) == terms.end()) {
    terms.push_back(t);
  }
}

Value add(Value a, const Value& b) {
  for (const auto& t : b.terms) append_unique(a.terms, t);
  if (b.intercept != Value::Mention::none) a.intercept = b.intercept;
  return a;
}

Value subtract(Value a, const Value& b) {
  for (const auto& t : b.terms) {
    a.terms.erase(std::remove(a.terms.begin(), a.terms.end(), t),
                  a.terms.end());
  }
  // Subtracting a 1 removes the intercept; a 0 mention removes it too.
  if (b.intercept != Value::Mention::none) a.intercept = Value::Mention::off;
  return a;
}

// Terms an operand contributes to a `:` product; an explicit `1` acts
// as the empty term, so 1:X reduces to X.
std::vector<Term> cross_operands(const Value& v) {
  std::vector<Term> out = v.terms;
  if (v.intercept == Value::Mention::on) out.insert(out.begin(), Term{});
  return out;
}

Value cross(const Value& a, const Value& b, std::size_t op_pos) {
  std::vector<Term> lhs = cross_operands(a);
  std::vector<Term> rhs = cross_operands(b);
  if (lhs.empty() || rhs.empty()) {
    throw FormulaError("':' requires a variable operand on both sides",
                       op_pos);
  }
  Value out;
  for (const auto& l : lhs) {
    for (const auto& r : rhs) {
      append_unique(out.terms, l.combined_with(r));
    }
  }
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : tokens_(lex(text)) {}

  Formula run() {
    if (peek().kind != TokKind::ident) {
      throw FormulaError("left side must be a single variable name",
                         peek().pos);
    }
    Formula f;
    f.response = next().text;
    if (peek().kind != TokKind::tilde) {
      throw FormulaError("expected '~' after the response variable",
                         peek().pos);
    }
    next();
    if (peek().kind == TokKind::end) {
      throw FormulaError("empty right-hand side", peek().pos);
    }
    Value v = parse_expr();
    if (peek().kind != TokKind::end) {
      throw FormulaError("unexpected '" + peek().text + "'", peek().pos);
    }
    f.intercept = v.intercept != Value::Mention::off;
    f.terms = std::move(v.terms);
    std::stable_sort(f.terms.begin(), f.terms.end(),
                     [](const Term& a, const Term& b) {
                       return a.order() < b.order();
                     });
    return f;
  }

 private:
  const Token& peek() const { return tokens_[index_]; }
  const Token& next() { return tokens_[index_++]; }
  bool accept(TokKind k) {
    if (peek().kind == k) {
      ++index_;
      return true;
    }
    return false;
  }

  Value parse_expr() {
    Value acc;
    bool negate = false;
    if (accept(TokKind::minus)) {
      negate = true;
    } else {
      accept(TokKind::plus);
    }
    Value first = parse_crossed();
    acc = negate ? subtract(Value{}, first) : first;
    while (peek().kind == TokKind::plus || peek().kind == TokKind::minus) {
      bool minus = next().kind == TokKind::minus;
      Value rhs = parse_crossed();
      acc = minus ? subtract(acc, rhs) : add(acc, rhs);
    }
    return acc;
  }

  // a*b expands to a + b + a:b and asserts the intercept when either
  // side mentions it.
  Value parse_crossed() {
    Value acc = parse_interaction();
    while (peek().kind == TokKind::star) {
      std::size_t pos = next().pos;
      Value rhs = parse_interaction();
      Value expanded = add(add(acc, rhs), cross(acc, rhs, pos));
      acc = std::move(expanded);
    }
    return acc;
  }

  Value parse_interaction() {
    Value acc = parse_primary();
    while (peek().kind == TokKind::colon) {
      std::size_t pos = next().pos;
      Value rhs = parse_primary();
      Value crossed = cross(acc, rhs, pos);
      acc = std::move(crossed);
    }
    return acc;
  }

  Value parse_primary() {
    const Token& tok = peek();
    switch (tok.kind) {
      case TokKind::ident: {
        next();
        if (tok.text == "I" && peek().kind == TokKind::lparen) {
          throw FormulaError("inline expressions I(...) are not supported",
                             tok.pos);
        }
        Value v;
        v.terms.push_back(Term{{tok.text}});
        return v;
      }
      case TokKind::one: {
        next();
        Value v;
        v.intercept = Value::Mention::on;
        return v;
      }
      case TokKind::zero: {
        next();
        Value v;
        v.intercept = Value::Mention::off;
        return v;
      }
      case TokKind::lparen: {
        std::size_t pos = next().pos;
        Value v = parse_expr();
        if (!accept(TokKind::rparen)) {
          throw FormulaError("unbalanced '('", pos);
        }
        return v;
      }
      case TokKind::tilde:
        throw FormulaError("a formula may contain only one '~'", tok.pos);
      default:
        throw FormulaError("expected a variable, 1, 0 or '('", tok.pos);
    }
  }

  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace

Formula parse(const std::string& text) { return Parser(text).run(); }

std::string render(const Formula& f) {
  std::string out = f.response + " ~ ";
  if (f.terms.empty()) {
    out += f.intercept ? "1" : "0";
    return out;
  }
  for (std::size_t i = 0; i < f.terms.size(); ++i) {
    if (i > 0) out += " + ";
    out += f.terms[i].label();
  }
  if (!f.intercept) out += " - 1";
  return out;
}

bool formulas_equal(const Formula& a, const Formula& b) {
  if (a.response != b.response || a.intercept != b.intercept) return false;
  if (a.terms.size() != b.terms.size()) return false;
  auto key = [](const Term& t) {
    return std::make_pair(t.order(), t.variables());
  };
  std::vector<Term> ta = a.terms;
  std::vector<Term> tb = b.terms;
  auto lt = [&](const Term& x, const Term& y) { return key(x) < key(y); };
  std::sort(ta.begin(), ta.end(), lt);
  std::sort(tb.begin(), tb.end(), lt);
  return ta == tb;
}

}  // namespace mefit
