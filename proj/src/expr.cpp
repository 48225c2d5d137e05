#include "papar/expr.hpp"

#include <cctype>
#include <cmath>

#include "papar/error.hpp"

namespace papar {
namespace {

using Node = Expr::Node;
using Op = Expr::Op;

enum class Tok { Number, String, Ident, Punct, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0;
  std::size_t pos = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view s) : s_(s) {}

  Token next() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    Token t;
    t.pos = i_;
    if (i_ >= s_.size()) return t;
    const char c = s_[i_];
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i_ + 1 < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_ + 1])))) {
      std::size_t end = i_;
      while (end < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[end])) || s_[end] == '.')) ++end;
      if (end < s_.size() && (s_[end] == 'e' || s_[end] == 'E')) {
        ++end;
        if (end < s_.size() && (s_[end] == '+' || s_[end] == '-')) ++end;
        while (end < s_.size() && std::isdigit(static_cast<unsigned char>(s_[end]))) ++end;
      }
      t.kind = Tok::Number;
      t.text = std::string(s_.substr(i_, end - i_));
      try {
        std::size_t used = 0;
        t.number = std::stod(t.text, &used);
        if (used != t.text.size()) fail("malformed number", i_);
      } catch (const std::invalid_argument&) {
        fail("malformed number", i_);
      }
      i_ = end;
      return t;
    }
    if (c == '"' || c == '\'') {
      std::string out;
      std::size_t j = i_ + 1;
      for (;; ++j) {
        if (j >= s_.size()) fail("unterminated string", i_);
        if (s_[j] == c) break;
        if (s_[j] == '\\' && j + 1 < s_.size()) {
          ++j;
          switch (s_[j]) {
            case 'n': out += '\n'; break;
            case 't': out += '\t'; break;
            default: out += s_[j];
          }
        } else {
          out += s_[j];
        }
      }
      t.kind = Tok::String;
      t.text = std::move(out);
      i_ = j + 1;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$') {
      std::size_t end = i_;
      while (end < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_' || s_[end] == '$')) {
        ++end;
      }
      t.kind = Tok::Ident;
      t.text = std::string(s_.substr(i_, end - i_));
      i_ = end;
      return t;
    }
    static constexpr std::string_view two[] = {"==", "!=", "<=", ">=", "&&", "||"};
    for (auto op : two) {
      if (s_.substr(i_, 2) == op) {
        t.kind = Tok::Punct;
        t.text = std::string(op);
        i_ += 2;
        return t;
      }
    }
    if (std::string_view("+-*/%<>!()[].").find(c) != std::string_view::npos) {
      t.kind = Tok::Punct;
      t.text = std::string(1, c);
      ++i_;
      return t;
    }
    fail(std::string("unexpected character '") + c + "'", i_);
  }

  [[noreturn]] static void fail(const std::string& what, std::size_t pos) {
    throw Error(ErrorCode::ExprSyntax, what + " at offset " + std::to_string(pos));
  }

 private:
  std::string_view s_;
  std::size_t i_ = 0;
};

// Precedence climbing: || < && < equality < relational < additive < multiplicative < unary.
class Parser {
 public:
  explicit Parser(std::string_view s) : lex_(s) { advance(); }

  std::unique_ptr<Node> parse_all() {
    auto n = parse_or();
    if (cur_.kind != Tok::End) Lexer::fail("unexpected '" + cur_.text + "'", cur_.pos);
    return n;
  }

 private:
  void advance() { cur_ = lex_.next(); }
  bool is(std::string_view p) const { return cur_.kind == Tok::Punct && cur_.text == p; }
  void expect(std::string_view p) {
    if (!is(p)) Lexer::fail("expected '" + std::string(p) + "'", cur_.pos);
    advance();
  }

  static std::unique_ptr<Node> binary(Op op, std::unique_ptr<Node> l, std::unique_ptr<Node> r) {
    auto n = std::make_unique<Node>();
    n->op = op;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
  }

  std::unique_ptr<Node> parse_or() {
    auto l = parse_and();
    while (is("||")) {
      advance();
      l = binary(Op::Or, std::move(l), parse_and());
    }
    return l;
  }

  std::unique_ptr<Node> parse_and() {
    auto l = parse_equality();
    while (is("&&")) {
      advance();
      l = binary(Op::And, std::move(l), parse_equality());
    }
    return l;
  }

  std::unique_ptr<Node> parse_equality() {
    auto l = parse_relational();
    while (is("==") || is("!=")) {
      const Op op = is("==") ? Op::Eq : Op::Ne;
      advance();
      l = binary(op, std::move(l), parse_relational());
    }
    return l;
  }

  std::unique_ptr<Node> parse_relational() {
    auto l = parse_additive();
    while (is("<") || is("<=") || is(">") || is(">=")) {
      const Op op = is("<") ? Op::Lt : is("<=") ? Op::Le : is(">") ? Op::Gt : Op::Ge;
      advance();
      l = binary(op, std::move(l), parse_additive());
    }
    return l;
  }

  std::unique_ptr<Node> parse_additive() {
    auto l = parse_multiplicative();
    while (is("+") || is("-")) {
      const Op op = is("+") ? Op::Add : Op::Sub;
      advance();
      l = binary(op, std::move(l), parse_multiplicative());
    }
    return l;
  }

  std::unique_ptr<Node> parse_multiplicative() {
    auto l = parse_unary();
    while (is("*") || is("/") || is("%")) {
      const Op op = is("*") ? Op::Mul : is("/") ? Op::Div : Op::Mod;
      advance();
      l = binary(op, std::move(l), parse_unary());
    }
    return l;
  }

  std::unique_ptr<Node> parse_unary() {
    if (is("!") || is("-")) {
      const Op op = is("!") ? Op::Not : Op::Neg;
      advance();
      auto n = std::make_unique<Node>();
      n->op = op;
      n->lhs = parse_unary();
      return n;
    }
    if (is("+")) {
      advance();
      return parse_unary();
    }
    return parse_primary();
  }

  std::unique_ptr<Node> parse_primary() {
    auto n = std::make_unique<Node>();
    switch (cur_.kind) {
      case Tok::Number:
        n->literal = Value{cur_.number};
        advance();
        return n;
      case Tok::String:
        n->literal = Value{cur_.text};
        advance();
        return n;
      case Tok::Ident: {
        const std::string id = cur_.text;
        const std::size_t pos = cur_.pos;
        advance();
        if (id == "true" || id == "false") {
          n->literal = Value{id == "true"};
          return n;
        }
        if (id == "null") return n;
        if (id != "datum") Lexer::fail("unknown identifier '" + id + "'", pos);
        n->op = Op::Field;
        if (is(".")) {
          advance();
          if (cur_.kind != Tok::Ident) Lexer::fail("expected field name", cur_.pos);
          n->field = cur_.text;
          advance();
        } else if (is("[")) {
          advance();
          if (cur_.kind != Tok::String) Lexer::fail("expected quoted field name", cur_.pos);
          n->field = cur_.text;
          advance();
          expect("]");
        } else {
          Lexer::fail("expected '.' or '[' after datum", cur_.pos);
        }
        return n;
      }
      case Tok::Punct:
        if (is("(")) {
          advance();
          auto inner = parse_or();
          expect(")");
          return inner;
        }
        break;
      case Tok::End: Lexer::fail("unexpected end of expression", cur_.pos);
    }
    Lexer::fail("unexpected '" + cur_.text + "'", cur_.pos);
  }

  Lexer lex_;
  Token cur_;
};

void collect_fields(const Node* n, std::vector<std::string>& out) {
  if (!n) return;
  if (n->op == Op::Field) {
    for (const auto& f : out) {
      if (f == n->field) return;
    }
    out.push_back(n->field);
  }
  collect_fields(n->lhs.get(), out);
  collect_fields(n->rhs.get(), out);
}

void bind_node(Node* n, const std::vector<std::string>& columns) {
  if (!n) return;
  if (n->op == Op::Field) {
    bool found = false;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == n->field) {
        n->column = i;
        found = true;
        break;
      }
    }
    if (!found) throw Error(ErrorCode::UnknownField, "unknown field datum." + n->field, n->field);
  }
  bind_node(n->lhs.get(), columns);
  bind_node(n->rhs.get(), columns);
}

std::optional<double> arith_operand(const Value& v) {
  if (v.is_bool()) return v.boolean() ? 1.0 : 0.0;
  return v.as_number();
}

Value arithmetic(Op op, const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return Value{};
  if (op == Op::Add && (a.is_string() || b.is_string())) return Value{to_display(a) + to_display(b)};
  const auto x = arith_operand(a);
  const auto y = arith_operand(b);
  if (!x || !y) return Value{};
  switch (op) {
    case Op::Add: return Value{*x + *y};
    case Op::Sub: return Value{*x - *y};
    case Op::Mul: return Value{*x * *y};
    case Op::Div: return *y == 0 ? Value{} : Value{*x / *y};
    case Op::Mod: return *y == 0 ? Value{} : Value{std::fmod(*x, *y)};
    default: return Value{};
  }
}

Value relational(Op op, const Value& a, const Value& b) {
  if (a.is_null() || b.is_null()) return Value{};
  int c = 0;
  if (a.is_numeric() && b.is_numeric()) {
    c = compare_values(a, b);
  } else if (a.is_string() && b.is_string()) {
    c = compare_values(a, b);
  } else if (a.is_bool() && b.is_bool()) {
    c = compare_values(a, b);
  } else {
    return Value{false};
  }
  switch (op) {
    case Op::Lt: return Value{c < 0};
    case Op::Le: return Value{c <= 0};
    case Op::Gt: return Value{c > 0};
    case Op::Ge: return Value{c >= 0};
    default: return Value{};
  }
}

bool structurally_equal(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) return *a.as_number() == *b.as_number();
  return a == b;
}

Value eval_node(const Node* n, std::span<const Value> cells) {
  switch (n->op) {
    case Op::Literal: return n->literal;
    case Op::Field: return cells[n->column];
    case Op::Neg: {
      const Value v = eval_node(n->lhs.get(), cells);
      const auto x = arith_operand(v);
      return (v.is_null() || !x) ? Value{} : Value{-*x};
    }
    case Op::Not: {
      const Value v = eval_node(n->lhs.get(), cells);
      return v.is_null() ? Value{} : Value{!truthy(v)};
    }
    case Op::And: {
      const Value l = eval_node(n->lhs.get(), cells);
      if (!l.is_null() && !truthy(l)) return l;
      const Value r = eval_node(n->rhs.get(), cells);
      return l.is_null() ? Value{} : r;
    }
    case Op::Or: {
      const Value l = eval_node(n->lhs.get(), cells);
      if (!l.is_null() && truthy(l)) return l;
      const Value r = eval_node(n->rhs.get(), cells);
      return l.is_null() ? Value{} : r;
    }
    case Op::Eq: return Value{structurally_equal(eval_node(n->lhs.get(), cells), eval_node(n->rhs.get(), cells))};
    case Op::Ne: return Value{!structurally_equal(eval_node(n->lhs.get(), cells), eval_node(n->rhs.get(), cells))};
    case Op::Lt:
    case Op::Le:
    case Op::Gt:
    case Op::Ge: return relational(n->op, eval_node(n->lhs.get(), cells), eval_node(n->rhs.get(), cells));
    default: return arithmetic(n->op, eval_node(n->lhs.get(), cells), eval_node(n->rhs.get(), cells));
  }
}

}  // namespace

Expr Expr::parse(std::string_view source) {
  Expr e;
  e.source_ = std::string(source);
  e.root_ = Parser(source).parse_all();
  return e;
}

std::vector<std::string> Expr::fields() const {
  std::vector<std::string> out;
  collect_fields(root_.get(), out);
  return out;
}

void Expr::bind(const std::vector<std::string>& columns) {
  bind_node(root_.get(), columns);
  bound_ = true;
}

Value Expr::eval(std::span<const Value> cells) const { return eval_node(root_.get(), cells); }

bool truthy(const Value& v) {
  if (v.is_bool()) return v.boolean();
  if (v.is_numeric()) return *v.as_number() != 0 && !std::isnan(*v.as_number());
  if (v.is_string()) return !v.string().empty();
  return false;
}

Value eval_expr(std::string_view source, const Record& row) {
  Expr e = Expr::parse(source);
  std::vector<std::string> columns;
  std::vector<Value> cells;
  for (const auto& [k, v] : row) {
    columns.push_back(k);
    cells.push_back(v);
  }
  e.bind(columns);
  return e.eval(cells);
}

}  // namespace papar
