#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "papar/value.hpp"

namespace papar {

// Row-predicate expression language (a reduced Vega expression syntax):
//   literals      1, 2.5, "a", 'a', true, false, null
//   field refs    datum.field, datum["field"]
//   arithmetic    + - * / %   (unary -)
//   comparison    == != < <= > >=
//   logical       && || !
//   grouping      ( )
//
// Semantics: division or modulo by zero yields null; any operator applied to
// null yields null except == and != which compare structurally. && and ||
// short-circuit. `+` concatenates when either side is a string.
class Expr {
 public:
  enum class Op { Literal, Field, Neg, Not, Add, Sub, Mul, Div, Mod, Eq, Ne, Lt, Le, Gt, Ge, And, Or };

  struct Node {
    Op op = Op::Literal;
    Value literal;
    std::string field;
    std::size_t column = 0;
    std::unique_ptr<Node> lhs;
    std::unique_ptr<Node> rhs;
  };

  // Throws Error{ExprSyntax}.
  static Expr parse(std::string_view source);

  const std::string& source() const { return source_; }
  // Distinct field names in first-reference order.
  std::vector<std::string> fields() const;

  // Resolves field references to column positions; throws Error{UnknownField}.
  void bind(const std::vector<std::string>& columns);
  bool bound() const { return bound_; }

  // Requires bind(); `cells` follows the bound column order.
  Value eval(std::span<const Value> cells) const;

  Expr(Expr&&) noexcept = default;
  Expr& operator=(Expr&&) noexcept = default;

 private:
  Expr() = default;

  std::string source_;
  std::unique_ptr<Node> root_;
  bool bound_ = false;
};

// Parse, bind against the record's keys, evaluate. Throws UnknownField.
Value eval_expr(std::string_view source, const Record& row);

// Truthiness used by filter: true, non-zero numbers, non-empty strings.
bool truthy(const Value& v);

}  // namespace papar
