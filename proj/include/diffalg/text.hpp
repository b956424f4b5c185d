#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "diffalg/operator.hpp"
#include "diffalg/pdo.hpp"

namespace diffalg {

/// Parsed expression tree. Multiplication is kept in source order (noncommutative).
struct Expr {
  enum class Kind { number, symbol, add, sub, neg, mul, pow, bracket };
  Kind kind = Kind::number;
  mpq_class value;           // number
  std::string name;          // symbol; for d[var] the name is "d" and `var` holds the variable
  std::string var;
  int order = -1;            // divided-power suffix dx1[k], d[t]^[k]; -1 when absent
  int exponent = 0;          // pow
  std::vector<std::unique_ptr<Expr>> args;
  int line = 1;
  int column = 1;
};

/// Grammar: expr = term {(+|-) term}; term = unary {* unary}; unary = - unary | power;
/// power = primary [^ N]; primary = N [/ N] | symbol | ( expr ) | [ expr , expr ].
std::unique_ptr<Expr> parse_expr(const std::string& text);

/// Symbols h, xi, yi (left multiplications), dh, dxi, dyi with optional [k], Dh.
DOperator parse_operator(const std::string& text, const HContext& ctx);
/// As parse_operator, but the value must be a left multiplication.
HElement parse_element(const std::string& text, const HContext& ctx);
/// Ring variables (multiplications) and d[var], d[var]^[k].
PDOp parse_pdop(const std::string& text, const PolyRing& ring);
Poly parse_poly(const std::string& text, const PolyRing& ring);
Scalar parse_scalar(const std::string& text, Field f);

/// The multiplication part when every term has no partials.
std::optional<HElement> as_element(const DOperator& d);
std::optional<Poly> as_poly(const PDOp& d);

std::string to_text(const Scalar& c);
std::string to_text(const HElement& a);
std::string to_text(const DOperator& d);
std::string to_text(const Poly& p);
std::string to_text(const PDOp& d);
/// JSON array of arrays of operator strings.
std::string matrix_to_text(const std::vector<std::vector<PDOp>>& m);
std::vector<std::vector<PDOp>> parse_pdop_matrix(const std::string& text, const PolyRing& ring);

/// One JSON record per line: a header, then one record per term.
std::string to_structured(const HElement& a);
std::string to_structured(const DOperator& d);
std::string to_structured(const Poly& p);
std::string to_structured(const PDOp& d);

/// "-inf" for the zero sentinel.
std::string degree_text(int d);

}  // namespace diffalg
