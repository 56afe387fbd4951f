#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qmorse/coefficient.hpp"
#include "qmorse/milnor.hpp"
#include "qmorse/qseries.hpp"

namespace qmorse {

// Grammar:
//   expr   := term (('+' | '-') term)*
//   term   := factor (('*' | '/') factor)*
//   factor := atom ['^' uint]
//   atom   := number | symbol | '(' expr ')' | '-' factor
// Juxtaposition is an error. Numbers are exact ("3", "3/4" via '/', "0.25").
struct Expr {
  enum class Kind { number, symbol, negate, add, subtract, multiply, divide, power };

  Kind kind = Kind::number;
  std::size_t offset = 0;
  Rational value;        // number
  std::string name;      // symbol
  unsigned exponent = 0; // power
  std::vector<Expr> args;
};

// Symbols accepted by the operator-algebra elaborator.
const std::vector<std::string>& operator_symbols();

// Throws ParseError with the byte offset and the expected tokens. Identifiers
// outside `symbols` are rejected at their offset.
Expr parse_expr(std::string_view text, const std::vector<std::string>& symbols = operator_symbols());

// q, p, a, ad, hbar, t, i, sqrt2; products keep operand order and are normal
// ordered at the given caps.
QSeries elaborate(const Expr& ast, const Truncation& truncation);
QSeries parse_qseries(std::string_view text, const Truncation& truncation);

// Commutative symbol in x, y (q, p accepted as aliases) and the parameters.
// Returns F at lambda = 0 and the first lambda derivatives there.
PlaneFamily parse_plane_family(std::string_view text, const std::vector<std::string>& params = {});

std::string to_string(const Expr& ast);

}  // namespace qmorse
