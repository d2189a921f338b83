#pragma once

#include <memory>
#include <string>
#include <vector>

#include "dclunie/diffpoly.hpp"
#include "dclunie/errors.hpp"
#include "dclunie/field.hpp"

namespace dclunie {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { number, z, symbol, watom, add, sub, mul, div, pow, neg };
    Kind kind = Kind::number;
    Rational value;      // number
    std::string name;    // symbol
    int symbol_shift = 0;  // symbol instance g(z+k)
    Shift shift;         // watom
    int exponent = 0;    // pow
    ExprPtr lhs, rhs;    // binary operands; neg and pow use lhs
};

struct RawEquation {
    ExprPtr lhs;
    ExprPtr rhs;
    SymbolTable symbols;  // table passed in, plus "#symbol" header declarations
};

// Warning tied to a documented design decision id.
struct Warning {
    std::string id;
    std::string message;
};

struct NormalizedEquation {
    DiffPoly P;
    WPolynomial H;  // monic
    WPolynomial Q;
    SymbolTable symbols;
    std::vector<Warning> warnings;

    const std::vector<Shift>& shifts() const { return P.shifts(); }
};

// Grammar:
//   equation := expr "=" expr
//   expr     := term (("+"|"-") term)*
//   term     := factor (("*"|"/") factor)*
//   factor   := "-" factor | base ("^" ["-"] integer)?
//   base     := number | "z" | symbol | watom | "(" expr ")"
//   symbol   := ident ("(" "z" (("+"|"-") integer)? ")")?
//   watom    := "w" ("(" "z" (("+"|"-") shiftconst)* ")")?
//   shiftconst := rational | rational ["*"] "i" | "i"
// Lines starting with "#symbol" declare symbols; other "#" lines are comments.
// ParseError carries line and column.
RawEquation parse_equation(const std::string& text, const SymbolTable& symbols = {});

// Value of an expression tree in the coefficient field (w atoms become w_atom vars).
FieldElem evaluate_expr(const Expr& e, const SymbolTable& symbols);

// H*P = Q split: P = lhs, H = D/g and Q = N/g for rhs = N/D, g = gcd(N, D), H monic.
// NormalizeError on shape violations.
NormalizedEquation normalize(const RawEquation& eq);

NormalizedEquation parse_and_normalize(const std::string& text, const SymbolTable& symbols = {});

// "#symbol" header lines, then "P = (Q) / (H)" (or "P = Q" when H = 1).
std::string print_canonical(const NormalizedEquation& eq);

// Header line for one symbol: "#symbol g period=2".
std::string symbol_header(const SymbolEntry& e);

}  // namespace dclunie
