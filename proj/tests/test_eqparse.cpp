#include <doctest.h>

#include "dclunie/eqparse.hpp"

using namespace dclunie;

namespace {

SymbolTable d_piv_symbols() {
    SymbolTable s;
    for (const char* n : {"a0", "a1", "a2", "a3", "b", "c"}) s.declare(n, SymbolKind::opaque_function);
    return s;
}

const char* kDPIV = "w(z+1)*w(z-1) + w(z+1)*w + w*w(z-1) = (a3*w^3 + a2*w^2 + a1*w + a0)/((w-b)*(w-c))";

}  // namespace

TEST_CASE("unary minus binds looser than powers") {
    FieldElem a = evaluate_expr(*parse_equation("w = -z^2").rhs, {});
    FieldElem z = FieldElem::variable(Var::z());
    CHECK(a == -(z * z));
    FieldElem b = evaluate_expr(*parse_equation("w = (-z)^2").rhs, {});
    CHECK(b == z * z);
    FieldElem c = evaluate_expr(*parse_equation("w = 2^-1*z - -3").rhs, {});
    CHECK(c == z / FieldElem(2) + FieldElem(3));
}

TEST_CASE("parse errors carry a position") {
    try {
        parse_equation("w(z+1) = (w + ");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
        CHECK(e.column() > 1);
    }
    CHECK_THROWS_AS(parse_equation("w(z+1) = foo(z)"), ParseError);
    CHECK_THROWS_AS(parse_equation("w(z+1) w"), ParseError);
    CHECK_THROWS_AS(parse_equation("w = z^1.5"), ParseError);
}

TEST_CASE("d-PIV class normalizes to H P = Q") {
    NormalizedEquation e = parse_and_normalize(kDPIV, d_piv_symbols());
    CHECK(e.H.degree() == 2);
    CHECK(e.Q.degree() == 3);
    CHECK(e.P.deg_w() == 2);
    CHECK(e.P.is_homogeneous());
    CHECK(e.warnings.empty());
    std::string c = print_canonical(e);
    CHECK(print_canonical(parse_and_normalize(c)) == c);
}

TEST_CASE("symbol headers are read from the text") {
    NormalizedEquation e = parse_and_normalize("#symbol g period=2\nw(z+1) + w(z-1) = g(z)*w + 1");
    REQUIRE(e.symbols.find("g"));
    CHECK(e.symbols.find("g")->period == 2);
}

TEST_CASE("normalization rejects shifted atoms on the right") {
    CHECK_THROWS_AS(parse_and_normalize("w(z+1) = w(z-1)/w"), NormalizeError);
}

TEST_CASE("equation without shifted atoms warns DP-1") {
    NormalizedEquation e = parse_and_normalize("w^2 = z");
    REQUIRE(!e.warnings.empty());
    CHECK(e.warnings.front().id == "DP-1");
}

TEST_CASE("common factor of Q and H is removed") {
    NormalizedEquation e = parse_and_normalize("w(z+1) = (w^2 - z^2)/(w - z)");
    CHECK(e.H.degree() == 0);
    CHECK(e.Q.degree() == 1);
}
