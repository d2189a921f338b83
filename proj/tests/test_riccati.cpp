#include <doctest.h>

#include "dclunie/riccati.hpp"

using namespace dclunie;

namespace {

SymbolTable abc() {
    SymbolTable s;
    for (const char* n : {"a", "b", "c"}) s.declare(n, SymbolKind::opaque_function);
    return s;
}

FieldElem jet(const char* name, int site) {
    return FieldElem::variable(Var::jet(name, site, 0, 0));
}

}  // namespace

TEST_CASE("Riccati form is read from the right-hand side") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = (z*w + 1)/(w - (2*z + 1))");
    FieldElem z = FieldElem::variable(Var::z());
    CHECK(rq.a == z);
    CHECK(rq.b == FieldElem(1));
    CHECK(rq.c == FieldElem(2) * z + FieldElem(1));
    CHECK(rq.discriminant() == FieldElem(2) * z * z + z + FieldElem(1));
    CHECK_THROWS_AS(riccati_from_text("w(z+1) = w^2"), Error);
}

TEST_CASE("local expansion for symbolic a, b, c") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = (a*w + b)/(w - c)", abc());
    for (int k = 1; k <= 2; ++k) {
        CAPTURE(k);
        RiccatiExpansion ex = local_expansion_check(rq, k);
        CHECK(ex.residual_zero);
        CHECK(ex.template_match);
        CHECK(ex.post_value == jet("a", 0));
        CHECK(ex.pre_value == jet("c", -1));
        CHECK(ex.post_gap == k);
        CHECK(ex.pre_gap == k);
        // gamma * beta = a c + b at zhat, alpha * beta = a c + b at zhat - 1
        FieldElem beta = ex.pole.leading();
        CHECK(ex.gamma * beta == jet("a", 0) * jet("c", 0) + jet("b", 0));
        CHECK(ex.alpha * beta == jet("a", -1) * jet("c", -1) + jet("b", -1));
        CHECK(ex.pole.valuation() == -k);
    }
}

TEST_CASE("local expansion of w(z+1) = 1/w") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = 1/w");
    RiccatiExpansion ex = local_expansion_check(rq, 1);
    CHECK(ex.template_match);
    CHECK(ex.post_value.is_zero());
    CHECK(ex.pre_value.is_zero());
    // w(zhat+1) = 1/w(zhat) exactly
    LaurentSeries inv = ex.pole.inverse(nullptr, ex.post.trunc());
    CHECK(ex.post.agrees_with(inv));
}

TEST_CASE("auxiliary g is finite at both pole types") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = (a*w + b)/(w - c)", abc());
    for (int k = 1; k <= 3; ++k) {
        AuxiliaryG g = auxiliary_g(rq, k);
        CAPTURE(k);
        CHECK(g.valuation_at_pole_of_w >= 0);
        CHECK(g.valuation_at_pole_of_shift >= 0);
        CHECK(g.finite());
    }
}

TEST_CASE("linearization reproduces the map") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = (z*w + 1)/(w - z^2)");
    LinearPair lp = linearize(rq);
    CHECK(lp.det == -rq.discriminant());
    FieldElem det = lp.M[0][0] * lp.M[1][1] - lp.M[0][1] * lp.M[1][0];
    CHECK(det == lp.det);
    // w = p/q with q = 1: (M00 w + M01)/(M10 w + M11) = (a w + b)/(w - c)
    FieldElem w = FieldElem::variable(Var::aux("probe"));
    FieldElem lhs = (lp.M[0][0] * w + lp.M[0][1]) / (lp.M[1][0] * w + lp.M[1][1]);
    CHECK(lhs == (rq.a * w + rq.b) / (w - rq.c));
}

TEST_CASE("degenerate equations are rejected") {
    RiccatiEquation rq{FieldElem(1), FieldElem(-1), FieldElem(1)};
    CHECK(rq.degenerate());
    CHECK_THROWS_AS(rq.require_nondegenerate(), DegenerateError);
    CHECK_THROWS_AS(linearize(rq), DegenerateError);
    CHECK_THROWS_AS(linearize(riccati_from_text("w(z+1) = w/w")), UnsupportedError);
}
