#include <doctest.h>

#include "dclunie/clunie.hpp"
#include "properties.hpp"

using namespace dclunie;

namespace {

SymbolTable coefficient_symbols() {
    SymbolTable s;
    for (const char* n : {"a0", "a1", "a2", "a3", "b", "c"}) s.declare(n, SymbolKind::opaque_function);
    return s;
}

// Invariants read off the normalized pieces term by term.
Invariants brute_invariants(const NormalizedEquation& e) {
    Invariants v;
    bool first = true;
    for (const auto& [l, c] : e.P.terms()) {
        int total = 0, shifted = 0;
        for (std::size_t j = 0; j < l.size(); ++j) {
            total += l[j];
            if (j > 0) shifted += l[j];
        }
        v.deg_P = std::max(v.deg_P, total);
        v.kappa_P = std::max(v.kappa_P, shifted);
        v.ord0_P = first ? l[0] : std::min(v.ord0_P, l[0]);
        first = false;
    }
    v.deg_H = e.H.degree();
    v.deg_Q = e.Q.degree();
    int i = 0;
    while (e.Q.coeff(i).is_zero()) ++i;
    v.ord0_Q = i;
    return v;
}

}  // namespace

TEST_CASE("d-PIV class invariants") {
    NormalizedEquation e = parse_and_normalize(
        "w(z+1)*w(z-1) + w(z+1)*w + w*w(z-1) = (a3*w^3 + a2*w^2 + a1*w + a0)/((w-b)*(w-c))", coefficient_symbols());
    TheoremVerdict v = full_report(e);
    CHECK(v.invariants.kappa_P == 2);
    CHECK(v.invariants.deg_Q == 3);
    CHECK(v.invariants.deg_P == 2);
    CHECK(v.invariants.deg_H == 2);
    CHECK(v.invariants.ord0_Q == 0);
    CHECK(v.invariants.d_w == 4);
    CHECK(v.pole_density.applies);
    CHECK(v.proximity.applies);
    CHECK(v.proximity.borderline);
}

TEST_CASE("d-PI class: proximity theorem applies") {
    NormalizedEquation e =
        parse_and_normalize("w(z+1) + w(z-1) = (a2*w(z)^2 + a1*w(z) + a0)/w(z)^2", coefficient_symbols());
    TheoremVerdict v = full_report(e);
    CHECK(v.invariants.deg_P == 1);
    CHECK(v.invariants.kappa_P == 1);
    CHECK(v.invariants.deg_H == 2);
    CHECK(v.invariants.ord0_Q == 0);
    CHECK(v.invariants.d_w == 3);
    CHECK(v.proximity.applies);
    bool m_small = false, n_full = false;
    for (const auto& c : v.conclusions) {
        m_small = m_small || c.tag == "proximity";
        n_full = n_full || c.tag == "pole-count";
    }
    CHECK(m_small);
    CHECK(n_full);
}

TEST_CASE("neither theorem for a linear equation") {
    NormalizedEquation e = parse_and_normalize("w(z+1)*w = z*w^2");
    TheoremVerdict v = full_report(e);
    CHECK(!v.pole_density.applies);
    CHECK(v.conclusions.size() == (v.proximity.applies ? 2u : 0u));
}

TEST_CASE("invariants agree with a term-by-term reading on random equations") {
    dcltest::Gen g(0xc1c1);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 60; ++i) {
        std::string text = g.equation_text();
        NormalizedEquation e;
        try {
            e = parse_and_normalize(text);
        } catch (const Error&) {
            continue;
        }
        ++checked;
        Invariants a = compute_invariants(e), b = brute_invariants(e);
        INFO(text);
        CHECK(a.deg_P == b.deg_P);
        CHECK(a.kappa_P == b.kappa_P);
        CHECK(a.ord0_P == b.ord0_P);
        CHECK(a.deg_H == b.deg_H);
        CHECK(a.deg_Q == b.deg_Q);
        CHECK(a.ord0_Q == b.ord0_Q);
    }
    CHECK(checked >= 30);
}

TEST_CASE("invariants do not see a common factor or a coefficient shift") {
    SymbolTable s = coefficient_symbols();
    Invariants base = compute_invariants(parse_and_normalize("w(z+1) + w(z-1) = (z*w^2 + 1)/(w^2 - z)", s));
    Invariants padded = compute_invariants(
        parse_and_normalize("w(z+1) + w(z-1) = ((z*w^2 + 1)*(w - b))/((w^2 - z)*(w - b))", s));
    Invariants moved = compute_invariants(parse_and_normalize("w(z+1) + w(z-1) = ((z+1)*w^2 + 1)/(w^2 - z - 1)", s));
    CHECK(base == padded);
    CHECK(base == moved);
}
