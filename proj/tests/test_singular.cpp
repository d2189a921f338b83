#include <doctest.h>

#include "dclunie/singular.hpp"

using namespace dclunie;

namespace {

SymbolTable coefficient_symbols() {
    SymbolTable s;
    for (const char* n : {"a0", "a1", "a2", "a3", "b", "c"}) s.declare(n, SymbolKind::opaque_function);
    return s;
}

FieldElem jet(const char* name, int site) {
    return FieldElem::variable(Var::jet(name, site, 0, 0));
}

const char* kDPI = "w(z+1) + w(z-1) = (a2*w(z)^2 + a1*w(z) + a0)/w(z)^2";
const char* kDPIV = "w(z+1)*w(z-1) + w(z+1)*w + w*w(z-1) = (a3*w^3 + a2*w^2 + a1*w + a0)/((w-b)*(w-c))";

}  // namespace

TEST_CASE("top shift solution of the d-PI class") {
    NormalizedEquation e = parse_and_normalize(kDPI, coefficient_symbols());
    TopShiftSolution s = solve_top_shift(e);
    CHECK(s.direction == Direction::forward);
    CHECK(solve_bottom_shift(e).has_value());
    CHECK_THROWS_AS(solve_top_shift(parse_and_normalize("w(z+2) + w = 1/w")), UnsupportedError);
}

TEST_CASE("roots of H with multiplicity") {
    FieldElem z = FieldElem::variable(Var::z());
    WPolynomial lin({-z, FieldElem(1)});
    WPolynomial p = lin * lin * WPolynomial({FieldElem(1), FieldElem(1)});
    HRootResult r = roots_of(p);
    REQUIRE(r.roots.size() == 2);
    int total = 0;
    for (const auto& h : r.roots) total += h.multiplicity;
    CHECK(total == 3);
    CHECK(r.unsupported.empty());
    HRootResult irr = roots_of(WPolynomial({FieldElem(1), FieldElem(0), FieldElem(1)}));
    CHECK(irr.roots.empty());
    CHECK(irr.unsupported.size() == 1);
}

TEST_CASE("d-PI: a zero of order k0 is followed by a pole of order at least 2 k0") {
    NormalizedEquation e = parse_and_normalize(kDPI, coefficient_symbols());
    for (int k0 = 1; k0 <= 3; ++k0) {
        FreshSeed seed("s");
        int depth = 2 * k0 + 4;
        std::map<int, LaurentSeries> sites;
        sites[-1] = generic_finite_series(seed, depth);
        // w(zhat + t) = t^k0 (v + ...), v nonzero
        sites[0] = generic_pole_series(seed, k0, depth).inverse(nullptr, depth);
        REQUIRE(sites[0].valuation() == k0);
        Propagation p = propagate(e, sites, 1);
        CAPTURE(k0);
        CHECK(p.value.valuation() <= -2 * k0);
    }
}

TEST_CASE("d-PI: both families are pole order 2k and Riccati-obstructing") {
    NormalizedEquation e = parse_and_normalize(kDPI, coefficient_symbols());
    EnumerationResult r = enumerate_pole_patterns(e);
    REQUIRE(r.families.size() == 2);
    for (const auto& f : r.families) {
        CHECK(f.multiplier == 2);
        CHECK(f.parametric);
    }
    AdmissibilityReport a = riccati_admissibility(r.families);
    CHECK(a.verdict == AdmissibilityVerdict::no_candidate);
    for (const auto& f : r.families) CHECK(a.obstructing(f.id));
}

TEST_CASE("d-PIV class: four root families carry the expected triples") {
    NormalizedEquation e = parse_and_normalize(kDPIV, coefficient_symbols());
    SingularOptions opt;
    opt.max_order = 2;
    EnumerationResult r = enumerate_pole_patterns(e, opt);
    REQUIRE(r.families.size() == 5);
    FieldElem a3 = jet("a3", 0);
    std::vector<std::pair<FieldElem, FieldElem>> expected = {
        {jet("b", -1), a3 - jet("b", -1)},
        {jet("c", -1), a3 - jet("c", -1)},
        {a3 - jet("b", 1), jet("b", 1)},
        {a3 - jet("c", 1), jet("c", 1)},
    };
    for (const auto& [pre, post] : expected) {
        bool found = false;
        for (const auto& f : r.families)
            found = found || (f.pre_finite && f.post_finite && f.pre_value == pre && f.post_value == post &&
                              f.multiplier == 1);
        INFO(pre.to_string(), " / ", post.to_string());
        CHECK(found);
    }
    AdmissibilityReport a = riccati_admissibility(r.families);
    CHECK(a.verdict == AdmissibilityVerdict::single_family_candidates);
    CHECK(a.candidates.size() == 4);
}

TEST_CASE("every sample of a Riccati equation matches the template") {
    NormalizedEquation e = parse_and_normalize("w(z+1) = (z*w + 1)/(w - z)");
    EnumerationResult r = enumerate_pole_patterns(e);
    REQUIRE(!r.families.empty());
    AdmissibilityReport a = riccati_admissibility(r.families);
    CHECK(a.verdict == AdmissibilityVerdict::single_family_candidates);
    for (const auto& f : r.families) {
        for (const auto& s : f.samples) {
            CHECK(s.pole_order == s.k);
            CHECK(s.post_contact.order >= s.pole_order);
        }
    }
}

TEST_CASE("residual of the propagated series vanishes") {
    NormalizedEquation e = parse_and_normalize(kDPI, coefficient_symbols());
    LocalEngine eng(e);
    FreshSeed seed("r");
    std::map<int, LaurentSeries> sites;
    sites[-1] = generic_finite_series(seed, 5);
    sites[0] = generic_pole_series(seed, 1, 5).inverse(nullptr, 5);
    Assumptions as;
    sites[1] = eng.propagate(sites, 1, as);
    LaurentSeries res = eng.residual(sites, 0);
    CHECK(res.is_zero());
}

TEST_CASE("time reversal and site values") {
    FieldElem x = jet("b", -1) + jet("a3", 0);
    CHECK(reflect_sites(x) == jet("b", 1) + jet("a3", 0));
    auto f = as_function_of_z(x);
    REQUIRE(f.has_value());
    SymbolTable s = coefficient_symbols();
    CHECK(*f == FieldElem::variable(s.instance("b", -1)) + FieldElem::variable(s.instance("a3", 0)));
}
