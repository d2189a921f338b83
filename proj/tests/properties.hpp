#pragma once

#include <cstdint>
#include <random>
#include <string>

#include "dclunie/diffpoly.hpp"
#include "dclunie/field.hpp"
#include "dclunie/laurent.hpp"

namespace dcltest {

struct SuiteResult {
    int passed = 0;
    int total = 0;
    std::string first_failure;

    bool ok() const { return total > 0 && passed == total; }
    void record(bool good, const std::string& what) {
        ++total;
        if (good) ++passed;
        else if (first_failure.empty()) first_failure = what;
    }
};

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int range(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

    dclunie::Rational rational(int span = 5);
    dclunie::Rational nonzero_rational(int span = 5);
    // z, g(z), g(z+1), h(z) with period 2, constant c
    dclunie::Var coefficient_var();
    dclunie::Poly poly(int max_terms = 3, int max_exp = 2);
    dclunie::Poly nonzero_poly(int max_terms = 3, int max_exp = 2);
    dclunie::FieldElem field();
    dclunie::FieldElem nonzero_field();
    // Polynomial in z (and g(z) when allowed) of degree <= 1.
    dclunie::FieldElem small_coefficient(bool symbols);
    dclunie::WPolynomial wpoly(int deg, bool symbols);
    dclunie::LaurentSeries series(int val, int len, bool unit_leading);
    std::string equation_text();

private:
    std::mt19937_64 rng_;
};

// 500 cases: field axioms, canonical form and the shift action.
SuiteResult field_suite(std::uint64_t seed, int cases = 500);
// 200 cases: gcd recovers a planted common factor; resultants vanish on it and are multiplicative.
SuiteResult gcd_suite(std::uint64_t seed, int cases = 200);
// 100 parsed equations: canonical text is a fixed point of parse -> normalize -> print.
SuiteResult roundtrip_suite(std::uint64_t seed, int cases = 100);
// 200 cases: truncated ring axioms and division by units.
SuiteResult laurent_suite(std::uint64_t seed, int cases = 200);

}  // namespace dcltest
