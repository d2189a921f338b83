#include "properties.hpp"

#include "dclunie/eqparse.hpp"

using namespace dclunie;

namespace dcltest {

Rational Gen::rational(int span) {
    Rational q(range(-span, span), range(1, 4));
    q.canonicalize();
    return q;
}

Rational Gen::nonzero_rational(int span) {
    Rational q = rational(span);
    while (q == 0) q = rational(span);
    return q;
}

Var Gen::coefficient_var() {
    switch (range(0, 5)) {
        case 0:
        case 1:
            return Var::z();
        case 2:
            return Var::function_instance("g", 0, 0);
        case 3:
            return Var::function_instance("g", 1, 0);
        case 4:
            return Var::function_instance("h", range(0, 1), 2);
        default:
            return Var::constant_symbol("c");
    }
}

Poly Gen::poly(int max_terms, int max_exp) {
    Poly p;
    int terms = range(1, max_terms);
    for (int i = 0; i < terms; ++i) {
        Poly t(nonzero_rational());
        int factors = range(0, 2);
        for (int j = 0; j < factors; ++j) t *= Poly::variable(coefficient_var()).pow(range(1, max_exp));
        p += t;
    }
    return p;
}

Poly Gen::nonzero_poly(int max_terms, int max_exp) {
    Poly p = poly(max_terms, max_exp);
    while (p.is_zero()) p = poly(max_terms, max_exp);
    return p;
}

FieldElem Gen::field() {
    if (coin(0.15)) return FieldElem(rational());
    return FieldElem(poly(), coin(0.4) ? Poly(1) : nonzero_poly(2, 1));
}

FieldElem Gen::nonzero_field() {
    FieldElem x = field();
    while (x.is_zero()) x = field();
    return x;
}

FieldElem Gen::small_coefficient(bool symbols) {
    Poly p(rational(3));
    if (coin(0.6)) p += Poly::variable(Var::z()).scaled(rational(3));
    if (symbols && coin(0.3)) p += Poly::variable(Var::function_instance("g", 0, 0)).scaled(rational(2));
    return FieldElem(p);
}

WPolynomial Gen::wpoly(int deg, bool symbols) {
    std::vector<FieldElem> c;
    for (int i = 0; i < deg; ++i) c.push_back(small_coefficient(symbols));
    FieldElem lead = small_coefficient(symbols);
    while (lead.is_zero()) lead = small_coefficient(symbols);
    c.push_back(lead);
    return WPolynomial(c);
}

LaurentSeries Gen::series(int val, int len, bool unit_leading) {
    std::vector<FieldElem> c;
    for (int i = 0; i < len; ++i) {
        if (i == 0 && unit_leading) c.push_back(FieldElem(nonzero_rational()));
        else c.push_back(coin(0.3) ? FieldElem(rational()) : FieldElem(poly(2, 1)));
    }
    return LaurentSeries::from_coefficients(val, std::move(c), val + len);
}

namespace {

std::string rat_text(const Rational& q) {
    std::string s = q.get_str();
    return q < 0 || q.get_den() != 1 ? "(" + s + ")" : s;
}

}  // namespace

std::string Gen::equation_text() {
    static const char* coefs[] = {"z", "g(z)", "(z+1)", "g(z+1)", "c"};
    static const char* atoms[] = {"w(z+1)", "w(z-1)", "w(z)", "w"};
    std::string lhs;
    int terms = range(1, 3);
    for (int i = 0; i < terms; ++i) {
        std::string t = rat_text(nonzero_rational());
        if (coin(0.5)) t += "*" + std::string(coefs[range(0, 4)]);
        int nat = range(1, 2);
        for (int j = 0; j < nat; ++j) {
            const char* a = i == 0 && j == 0 ? atoms[range(0, 1)] : atoms[range(0, 3)];
            t += "*" + std::string(a);
            int e = range(1, 2);
            if (e > 1) t += "^" + std::to_string(e);
        }
        lhs += (i ? " + " : "") + t;
    }
    auto wpoly_text = [&](int deg, bool monic) {
        std::string s;
        for (int d = deg; d >= 0; --d) {
            std::string c = d == deg && monic ? "1" : rat_text(rational(4));
            if (coin(0.3)) c += "*" + std::string(coefs[range(0, 4)]);
            s += (s.empty() ? "" : " + ") + c + (d ? "*w^" + std::to_string(d) : "");
        }
        return s;
    };
    std::string rhs = "(" + wpoly_text(range(0, 3), false) + ")";
    if (coin(0.6)) rhs += "/(" + wpoly_text(range(1, 2), true) + ")";
    return "#symbol g\n#symbol h period=2\n#symbol c constant\n" + lhs + " = " + rhs;
}

SuiteResult field_suite(std::uint64_t seed, int cases) {
    Gen g(seed);
    SuiteResult r;
    FieldElem one(1);
    for (int i = 0; i < cases; ++i) {
        FieldElem x = g.field(), y = g.field(), w = g.field();
        std::string tag = "case " + std::to_string(i) + ": x = " + x.to_string() + ", y = " + y.to_string();
        bool ok = (x + y) + w == x + (y + w) && x + y == y + x && (x * y) * w == x * (y * w) && x * y == y * x &&
                  x * (y + w) == x * y + x * w && (x - x).is_zero() && x + FieldElem(0) == x && x * one == x;
        if (!x.is_zero()) ok = ok && x * x.inverse() == one && (y / x) * x == y;
        Poly q = g.nonzero_poly(2, 1);
        ok = ok && normalize(x.num() * q, x.den() * q) == x;
        int m = g.range(-3, 3), n = g.range(-3, 3);
        ok = ok && shift(shift(x, m), n) == shift(x, m + n) && shift(x, 0) == x &&
             shift(x * y, n) == shift(x, n) * shift(y, n) && shift(x + y, n) == shift(x, n) + shift(y, n);
        FieldElem hz = FieldElem::variable(Var::function_instance("h", 0, 2));
        FieldElem cz = FieldElem::variable(Var::constant_symbol("c"));
        ok = ok && shift(hz, 2) == hz && !(shift(hz, 1) == hz) && shift(cz, n) == cz;
        r.record(ok, tag);
    }
    return r;
}

SuiteResult gcd_suite(std::uint64_t seed, int cases) {
    Gen g(seed);
    SuiteResult r;
    for (int i = 0; i < cases; ++i) {
        bool symbols = g.coin(0.3);
        WPolynomial f = g.wpoly(g.range(1, 2), symbols);
        WPolynomial p = g.wpoly(g.range(0, 2), symbols);
        WPolynomial q = g.wpoly(g.range(1, 2), symbols);
        WPolynomial a = f * p, b = f * q;
        WPolynomial d = wpoly_gcd(a, b);
        std::string tag = "case " + std::to_string(i) + ": f = " + f.to_string();
        bool ok = a.divmod(d).second.is_zero() && b.divmod(d).second.is_zero() && d.divmod(f).second.is_zero();
        if (wpoly_gcd(p, q).degree() == 0) ok = ok && d == f.monic();
        ok = ok && wpoly_resultant(a, b).is_zero();
        if (p.degree() >= 1) ok = ok && wpoly_resultant(f * p, q) == wpoly_resultant(f, q) * wpoly_resultant(p, q);
        ok = ok && wpoly_resultant(p, q).is_zero() == (wpoly_gcd(p, q).degree() > 0);
        r.record(ok, tag);
    }
    return r;
}

SuiteResult roundtrip_suite(std::uint64_t seed, int cases) {
    Gen g(seed);
    SuiteResult r;
    int attempts = 0;
    while (r.total < cases && attempts < 20 * cases) {
        ++attempts;
        std::string text = g.equation_text();
        NormalizedEquation e;
        try {
            e = parse_and_normalize(text);
        } catch (const Error&) {
            continue;  // generator produced a shape normalization rejects
        }
        std::string c1 = print_canonical(e);
        std::string c2;
        bool same = false;
        try {
            NormalizedEquation e2 = parse_and_normalize(c1);
            c2 = print_canonical(e2);
            same = e2.P == e.P && e2.H == e.H && e2.Q == e.Q;
        } catch (const Error& ex) {
            c2 = std::string("error: ") + ex.what();
        }
        r.record(same && c1 == c2, "input:\n" + text + "\ncanonical:\n" + c1 + "\nreprinted:\n" + c2);
    }
    if (r.total < cases) r.record(false, "generator produced only " + std::to_string(r.total) + " valid equations");
    return r;
}

SuiteResult laurent_suite(std::uint64_t seed, int cases) {
    Gen g(seed);
    SuiteResult r;
    LaurentSeries one = LaurentSeries::constant(FieldElem(1));
    for (int i = 0; i < cases; ++i) {
        LaurentSeries x = g.series(g.range(-2, 2), g.range(2, 5), false);
        LaurentSeries y = g.series(g.range(-2, 2), g.range(2, 5), false);
        LaurentSeries w = g.series(g.range(-2, 2), g.range(2, 5), false);
        LaurentSeries u = g.series(g.range(-2, 2), g.range(2, 5), true);
        std::string tag = "case " + std::to_string(i) + ": x = " + x.to_string() + ", u = " + u.to_string();
        bool ok = ((x + y) + w).agrees_with(x + (y + w)) && (x + y).agrees_with(y + x) &&
                  ((x * y) * w).agrees_with(x * (y * w)) && (x * y).agrees_with(y * x) &&
                  (x * (y + w)).agrees_with(x * y + x * w) && (x - x).agrees_with(LaurentSeries::zero()) &&
                  (x * one).agrees_with(x);
        LaurentSeries ui = u.inverse();
        ok = ok && (u * ui).agrees_with(one) && ui.valuation() == -u.valuation() && ui.trunc() - ui.valuation() == u.trunc() - u.valuation();
        ok = ok && ((x / u) * u).agrees_with(x);
        r.record(ok, tag);
    }
    return r;
}

}  // namespace dcltest
