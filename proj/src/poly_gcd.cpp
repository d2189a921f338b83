// Multivariate gcd over Q: recursive primitive-part reduction with a subresultant
// pseudo-remainder sequence in one main variable. Coefficients stay polynomial
// (fraction free) throughout.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>

#include "dclunie/errors.hpp"
#include "dclunie/poly.hpp"
#include "modp.hpp"

namespace dclunie {

namespace {

using UPoly = std::vector<Poly>;  // coefficients in the main variable, index = degree

int udeg(const UPoly& p) {
    return static_cast<int>(p.size()) - 1;
}

void utrim(UPoly& p) {
    while (!p.empty() && p.back().is_zero()) p.pop_back();
}

Poly exact(const Poly& a, const Poly& b) {
    auto q = a.divide_exact(b);
    if (!q) throw Error("internal: inexact division in gcd");
    return *q;
}

UPoly uprem(UPoly a, const UPoly& b) {
    int db = udeg(b);
    const Poly& lcb = b.back();
    int e = udeg(a) - db + 1;
    while (!a.empty() && udeg(a) >= db) {
        Poly lca = a.back();
        int s = udeg(a) - db;
        for (auto& c : a) c *= lcb;
        for (int i = 0; i <= db; ++i) a[static_cast<std::size_t>(i + s)] -= lca * b[static_cast<std::size_t>(i)];
        utrim(a);
        --e;
    }
    if (e > 0) {
        Poly f = lcb.pow(e);
        for (auto& c : a) c *= f;
    }
    return a;
}

Poly gcd_impl(Poly a, Poly b);

// Modular coprimality test. For each common variable x the images of a and b at a
// fixed point (all other variables) mod a large prime are univariate in x; when the
// leading coefficients survive, deg_x gcd(a, b) <= deg_x gcd(images). Degree zero for
// every common variable means the gcd is constant.
namespace modp_gcd {

using namespace modp;

using UP = std::vector<u64>;

void trim(UP& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

std::optional<UP> image(const Poly& a, Var x) {
    UP out(static_cast<std::size_t>(a.degree(x)) + 1, 0);
    for (const auto& t : a.terms()) {
        auto c = reduce(t.coef);
        if (!c) return std::nullopt;
        u64 val = *c;
        int ex = 0;
        for (const auto& [v, e] : t.mono.factors()) {
            if (v == x)
                ex = e;
            else
                val = mul(val, power(point_value(v), static_cast<u64>(e)));
        }
        out[static_cast<std::size_t>(ex)] = add(out[static_cast<std::size_t>(ex)], val);
    }
    return out;
}

int gcd_degree(UP a, UP b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        if (a.size() < b.size()) std::swap(a, b);
        u64 il = inv(b.back());
        while (a.size() >= b.size() && !a.empty()) {
            u64 f = mul(a.back(), il);
            std::size_t s = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i) a[i + s] = sub(a[i + s], mul(f, b[i]));
            trim(a);
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

// true: certainly coprime (up to the prime/point choice); false: unknown.
bool coprime(const Poly& a, const Poly& b, const std::set<Var>& common) {
    for (Var x : common) {
        auto ia = image(a, x);
        auto ib = image(b, x);
        if (!ia || !ib) return false;
        if (static_cast<int>(ia->size()) - 1 != a.degree(x) || ia->back() == 0) return false;
        if (static_cast<int>(ib->size()) - 1 != b.degree(x) || ib->back() == 0) return false;
        if (gcd_degree(*ia, *ib) > 0) return false;
    }
    return true;
}

}  // namespace modp_gcd

Poly content_of(const UPoly& c) {
    Poly g;
    for (const auto& x : c) {
        if (x.is_zero()) continue;
        g = g.is_zero() ? x.monic() : gcd_impl(g, x);
        if (g.is_one()) break;
    }
    return g;
}

UPoly primitive(const UPoly& c, const Poly& cont) {
    UPoly out;
    out.reserve(c.size());
    for (const auto& x : c) out.push_back(exact(x, cont));
    return out;
}

// Subresultant PRS; inputs primitive in the main variable, deg a >= deg b >= 1.
UPoly subresultant_gcd(UPoly a, UPoly b) {
    Poly g(1), h(1);
    for (;;) {
        int delta = udeg(a) - udeg(b);
        UPoly r = uprem(a, b);
        if (r.empty()) return b;
        if (udeg(r) == 0) return UPoly{Poly(1)};
        Poly divisor = g * h.pow(delta);
        a = std::move(b);
        b.clear();
        for (auto& x : r) b.push_back(exact(x, divisor));
        g = a.back();
        if (delta == 0) {
            // h unchanged
        } else if (delta == 1) {
            h = g;
        } else {
            h = exact(g.pow(delta), h.pow(delta - 1));
        }
    }
}

Poly gcd_no_monomial_content(Poly a, Poly b) {
    for (;;) {
        if (a.is_zero()) return b.monic();
        if (b.is_zero()) return a.monic();
        if (a.is_constant() || b.is_constant()) return Poly(1);
        if (a.monic() == b.monic()) return a.monic();

        auto va = a.vars();
        auto vb = b.vars();
        if (a.size() + b.size() > 6) {
            std::set<Var> common;
            for (Var v : va)
                if (vb.count(v)) common.insert(v);
            if (common.empty() || modp_gcd::coprime(a, b, common)) {
                // With no common variable the gcd lies in the contents; handled below.
                if (!common.empty()) return Poly(1);
            }
        }
        // A variable present in only one operand: gcd(a, b) = gcd(b, coefficients of a in v),
        // folded starting from the other operand so the running gcd only shrinks.
        std::optional<Var> only_a, only_b;
        for (Var v : va)
            if (!vb.count(v)) only_a = v;
        for (Var v : vb)
            if (!va.count(v)) only_b = v;
        if (only_a || only_b) {
            if (only_a && only_b && b.size() > a.size()) only_a.reset();
            const Poly& big = only_a ? a : b;
            Poly g = only_a ? b : a;
            UPoly cs = big.coefficients(only_a ? *only_a : *only_b);
            std::sort(cs.begin(), cs.end(), [](const Poly& x, const Poly& y) { return x.size() < y.size(); });
            for (const auto& c : cs) {
                if (c.is_zero()) continue;
                g = gcd_impl(g, c);
                if (g.is_constant()) return Poly(1);
            }
            return g.monic();
        }

        // Trial division catches the frequent "one divides the other" case cheaply.
        if (b.size() <= a.size()) {
            if (a.divide_exact(b)) return b.monic();
        } else if (b.divide_exact(a)) {
            return a.monic();
        }

        Var x = *va.begin();
        int best = std::max(a.degree(x), b.degree(x));
        for (Var v : va) {
            int d = std::max(a.degree(v), b.degree(v));
            if (d < best) {
                best = d;
                x = v;
            }
        }

        UPoly ua = a.coefficients(x);
        UPoly ub = b.coefficients(x);
        Poly ca = content_of(ua);
        Poly cb = content_of(ub);
        Poly c = gcd_impl(ca, cb);
        UPoly pa = primitive(ua, ca);
        UPoly pb = primitive(ub, cb);
        if (udeg(pa) < udeg(pb)) std::swap(pa, pb);
        UPoly g = subresultant_gcd(pa, pb);
        Poly gc = content_of(g);
        Poly gp = Poly::from_coefficients(x, primitive(g, gc));
        return (c * gp).monic();
    }
}

Poly gcd_impl(Poly a, Poly b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.is_constant() || b.is_constant()) return Poly(1);
    Monomial ma = a.monomial_content();
    Monomial mb = b.monomial_content();
    Monomial m = ma.gcd(mb);
    if (a.is_monomial() || b.is_monomial()) return Poly::monomial(m);
    if (!ma.is_one()) a = *a.divide_exact(Poly::monomial(ma));
    if (!mb.is_one()) b = *b.divide_exact(Poly::monomial(mb));
    Poly g = gcd_no_monomial_content(std::move(a), std::move(b));
    return g.times_monomial(m).monic();
}

}  // namespace

Poly gcd(const Poly& a, const Poly& b) {
    return gcd_impl(a, b);
}

Poly content(const Poly& p, Var v) {
    return content_of(p.coefficients(v));
}

Poly pseudo_remainder(const Poly& a, const Poly& b, Var v) {
    if (b.is_zero()) throw ArithmeticError("pseudo-remainder by zero");
    UPoly ua = a.coefficients(v);
    UPoly ub = b.coefficients(v);
    utrim(ua);
    utrim(ub);
    if (ua.empty()) return Poly();
    if (udeg(ua) < udeg(ub)) return a;
    return Poly::from_coefficients(v, uprem(ua, ub));
}

}  // namespace dclunie
