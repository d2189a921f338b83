// One line per acceptance criterion. Exit status is the number of failed criteria.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dclunie/clunie.hpp"
#include "dclunie/nevanlinna.hpp"
#include "dclunie/orbit.hpp"
#include "dclunie/riccati.hpp"
#include "dclunie/singular.hpp"
#include "properties.hpp"

using namespace dclunie;

namespace {

const char* kDPI = "w(z+1) + w(z-1) = (a2*w(z)^2 + a1*w(z) + a0)/w(z)^2";
const char* kDPIV = "w(z+1)*w(z-1) + w(z+1)*w + w*w(z-1) = (a3*w^3 + a2*w^2 + a1*w + a0)/((w-b)*(w-c))";

SymbolTable coefficient_symbols() {
    SymbolTable s;
    for (const char* n : {"a0", "a1", "a2", "a3", "b", "c"}) s.declare(n, SymbolKind::opaque_function);
    return s;
}

FieldElem jet(const char* name, int site) {
    return FieldElem::variable(Var::jet(name, site, 0, 0));
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void run(int id, double limit_s, const std::function<Outcome()>& body) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = dt < limit_s;
    bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::printf("[%s] criterion %d: %s (%.3f s, limit %.0f s%s)\n", pass ? "PASS" : "FAIL", id, o.detail.c_str(), dt,
                limit_s, in_time ? "" : ", too slow");
    std::fflush(stdout);
}

Outcome criterion1() {
    Invariants v = compute_invariants(parse_and_normalize(kDPIV, coefficient_symbols()));
    TheoremVerdict t = verdict_from_invariants(v);
    bool ok = v.kappa_P == 2 && v.deg_Q == 3 && v.deg_P == 2 && v.deg_H == 2 && v.ord0_Q == 0 && v.d_w == 4 &&
              t.pole_density.applies && t.proximity.applies;
    char buf[200];
    std::snprintf(buf, sizeof buf, "d-PIV class: kappa=%d deg_Q=%d deg_P=%d deg_H=%d ord0_Q=%d d_w=%d density=%d proximity=%d",
                  v.kappa_P, v.deg_Q, v.deg_P, v.deg_H, v.ord0_Q, v.d_w, t.pole_density.applies, t.proximity.applies);
    return {ok, buf};
}

Outcome criterion2() {
    TheoremVerdict t = full_report(parse_and_normalize(kDPI, coefficient_symbols()));
    bool m_small = false, n_full = false;
    for (const auto& c : t.conclusions) {
        m_small = m_small || c.tag == "proximity";
        n_full = n_full || c.tag == "pole-count";
    }
    bool ok = t.proximity.applies && m_small && n_full;
    return {ok, "d-PI class: proximity theorem " + std::string(t.proximity.applies ? "applies" : "does not apply") +
                    " (" + t.proximity.inequality + "); m(r,w)=S(r,w) and N(r,w)=T(r,w)+S(r,w) reported: " +
                    (m_small && n_full ? "yes" : "no")};
}

Outcome criterion3() {
    SingularOptions opt;
    opt.max_order = 3;
    EnumerationResult r = enumerate_pole_patterns(parse_and_normalize(kDPIV, coefficient_symbols()), opt);
    struct Expected {
        std::string text;
        bool pre_finite;
        FieldElem pre;
        bool post_finite;
        FieldElem post;
    };
    FieldElem a3 = jet("a3", 0);
    std::vector<Expected> want = {
        {"(b(zhat-1), inf, a3(zhat) - b(zhat-1))", true, jet("b", -1), true, a3 - jet("b", -1)},
        {"(c(zhat-1), inf, a3(zhat) - c(zhat-1))", true, jet("c", -1), true, a3 - jet("c", -1)},
        {"(a3(zhat) - b(zhat+1), inf, b(zhat+1))", true, a3 - jet("b", 1), true, jet("b", 1)},
        {"(a3(zhat) - c(zhat+1), inf, c(zhat+1))", true, a3 - jet("c", 1), true, jet("c", 1)},
        {"(inf, K, inf)", false, FieldElem(0), false, FieldElem(0)},
    };
    std::vector<bool> used(r.families.size(), false);
    std::string missing;
    int matched = 0;
    for (const auto& w : want) {
        bool found = false;
        for (std::size_t i = 0; i < r.families.size() && !found; ++i) {
            const PolePattern& f = r.families[i];
            if (used[i] || f.pre_finite != w.pre_finite || f.post_finite != w.post_finite) continue;
            if (w.pre_finite && !(f.pre_value == w.pre)) continue;
            if (w.post_finite && !(f.post_value == w.post)) continue;
            used[i] = found = true;
        }
        if (found) ++matched;
        else missing += (missing.empty() ? "" : "; ") + w.text;
    }
    std::string got;
    for (const auto& f : r.families) got += (got.empty() ? "" : "; ") + ("(" + f.pre_text() + ", inf^" + f.pole_order_text() + ", " + f.post_text() + ")");
    bool ok = r.families.size() == 5 && matched == 5;
    std::string detail = "d-PIV class: " + std::to_string(r.families.size()) + " families, " +
                         std::to_string(matched) + "/5 triples matched";
    if (!ok) detail += "; unmatched expected " + missing + "; engine families " + got;
    return {ok, detail};
}

Outcome criterion4() {
    NormalizedEquation e = parse_and_normalize(kDPI, coefficient_symbols());
    std::string orders;
    bool ok = true;
    for (int k0 = 1; k0 <= 3; ++k0) {
        FreshSeed seed("s");
        int depth = 2 * k0 + 4;
        std::map<int, LaurentSeries> sites;
        sites[-1] = generic_finite_series(seed, depth);
        sites[0] = generic_pole_series(seed, k0, depth).inverse(nullptr, depth);
        Propagation p = propagate(e, sites, 1);
        int pole = -p.value.valuation();
        ok = ok && sites[0].valuation() == k0 && pole >= 2 * k0;
        orders += (orders.empty() ? "" : ", ") + ("k0=" + std::to_string(k0) + " -> pole " + std::to_string(pole));
    }
    EnumerationResult r = enumerate_pole_patterns(e);
    AdmissibilityReport a = riccati_admissibility(r.families);
    bool obstructing = !r.families.empty();
    for (const auto& f : r.families) obstructing = obstructing && a.obstructing(f.id) && f.multiplier == 2;
    ok = ok && obstructing;
    return {ok, "d-PI class zero->pole: " + orders + "; zero-entry families obstructing: " + (obstructing ? "yes" : "no")};
}

Outcome criterion5() {
    SymbolTable s;
    for (const char* n : {"a", "b", "c"}) s.declare(n, SymbolKind::opaque_function);
    RiccatiEquation rq = riccati_from_text("w(z+1) = (a*w + b)/(w - c)", s);
    bool ok = true;
    std::string d;
    for (int k = 1; k <= 2; ++k) {
        RiccatiExpansion ex = local_expansion_check(rq, k);
        bool shape = ex.residual_zero && ex.post_value == jet("a", 0) && ex.pre_value == jet("c", -1) &&
                     ex.post_gap == k && ex.pre_gap == k && ex.pole.valuation() == -k;
        // gamma * beta must equal a(zhat) c(zhat) + b(zhat)
        bool gamma = ex.gamma * ex.pole.leading() == jet("a", 0) * jet("c", 0) + jet("b", 0);
        ok = ok && shape && gamma;
        d += (d.empty() ? "" : ", ") + ("k=" + std::to_string(k) + " gaps " + std::to_string(ex.post_gap) + "/" +
                                        std::to_string(ex.pre_gap));
    }
    return {ok, "symbolic Riccati template: " + d + " with constant terms a(zhat), c(zhat-1)"};
}

Outcome criterion6() {
    SymbolTable s;
    for (const char* n : {"a", "b", "c"}) s.declare(n, SymbolKind::opaque_function);
    RiccatiEquation rq = riccati_from_text("w(z+1) = (a*w + b)/(w - c)", s);
    bool ok = true;
    std::string d;
    for (int k = 1; k <= 2; ++k) {
        AuxiliaryG g = auxiliary_g(rq, k);
        ok = ok && g.valuation_at_pole_of_w >= 0 && g.valuation_at_pole_of_shift >= 0;
        d += (d.empty() ? "" : ", ") + ("k=" + std::to_string(k) + ": " + std::to_string(g.valuation_at_pole_of_w) +
                                        ", " + std::to_string(g.valuation_at_pole_of_shift));
    }
    return {ok, "valuations of g=(w(z+1)-a)(w-c) at both pole types: " + d};
}

Outcome criterion7() {
    const int prec = 128;
    RiccatiEquation rq = riccati_from_text("w(z+1) = (z*w + 1)/(w - (2*z + 1))");
    Complex z0 = Complex::from_rationals(Rational(1, 3), Rational(0), prec);
    Complex w0 = evaluate_numeric(rq.c, z0, {}, prec);
    OrbitOptions o;
    o.steps = 200;
    o.precision = prec;
    Orbit orb = iterate(rq, {}, w0, z0, o);
    auto ev = classify_poles(orb, {riccati_template(rq)}, {}, 1e-6);
    bool ok = !ev.empty();
    double worst = 0;
    for (const auto& e : ev) {
        // neighbours against the symbolic constant terms: w(z_p - 1) = c(z_p - 1), w(z_p + 1) = a(z_p)
        const OrbitPoint& p = orb.points[static_cast<std::size_t>(e.n)];
        Complex one = Complex::from_rationals(Rational(1), Rational(0), prec);
        double pre = 0, post = 0;
        if (e.n > 0 && e.n + 1 < static_cast<int>(orb.points.size())) {
            Complex c = evaluate_numeric(rq.c, p.z - one, {}, prec);
            Complex a = evaluate_numeric(rq.a, p.z, {}, prec);
            pre = (orb.points[static_cast<std::size_t>(e.n - 1)].value() - c).abs().to_double() /
                  std::max(1.0, c.abs().to_double());
            post = (orb.points[static_cast<std::size_t>(e.n + 1)].value() - a).abs().to_double() /
                   std::max(1.0, a.abs().to_double());
        }
        worst = std::max({worst, e.residual, pre, post});
        ok = ok && e.family == 1 && e.residual < 1e-6 && pre < 1e-6 && post < 1e-6;
    }
    char buf[200];
    std::snprintf(buf, sizeof buf, "Riccati orbit a=z b=1 c=2z+1, z0=1/3, 200 steps at 128 bits: %zu pole events, all template: %s, max residual %.3g (tol 1e-6)",
                  ev.size(), ok ? "yes" : "no", worst);
    return {ok, buf};
}

Outcome criterion8() {
    CurvePoint c = characteristic_T(parse_divisor_function("(z^2+1)/(z-1)"), 1000);
    double ratio = static_cast<double>(c.T / std::log(1000.0L));
    // N(10, Gamma) oracle: poles at 0, -1, ..., -10
    long double oracle = std::log(10.0L);
    for (int j = 1; j <= 10; ++j) oracle += std::log(10.0L / j);
    double nerr = std::fabs(static_cast<double>(counting_N(parse_divisor_function("gamma(z)"), 10).value - oracle));
    Var w = Var::aux("acc_w");
    TrendReport vm =
        check_valiron_mohonko(FieldElem::variable(Var::z()), Poly::variable(w).pow(2), Poly(1), w, {10, 100, 1000});
    double vratio = static_cast<double>(vm.series.front().values.back());
    bool ok = ratio >= 1.9 && ratio <= 2.1 && nerr < 1e-9 && std::fabs(vratio - 2) <= 0.04;
    char buf[240];
    std::snprintf(buf, sizeof buf, "T(1000)/log 1000 = %.6f in [1.9, 2.1]; |N(10, Gamma) - oracle| = %.3g < 1e-9; Valiron ratio at 1000 = %.6f within 2%% of 2",
                  ratio, nerr, vratio);
    return {ok, buf};
}

Outcome criterion9() {
    DivisorFunction g = parse_divisor_function("gamma(z)");
    std::vector<long double> radii;
    for (int j = 3; j <= 10; ++j) radii.push_back(std::ldexp(1.0L, j));
    TrendReport ld = check_logdiff_lemma(g, 1, radii);
    TrendReport tl = check_technical_lemma(technical_lemma_curve(g, radii, 1), 1, 0.5);
    std::string d = "trend checks (desk-scale substitute for the asymptotic lemmas), Gamma over 2^3..2^10: logdiff";
    for (const auto& s : ld.series) d += " " + std::to_string(s.decreasing) + "/" + std::to_string(s.steps);
    d += ", technical";
    for (const auto& s : tl.series) d += " " + std::to_string(s.decreasing) + "/" + std::to_string(s.steps);
    d += " decreasing (need 70%)";
    return {ld.pass && tl.pass, d};
}

Outcome criterion10() {
    auto f = dcltest::field_suite(0x5eed0001, 500);
    auto g = dcltest::gcd_suite(0x5eed0002, 200);
    auto p = dcltest::roundtrip_suite(0x5eed0003, 100);
    auto l = dcltest::laurent_suite(0x5eed0004, 200);
    auto t = [](const char* n, const dcltest::SuiteResult& r) {
        return std::string(n) + " " + std::to_string(r.passed) + "/" + std::to_string(r.total);
    };
    std::string d = "property suites: " + t("field", f) + ", " + t("gcd", g) + ", " + t("roundtrip", p) + ", " +
                    t("laurent", l);
    for (const auto* r : {&f, &g, &p, &l})
        if (!r->ok()) d += "; first failure: " + r->first_failure;
    return {f.ok() && g.ok() && p.ok() && l.ok() && f.total == 500 && g.total == 200 && p.total == 100 && l.total == 200, d};
}

}  // namespace

int main() {
    run(1, 1, criterion1);
    run(2, 1, criterion2);
    run(3, 30, criterion3);
    run(4, 10, criterion4);
    run(5, 5, criterion5);
    run(6, 5, criterion6);
    run(7, 10, criterion7);
    run(8, 60, criterion8);
    run(9, 120, criterion9);
    run(10, 60, criterion10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
