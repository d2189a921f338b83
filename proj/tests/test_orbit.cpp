#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "dclunie/orbit.hpp"

using namespace dclunie;

namespace {

constexpr int P = 128;

Complex num(double x) {
    return Complex(Real::from_double(x, P), Real(P));
}

Complex rat(long n, long d) {
    return Complex::from_rationals(Rational(n, d), Rational(0), P);
}

double dist(const Complex& a, const Complex& b) {
    return (a - b).abs().to_double();
}

}  // namespace

TEST_CASE("complex literals") {
    CHECK(dist(parse_complex("1.5", P), num(1.5)) == 0);
    Complex c = parse_complex("0.5+3i", P);
    CHECK(c.re.to_double() == 0.5);
    CHECK(c.im.to_double() == 3);
    CHECK(parse_complex("-2i", P).im.to_double() == -2);
    CHECK(parse_complex("1e-3-2.5e1i", P).im.to_double() == -25);
    CHECK(parse_complex("1/3", P).re.to_double() == doctest::Approx(1.0 / 3));
    CHECK_THROWS(parse_complex("1+", P));
}

TEST_CASE("w(z+1) = 1/w alternates") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = 1/w");
    OrbitOptions o;
    o.steps = 6;
    Orbit orb = iterate(rq, {}, num(2), num(0), o);
    REQUIRE(orb.points.size() == 7);
    for (const auto& p : orb.points) {
        CHECK(!p.pole);
        CHECK(dist(p.value(), num(p.n % 2 ? 0.5 : 2)) < 1e-30);
    }
}

TEST_CASE("default Riccati orbit hits a template pole") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = (z*w + 1)/(w - (2*z + 1))");
    Orbit orb = iterate(rq, {}, rat(5, 3), rat(1, 3));
    CHECK(orb.points.size() == 201);
    REQUIRE(orb.points[1].pole);
    CHECK(orb.points[1].order == 1);
    auto ev = classify_poles(orb, {riccati_template(rq)}, {}, 1e-6);
    REQUIRE(!ev.empty());
    for (const auto& e : ev) {
        CHECK(e.family == 1);
        CHECK(e.residual < 1e-6);
    }
    // independent check of the neighbours: w(z0) = c(z0) and w(z0 + 2) = a(z0 + 1)
    CHECK(dist(orb.points[0].value(), rat(5, 3)) < 1e-30);
    CHECK(dist(orb.points[2].value(), rat(4, 3)) < 1e-25);
    OrbitSummary s = summarize(ev);
    CHECK(s.families.size() == 1);
    CHECK(s.verdict == AdmissibilityVerdict::single_family_candidates);
}

TEST_CASE("orbit matches exact rational iteration") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = (z*w + 1)/(w - (2*z + 1))");
    OrbitOptions o;
    o.steps = 12;
    Orbit orb = iterate(rq, {}, rat(1, 2), rat(1, 3), o);
    Rational z(1, 3), w(1, 2);
    for (int n = 1; n <= 12; ++n) {
        w = (z * w + 1) / (w - (2 * z + 1));
        z += 1;
        Complex exact = Complex::from_rationals(w, Rational(0), P);
        double scale = std::max(1.0, std::abs(w.get_d()));
        CHECK(dist(orb.points[static_cast<std::size_t>(n)].value(), exact) / scale < 1e-25);
    }
}

TEST_CASE("second-order orbit of the d-PI class") {
    SymbolTable s;
    for (const char* n : {"a0", "a1", "a2"}) s.declare(n, SymbolKind::opaque_function);
    NormalizedEquation eq = parse_and_normalize("w(z+1)+w(z-1) = (a2*w(z)^2 + a1*w(z) + a0)/w(z)^2", s);
    NumericBindings b{{"a0", num(0.3)}, {"a1", num(0.7)}, {"a2", num(1.1)}};
    OrbitOptions o;
    o.steps = 8;
    Orbit orb = iterate(eq, b, num(0.5), num(1e-10), num(0.25), o);
    int poles = 0;
    for (const auto& p : orb.points) {
        if (!p.pole) continue;
        ++poles;
        CHECK(p.order == 2);
    }
    CHECK(poles >= 1);
    // exact zero followed by a pole is indeterminate
    CHECK_THROWS_AS(iterate(eq, b, num(0.5), num(0), num(0.25), o), NumericError);
}

TEST_CASE("low precision warns and coefficient poles raise") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = 1/w");
    OrbitOptions o;
    o.steps = 3;
    o.precision = 32;
    Orbit orb = iterate(rq, {}, num(2), num(0), o);
    REQUIRE(!orb.warnings.empty());
    CHECK(orb.warnings.front().id == "OR-1");
    RiccatiEquation bad = riccati_from_text("w(z+1) = (w + 1/z)/(w - 1)");
    OrbitOptions o2;
    o2.steps = 3;
    CHECK_THROWS_AS(iterate(bad, {}, num(2), num(-1), o2), NumericError);
}

TEST_CASE("csv layout and determinism") {
    RiccatiEquation rq = riccati_from_text("w(z+1) = (z*w + 1)/(w - (2*z + 1))");
    OrbitOptions o;
    o.steps = 5;
    Orbit a = iterate(rq, {}, rat(5, 3), rat(1, 3), o);
    Orbit b = iterate(rq, {}, rat(5, 3), rat(1, 3), o);
    auto ea = classify_poles(a, {riccati_template(rq)}, {}, 1e-6);
    std::string csv = orbit_csv(a, ea);
    CHECK(csv == orbit_csv(b, classify_poles(b, {riccati_template(rq)}, {}, 1e-6)));
    CHECK(csv.rfind("n,Re(z),Im(z),Re(w),Im(w),is_pole,family_id\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(csv.find(",1,1\n") != std::string::npos);
}

TEST_CASE("seeded sample points") {
    Complex a = sample_point(42, 3, P), b = sample_point(42, 3, P), c = sample_point(42, 4, P);
    CHECK(dist(a, b) == 0);
    CHECK(dist(a, c) > 0);
    CHECK(std::abs(a.re.to_double()) <= 1);
    CHECK(std::abs(a.im.to_double()) <= 1);
    unsetenv("DELTA_CLUNIE_SEED");
    CHECK(experiment_seed() == 0);
    setenv("DELTA_CLUNIE_SEED", "17", 1);
    CHECK(experiment_seed() == 17);
    unsetenv("DELTA_CLUNIE_SEED");
}
