#pragma once

#include <complex>
#include <string>
#include <vector>

#include "dclunie/field.hpp"

namespace dclunie {

using cld = std::complex<long double>;

// Zero (mult > 0) or pole (mult < 0) of a divisor function.
struct DivisorPoint {
    cld z;
    int mult = 0;
};

// Product of explicit factors: c * prod (z - r)^m * prod Gamma(alpha z + beta)^k * prod exp(p(z))^k.
// Evaluation works with log|f| so huge moduli never overflow.
class DivisorFunction {
public:
    struct Root {
        cld z;
        int mult = 1;
    };
    struct Gamma {
        Rational alpha;
        Rational beta;
        int power = 1;
    };
    struct Exp {
        std::vector<Rational> p;  // p[j] is the coefficient of z^j
        int power = 1;
    };

    DivisorFunction() = default;
    static DivisorFunction constant(const Rational& c);
    static DivisorFunction root(cld z, int mult);
    static DivisorFunction gamma(const Rational& alpha, const Rational& beta, int power = 1);
    static DivisorFunction exp(std::vector<Rational> p, int power = 1);
    // Rational function in z; roots of each square-free part are found numerically unless linear.
    static DivisorFunction rational(const FieldElem& f);

    DivisorFunction operator*(const DivisorFunction& o) const;
    DivisorFunction inverse() const;
    DivisorFunction operator/(const DivisorFunction& o) const { return *this * o.inverse(); }
    DivisorFunction pow(int k) const;
    // f(z + c)
    DivisorFunction shifted(const Rational& c) const;

    bool is_rational() const { return gammas_.empty() && exps_.empty(); }
    bool is_constant() const { return roots_.empty() && gammas_.empty() && exps_.empty(); }
    // log|f(z)|; +inf at poles, -inf at zeros, NaN where a factor zero meets a factor pole.
    long double log_abs(cld z) const;
    // Net divisor inside |z| <= r, merged across factors, sorted by modulus.
    std::vector<DivisorPoint> divisor(long double r) const;
    // Factor-level zeros and poles with lo <= |z| <= hi (no cancellation).
    std::vector<cld> factor_points(long double lo, long double hi) const;

    std::string to_string() const;

private:
    long double log_c_ = 0;  // log|c|
    bool zero_ = false;
    std::vector<Root> roots_;
    std::vector<Gamma> gammas_;
    std::vector<Exp> exps_;
};

// Products and quotients of gamma(linear), exp(polynomial) and rational expressions in z,
// e.g. "gamma(z)", "(z^2+1)/(z-1)", "exp(z^2)*gamma(2*z+1)^-1".
DivisorFunction parse_divisor_function(const std::string& text);

// log|Gamma(u)|, with reflection in the left half-plane.
long double log_abs_gamma(cld u);

struct QuadratureOptions {
    int nodes = 256;          // starting node count, at least 64
    int node_cap = 1 << 16;
    long double rel_tol = 1e-4;
};

struct CountingResult {
    long double value = 0;
    long double r = 0;  // radius used
    bool nudged = false;
};

struct ProximityResult {
    long double value = 0;
    long double r = 0;
    int nodes = 0;
    int excluded = 0;
    bool converged = true;  // false when the node cap was hit
    bool nudged = false;
};

// r is moved by 1e-12 when it equals the modulus of a zero or pole.
long double nudge_radius(const DivisorFunction& f, long double r, bool* nudged);

CountingResult counting_N(const DivisorFunction& f, long double r);
ProximityResult proximity_m(const DivisorFunction& f, long double r, const QuadratureOptions& opt = {});

struct CurvePoint {
    long double r = 0;       // requested
    long double r_used = 0;  // after nudging
    long double m = 0;
    long double N = 0;
    long double T = 0;
    int nodes = 0;
    int excluded = 0;
    bool converged = true;
    bool nudged = false;

    std::string quality() const;  // "ok", "nudged", "node-cap" or "nudged;node-cap"
};

struct CharacteristicCurve {
    std::vector<CurvePoint> points;  // increasing r
    std::string function;
};

CurvePoint characteristic_T(const DivisorFunction& f, long double r, const QuadratureOptions& opt = {});
CharacteristicCurve characteristic_curve(const DivisorFunction& f, std::vector<long double> radii,
                                         const QuadratureOptions& opt = {});
// Columns r, m, N, T, quality.
std::string curve_csv(const CharacteristicCurve& c);

struct OrderEstimate {
    double order = 0;
    double std_error = 0;
    double ci_low = 0;  // order -+ 2 standard errors
    double ci_high = 0;
    std::vector<long double> radii;  // radii used in the fit
    CharacteristicCurve curve;
};

// Slope of log T against log r over the top half of r = 2^j <= rmax.
OrderEstimate order_estimate(const DivisorFunction& f, long double rmax, const QuadratureOptions& opt = {});

// One quantity tracked over radii.
struct TrendSeries {
    std::string label;
    std::vector<long double> radii;
    std::vector<long double> values;
    std::vector<bool> excluded;  // quadrature quality flag fired at this radius
    int steps = 0;               // consecutive top-half steps
    int decreasing = 0;
    bool vacuous = false;
    bool converged = false;  // Valiron-Mohon'ko: top half already within tolerance
    bool pass = false;
};

struct TrendReport {
    std::string check;
    std::string criterion;  // how PASS is decided
    std::vector<TrendSeries> series;
    int excluded = 0;
    int total = 0;
    bool pass = false;
    std::string note;
};

inline constexpr double kTrendFraction = 0.7;

// Decreasing in at least 70% of consecutive steps over the top half of the usable radii.
void apply_trend(TrendSeries& s);

// m(r, f(z+c)/f(z)) * r^delta / T(r, f) for delta in {0.25, 0.5, 0.75}.
TrendReport check_logdiff_lemma(const DivisorFunction& f, const Rational& c, const std::vector<long double>& radii,
                                const QuadratureOptions& opt = {});
// Curve at r and r + s for every r.
CharacteristicCurve technical_lemma_curve(const DivisorFunction& f, const std::vector<long double>& radii,
                                          long double s, const QuadratureOptions& opt = {});
// (T(r+s) - T(r)) r^delta / T(r) over the radii r whose r + s is also on the curve.
TrendReport check_technical_lemma(const CharacteristicCurve& curve, long double s, long double delta);

// T(r, R(z, f)) / T(r, f) against D = max(deg num, deg den) in w, for rational f and
// R = num/den with rational coefficients. UnsupportedError when gcd(num, den) is not constant.
TrendReport check_valiron_mohonko(const FieldElem& f, const Poly& num, const Poly& den, Var w,
                                  const std::vector<long double>& radii, const QuadratureOptions& opt = {});

}  // namespace dclunie
