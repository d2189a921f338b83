#include "dclunie/nevanlinna.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "dclunie/eqparse.hpp"
#include "dclunie/errors.hpp"

namespace dclunie {

namespace {

constexpr long double kPi = std::numbers::pi_v<long double>;
constexpr long double kInf = std::numeric_limits<long double>::infinity();
constexpr std::size_t kMaxDivisor = 10'000'000;

long double to_ld(const Rational& q) {
    mpfr_t t;
    mpfr_init2(t, 80);
    mpfr_set_q(t, q.get_mpq_t(), MPFR_RNDN);
    long double v = mpfr_get_ld(t, MPFR_RNDN);
    mpfr_clear(t);
    return v;
}

// Neumaier summation
struct Sum {
    long double s = 0;
    long double c = 0;
    void add(long double x) {
        long double t = s + x;
        if (std::fabs(s) >= std::fabs(x)) c += (s - t) + x;
        else c += (x - t) + s;
        s = t;
    }
    long double value() const { return s + c; }
};

// log|sin(pi u)|
long double log_abs_sinpi(cld u) {
    long double x = u.real(), y = std::fabs(u.imag());
    x -= 2 * std::nearbyint(x / 2);
    long double s = std::sin(kPi * x);
    long double a = kPi * y;
    if (a < 1) {
        long double sh = std::sinh(a);
        return 0.5L * std::log(s * s + sh * sh);
    }
    long double e = std::exp(-2 * a);
    return a - std::log(2.0L) + 0.5L * std::log1p(4 * e * (s * s - 0.5L) + e * e);
}

long double log_abs_gamma_right(cld u) {
    static const long double B[] = {1.0L / 6, -1.0L / 30, 1.0L / 42, -1.0L / 30, 5.0L / 66, -691.0L / 2730, 7.0L / 6,
                                    -3617.0L / 510, 43867.0L / 798};
    Sum shift;
    cld v = u;
    while (std::abs(v) < 20) {
        shift.add(std::log(std::abs(v)));
        v += 1.0L;
    }
    cld lv = std::log(v);
    cld s = (v - 0.5L) * lv - v + 0.5L * std::log(2 * kPi);
    cld inv = 1.0L / v, inv2 = inv * inv, pw = inv;
    for (int n = 1; n <= 9; ++n) {
        s += B[n - 1] / static_cast<long double>(2 * n * (2 * n - 1)) * pw;
        pw *= inv2;
    }
    return s.real() - shift.value();
}

// Roots of sum c[j] z^j by Aberth iteration, then Newton polishing.
std::vector<cld> poly_roots(std::vector<cld> c) {
    while (!c.empty() && c.back() == cld(0)) c.pop_back();
    int n = static_cast<int>(c.size()) - 1;
    if (n < 1) return {};
    cld lead = c.back();
    for (auto& x : c) x /= lead;
    long double bound = 0;
    for (int j = 0; j < n; ++j) bound = std::max(bound, std::abs(c[static_cast<std::size_t>(j)]));
    bound += 1;
    auto eval = [&](cld z, cld& dp) {
        cld p = c.back();
        dp = 0;
        for (int j = n - 1; j >= 0; --j) {
            dp = dp * z + p;
            p = p * z + c[static_cast<std::size_t>(j)];
        }
        return p;
    };
    std::vector<cld> z(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) z[static_cast<std::size_t>(k)] = std::polar(bound, 2 * kPi * k / n + 0.4L);
    for (int it = 0; it < 2000; ++it) {
        long double move = 0;
        for (int k = 0; k < n; ++k) {
            cld& zk = z[static_cast<std::size_t>(k)];
            cld dp;
            cld p = eval(zk, dp);
            if (p == cld(0)) continue;
            cld ratio = p / dp;
            cld s = 0;
            for (int j = 0; j < n; ++j)
                if (j != k) s += 1.0L / (zk - z[static_cast<std::size_t>(j)]);
            cld w = ratio / (1.0L - ratio * s);
            zk -= w;
            move = std::max(move, std::abs(w) / std::max(1.0L, std::abs(zk)));
        }
        if (move < 1e-18L) break;
    }
    for (auto& zk : z) {
        for (int it = 0; it < 3; ++it) {
            cld dp;
            cld p = eval(zk, dp);
            if (dp == cld(0)) break;
            zk -= p / dp;
        }
    }
    return z;
}

Poly derivative(const Poly& p, Var v) {
    auto c = p.coefficients(v);
    std::vector<Poly> d;
    for (std::size_t j = 1; j < c.size(); ++j) d.push_back(c[j].scaled(Rational(static_cast<long>(j))));
    return Poly::from_coefficients(v, d);
}

// Square-free decomposition (Yun): p = lc * prod f_i^i.
std::vector<std::pair<Poly, int>> square_free(const Poly& p, Var v) {
    std::vector<std::pair<Poly, int>> out;
    if (p.degree(v) < 1) return out;
    Poly dp = derivative(p, v);
    Poly b = gcd(p, dp);
    Poly c = *p.divide_exact(b);
    Poly d = *dp.divide_exact(b) - derivative(c, v);
    for (int i = 1; c.degree(v) > 0; ++i) {
        Poly a = gcd(c, d);
        if (a.degree(v) > 0) out.emplace_back(a, i);
        c = *c.divide_exact(a);
        d = *d.divide_exact(a) - derivative(c, v);
    }
    return out;
}

void add_roots(const Poly& p, int sign, std::vector<DivisorFunction::Root>& roots) {
    Var z = Var::z();
    for (const auto& [f, mult] : square_free(p, z)) {
        auto c = f.coefficients(z);
        if (c.size() == 2) {
            Rational r = -c[0].constant_value() / c[1].constant_value();
            roots.push_back({cld(to_ld(r), 0), sign * mult});
            continue;
        }
        std::vector<cld> cc;
        for (const auto& x : c) cc.emplace_back(to_ld(x.constant_value()), 0);
        for (cld r : poly_roots(cc)) roots.push_back({r, sign * mult});
    }
}

std::string ld_string(long double x) {
    std::ostringstream os;
    os.precision(18);
    os << x;
    return os.str();
}

}  // namespace

long double log_abs_gamma(cld u) {
    if (u.real() >= 0.5L) return log_abs_gamma_right(u);
    return std::log(kPi) - log_abs_sinpi(u) - log_abs_gamma_right(1.0L - u);
}

DivisorFunction DivisorFunction::constant(const Rational& c) {
    DivisorFunction f;
    if (c == 0) f.zero_ = true;
    else f.log_c_ = std::log(std::fabs(to_ld(c)));
    return f;
}

DivisorFunction DivisorFunction::root(cld z, int mult) {
    DivisorFunction f;
    f.roots_.push_back({z, mult});
    return f;
}

DivisorFunction DivisorFunction::gamma(const Rational& alpha, const Rational& beta, int power) {
    if (alpha == 0) throw UnsupportedError("gamma factor needs a non-constant argument");
    DivisorFunction f;
    f.gammas_.push_back({alpha, beta, power});
    return f;
}

DivisorFunction DivisorFunction::exp(std::vector<Rational> p, int power) {
    DivisorFunction f;
    f.exps_.push_back({std::move(p), power});
    return f;
}

DivisorFunction DivisorFunction::rational(const FieldElem& x) {
    for (Var v : x.vars())
        if (!v.is_z()) throw UnsupportedError("rational factor may only involve z, found '" + v.display() + "'");
    if (x.num().is_zero()) return constant(0);
    DivisorFunction f;
    Var z = Var::z();
    Rational lc = x.num().coefficients(z).back().constant_value() / x.den().coefficients(z).back().constant_value();
    f.log_c_ = std::log(std::fabs(to_ld(lc)));
    add_roots(x.num(), 1, f.roots_);
    add_roots(x.den(), -1, f.roots_);
    return f;
}

DivisorFunction DivisorFunction::operator*(const DivisorFunction& o) const {
    DivisorFunction f = *this;
    f.log_c_ += o.log_c_;
    f.zero_ = zero_ || o.zero_;
    f.roots_.insert(f.roots_.end(), o.roots_.begin(), o.roots_.end());
    f.gammas_.insert(f.gammas_.end(), o.gammas_.begin(), o.gammas_.end());
    f.exps_.insert(f.exps_.end(), o.exps_.begin(), o.exps_.end());
    return f;
}

DivisorFunction DivisorFunction::inverse() const {
    if (zero_) throw NumericError("inverse of the zero function");
    DivisorFunction f = *this;
    f.log_c_ = -log_c_;
    for (auto& r : f.roots_) r.mult = -r.mult;
    for (auto& g : f.gammas_) g.power = -g.power;
    for (auto& e : f.exps_) e.power = -e.power;
    return f;
}

DivisorFunction DivisorFunction::pow(int k) const {
    if (k == 0) return constant(1);
    DivisorFunction f = k < 0 ? inverse() : *this;
    int a = std::abs(k);
    f.log_c_ *= a;
    for (auto& r : f.roots_) r.mult *= a;
    for (auto& g : f.gammas_) g.power *= a;
    for (auto& e : f.exps_) e.power *= a;
    return f;
}

DivisorFunction DivisorFunction::shifted(const Rational& c) const {
    DivisorFunction f = *this;
    long double cl = to_ld(c);
    for (auto& r : f.roots_) r.z -= cl;
    for (auto& g : f.gammas_) g.beta += g.alpha * c;
    for (auto& e : f.exps_) {
        // p(z + c) by repeated synthetic division
        std::vector<Rational> q = e.p;
        for (std::size_t i = 0; i < q.size(); ++i)
            for (std::size_t j = q.size() - 1; j > i; --j) q[j - 1] += c * q[j];
        e.p = q;
    }
    return f;
}

long double DivisorFunction::log_abs(cld z) const {
    if (zero_) return -kInf;
    Sum s;
    bool up = false, down = false;  // infinite terms kept out of the compensated sum
    auto add = [&](long double x) {
        if (std::isinf(x)) (x > 0 ? up : down) = true;
        else s.add(x);
    };
    add(log_c_);
    for (const auto& r : roots_) add(r.mult * std::log(std::abs(z - r.z)));
    for (const auto& g : gammas_) add(g.power * log_abs_gamma(to_ld(g.alpha) * z + to_ld(g.beta)));
    for (const auto& e : exps_) {
        cld p = 0;
        for (std::size_t j = e.p.size(); j-- > 0;) p = p * z + to_ld(e.p[j]);
        add(e.power * p.real());
    }
    if (up && down) return std::numeric_limits<long double>::quiet_NaN();  // factor zero meets factor pole
    if (up) return kInf;
    if (down) return -kInf;
    return s.value();
}

namespace {

// Gamma(alpha z + beta) has poles at z = (-n - beta) / alpha, n >= 0.
template <class F>
void gamma_poles(const DivisorFunction::Gamma& g, long double lo, long double hi, F&& emit) {
    long double a = std::fabs(to_ld(g.alpha));
    long double b = to_ld(g.beta);
    long double n0 = std::max(0.0L, std::ceil(-b - a * hi));
    long double n1 = std::floor(a * hi - b);
    if (n1 - n0 > static_cast<long double>(kMaxDivisor))
        throw NumericError("divisor enumeration overflow: more than 1e7 poles inside the disk");
    for (long double n = n0; n <= n1; n += 1) {
        Rational q = (Rational(static_cast<long>(n)) + g.beta) / g.alpha;
        long double z = -to_ld(q);
        if (std::fabs(z) >= lo && std::fabs(z) <= hi) emit(z);
    }
}

}  // namespace

std::vector<DivisorPoint> DivisorFunction::divisor(long double r) const {
    std::vector<DivisorPoint> pts;
    for (const auto& x : roots_)
        if (std::abs(x.z) <= r) pts.push_back({x.z, x.mult});
    for (const auto& g : gammas_) gamma_poles(g, 0, r, [&](long double z) { pts.push_back({cld(z, 0), -g.power}); });
    std::sort(pts.begin(), pts.end(), [](const DivisorPoint& a, const DivisorPoint& b) {
        if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
        return a.z.imag() < b.z.imag();
    });
    std::vector<DivisorPoint> merged;
    for (const auto& p : pts) {
        if (!merged.empty() && std::abs(merged.back().z - p.z) <= 1e-15L * std::max(1.0L, std::abs(p.z)))
            merged.back().mult += p.mult;
        else merged.push_back(p);
    }
    std::erase_if(merged, [](const DivisorPoint& p) { return p.mult == 0; });
    std::stable_sort(merged.begin(), merged.end(),
                     [](const DivisorPoint& a, const DivisorPoint& b) { return std::abs(a.z) < std::abs(b.z); });
    return merged;
}

std::vector<cld> DivisorFunction::factor_points(long double lo, long double hi) const {
    std::vector<cld> out;
    for (const auto& x : roots_)
        if (std::abs(x.z) >= lo && std::abs(x.z) <= hi) out.push_back(x.z);
    for (const auto& g : gammas_) gamma_poles(g, lo, hi, [&](long double z) { out.emplace_back(z, 0); });
    return out;
}

std::string DivisorFunction::to_string() const {
    if (zero_) return "0";
    std::vector<std::string> parts;
    if (log_c_ != 0) parts.push_back("|c| = " + ld_string(std::exp(log_c_)));
    for (const auto& r : roots_) {
        std::string z = ld_string(r.z.real());
        if (r.z.imag() != 0) z += (r.z.imag() < 0 ? " - " : " + ") + ld_string(std::fabs(r.z.imag())) + "i";
        parts.push_back("(z - (" + z + "))^" + std::to_string(r.mult));
    }
    for (const auto& g : gammas_)
        parts.push_back("gamma(" + rational_to_string(g.alpha) + "*z + " + rational_to_string(g.beta) + ")^" +
                        std::to_string(g.power));
    for (const auto& e : exps_) {
        std::string p;
        for (std::size_t j = e.p.size(); j-- > 0;) {
            if (e.p[j] == 0) continue;
            if (!p.empty()) p += " + ";
            p += rational_to_string(e.p[j]) + (j ? "*z^" + std::to_string(j) : "");
        }
        parts.push_back("exp(" + (p.empty() ? "0" : p) + ")^" + std::to_string(e.power));
    }
    if (parts.empty()) return "1";
    std::string s;
    for (const auto& p : parts) s += (s.empty() ? "" : " * ") + p;
    return s;
}

namespace {

FieldElem parse_rational_piece(const std::string& text) {
    RawEquation raw = parse_equation("w = " + text);
    FieldElem x = evaluate_expr(*raw.rhs, raw.symbols);
    for (Var v : x.vars())
        if (!v.is_z()) throw UnsupportedError("'" + text + "' involves '" + v.display() + "'; only z is allowed");
    return x;
}

std::vector<Rational> polynomial_piece(const std::string& text) {
    FieldElem x = parse_rational_piece(text);
    if (!x.den().is_constant()) throw UnsupportedError("'" + text + "' is not a polynomial in z");
    Rational d = x.den().constant_value();
    std::vector<Rational> out;
    for (const auto& c : x.num().coefficients(Var::z())) out.push_back(c.constant_value() / d);
    return out;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\n");
    return s.substr(b, e - b + 1);
}

// "gamma(...)^k" -> (inner, k)
bool call_piece(const std::string& piece, const std::string& name, std::string& inner, int& power) {
    if (piece.rfind(name + "(", 0) != 0) return false;
    int depth = 0;
    std::size_t close = std::string::npos;
    for (std::size_t i = name.size(); i < piece.size(); ++i) {
        if (piece[i] == '(') ++depth;
        else if (piece[i] == ')' && --depth == 0) {
            close = i;
            break;
        }
    }
    if (close == std::string::npos) throw ParseError("unbalanced parentheses in '" + piece + "'", 1, 1);
    inner = piece.substr(name.size() + 1, close - name.size() - 1);
    std::string rest = trim(piece.substr(close + 1));
    power = 1;
    if (!rest.empty()) {
        if (rest[0] != '^') throw ParseError("unexpected '" + rest + "' after " + name + "(...)", 1, 1);
        rest = trim(rest.substr(1));
        if (rest.size() > 2 && rest.front() == '(' && rest.back() == ')') rest = rest.substr(1, rest.size() - 2);
        try {
            std::size_t used = 0;
            power = std::stoi(rest, &used);
            if (used != rest.size()) throw std::invalid_argument(rest);
        } catch (const std::exception&) {
            throw ParseError("exponent '" + rest + "' is not an integer", 1, 1);
        }
    }
    return true;
}

}  // namespace

DivisorFunction parse_divisor_function(const std::string& text) {
    std::string s = trim(text);
    if (s.empty()) throw ParseError("empty function", 1, 1);
    if (s.find("gamma(") == std::string::npos && s.find("exp(") == std::string::npos)
        return DivisorFunction::rational(parse_rational_piece(s));
    // split into top-level factors
    std::vector<std::pair<std::string, bool>> pieces;  // (text, divide)
    int depth = 0;
    std::string cur;
    bool divide = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        char ch = s[i];
        if (ch == '(') ++depth;
        if (ch == ')') --depth;
        if (depth == 0 && (ch == '*' || ch == '/')) {
            pieces.emplace_back(trim(cur), divide);
            cur.clear();
            divide = ch == '/';
            continue;
        }
        if (depth == 0 && (ch == '+' || ch == '-') && !trim(cur).empty() && trim(cur).back() != '^')
            throw UnsupportedError("gamma and exp factors may only be multiplied or divided: '" + text + "'");
        cur += ch;
    }
    if (depth != 0) throw ParseError("unbalanced parentheses in '" + text + "'", 1, 1);
    pieces.emplace_back(trim(cur), divide);
    DivisorFunction f = DivisorFunction::constant(1);
    for (const auto& [piece, div] : pieces) {
        if (piece.empty()) throw ParseError("empty factor in '" + text + "'", 1, 1);
        std::string inner;
        int power = 1;
        DivisorFunction g;
        if (call_piece(piece, "gamma", inner, power)) {
            auto p = polynomial_piece(inner);
            if (p.size() != 2) throw UnsupportedError("gamma argument must be linear in z: '" + inner + "'");
            g = DivisorFunction::gamma(p[1], p[0], power);
        } else if (call_piece(piece, "exp", inner, power)) {
            g = DivisorFunction::exp(polynomial_piece(inner), power);
        } else {
            g = DivisorFunction::rational(parse_rational_piece(piece));
        }
        f = div ? f / g : f * g;
    }
    return f;
}

long double nudge_radius(const DivisorFunction& f, long double r, bool* nudged) {
    if (r < 1) throw NumericError("radius must be at least 1");
    bool moved = false;
    for (int tries = 0; tries < 8; ++tries) {
        bool hit = false;
        for (cld p : f.factor_points(r * (1 - 1e-14L), r * (1 + 1e-14L))) {
            if (std::fabs(std::abs(p) - r) <= 1e-15L * r) hit = true;
        }
        if (!hit) break;
        r += 1e-12L;
        moved = true;
    }
    if (nudged) *nudged = moved;
    return r;
}

CountingResult counting_N(const DivisorFunction& f, long double r) {
    CountingResult out;
    out.r = nudge_radius(f, r, &out.nudged);
    Sum s;
    for (const auto& p : f.divisor(out.r)) {
        if (p.mult >= 0) continue;
        long double a = std::abs(p.z);
        long double m = -p.mult;
        s.add(a == 0 ? m * std::log(out.r) : m * std::log(out.r / a));
    }
    out.value = s.value();
    return out;
}

ProximityResult proximity_m(const DivisorFunction& f, long double r, const QuadratureOptions& opt) {
    if (opt.nodes < 64) throw NumericError("proximity_m needs at least 64 nodes");
    ProximityResult out;
    out.r = nudge_radius(f, r, &out.nudged);
    r = out.r;
    std::vector<long double> dirs;
    for (cld p : f.factor_points(r / 2, 2 * r)) dirs.push_back(std::arg(p));
    std::sort(dirs.begin(), dirs.end());
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());
    auto excluded = [&](long double th) {
        for (long double d : dirs) {
            long double diff = std::fabs(std::remainder(th - d, 2 * kPi));
            if (diff < 1e-6L) return true;
        }
        return false;
    };
    Sum sum;
    int used = 0, skipped = 0;
    auto visit = [&](int n, int k) {
        long double th = 2 * kPi * k / n;
        if (excluded(th)) {
            ++skipped;
            return;
        }
        long double v = f.log_abs(std::polar(r, th));
        if (std::isnan(v)) throw NumericError("log|f| is not a number at r = " + ld_string(r));
        if (v == kInf) {
            ++skipped;
            return;
        }
        if (v > 0) sum.add(v);
        ++used;
    };
    int n = opt.nodes;
    for (int k = 0; k < n; ++k) visit(n, k);
    auto estimate = [&] {
        if (used == 0) throw NumericError("every quadrature node was excluded at r = " + ld_string(r));
        return sum.value() / used;
    };
    long double prev = estimate();
    out.converged = false;
    while (2L * n <= opt.node_cap) {
        for (int k = 1; k < 2 * n; k += 2) visit(2 * n, k);
        n *= 2;
        long double cur = estimate();
        long double scale = std::max(std::fabs(cur), std::fabs(prev));
        bool done = std::fabs(cur - prev) <= opt.rel_tol * scale;
        prev = cur;
        if (done) {
            out.converged = true;
            break;
        }
    }
    out.value = prev;
    out.nodes = n;
    out.excluded = skipped;
    return out;
}

std::string CurvePoint::quality() const {
    if (nudged && !converged) return "nudged;node-cap";
    if (nudged) return "nudged";
    if (!converged) return "node-cap";
    return "ok";
}

CurvePoint characteristic_T(const DivisorFunction& f, long double r, const QuadratureOptions& opt) {
    CurvePoint c;
    c.r = r;
    ProximityResult m = proximity_m(f, r, opt);
    CountingResult N = counting_N(f, r);
    c.r_used = m.r;
    c.m = m.value;
    c.N = N.value;
    c.T = c.m + c.N;
    c.nodes = m.nodes;
    c.excluded = m.excluded;
    c.converged = m.converged;
    c.nudged = m.nudged;
    return c;
}

CharacteristicCurve characteristic_curve(const DivisorFunction& f, std::vector<long double> radii,
                                         const QuadratureOptions& opt) {
    std::sort(radii.begin(), radii.end());
    radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
    CharacteristicCurve c;
    c.function = f.to_string();
    for (long double r : radii) c.points.push_back(characteristic_T(f, r, opt));
    return c;
}

std::string curve_csv(const CharacteristicCurve& c) {
    std::string out = "r,m,N,T,quality\n";
    for (const auto& p : c.points)
        out += ld_string(p.r) + "," + ld_string(p.m) + "," + ld_string(p.N) + "," + ld_string(p.T) + "," + p.quality() +
               "\n";
    return out;
}

OrderEstimate order_estimate(const DivisorFunction& f, long double rmax, const QuadratureOptions& opt) {
    std::vector<long double> radii;
    for (long double r = 1; r <= rmax; r *= 2) radii.push_back(r);
    OrderEstimate out;
    out.curve = characteristic_curve(f, radii, opt);
    std::vector<std::pair<double, double>> xy;
    for (std::size_t i = radii.size() / 2; i < radii.size(); ++i) {
        const auto& p = out.curve.points[i];
        if (!p.converged || !(p.T > 0) || !std::isfinite(static_cast<double>(p.T))) continue;
        xy.emplace_back(std::log(static_cast<double>(p.r)), std::log(static_cast<double>(p.T)));
        out.radii.push_back(p.r);
    }
    if (xy.size() < 4) throw NumericError("order estimate needs at least 4 usable radii, got " + std::to_string(xy.size()));
    double n = static_cast<double>(xy.size()), sx = 0, sy = 0;
    for (auto [x, y] : xy) {
        sx += x;
        sy += y;
    }
    double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    out.order = sxy / sxx;
    double rss = 0;
    for (auto [x, y] : xy) {
        double e = y - (my + out.order * (x - mx));
        rss += e * e;
    }
    out.std_error = std::sqrt(rss / (n - 2) / sxx);
    out.ci_low = out.order - 2 * out.std_error;
    out.ci_high = out.order + 2 * out.std_error;
    return out;
}

void apply_trend(TrendSeries& s) {
    std::vector<long double> v;
    for (std::size_t i = 0; i < s.values.size(); ++i)
        if (!s.excluded[i] && std::isfinite(static_cast<double>(s.values[i]))) v.push_back(s.values[i]);
    std::size_t start = v.size() / 2;
    if (v.size() - start < 3 && v.size() >= 3) start = v.size() - 3;
    s.steps = 0;
    s.decreasing = 0;
    for (std::size_t i = start; i + 1 < v.size(); ++i) {
        ++s.steps;
        if (v[i + 1] < v[i]) ++s.decreasing;
    }
    s.pass = s.vacuous || s.converged ||
             (s.steps >= 2 && s.decreasing >= kTrendFraction * s.steps);
}

namespace {

const char* kTrendCriterion =
    "monotone-majority trend: decreasing in at least 70% of consecutive steps over the top half of the "
    "usable radii; a desk-scale substitute for the asymptotic statement, not a limit";

void count_excluded(TrendReport& rep) {
    rep.pass = !rep.series.empty();
    for (const auto& s : rep.series) rep.pass = rep.pass && s.pass;
    if (rep.series.empty()) return;
    rep.total = static_cast<int>(rep.series.front().excluded.size());
    rep.excluded = static_cast<int>(std::count(rep.series.front().excluded.begin(), rep.series.front().excluded.end(), true));
}

}  // namespace

TrendReport check_logdiff_lemma(const DivisorFunction& f, const Rational& c, const std::vector<long double>& radii,
                                const QuadratureOptions& opt) {
    TrendReport rep;
    rep.check = "logdiff lemma: m(r, f(z+c)/f(z)) = o(T(r,f)/r^delta)";
    rep.criterion = kTrendCriterion;
    DivisorFunction q = f.shifted(c) / f;
    CharacteristicCurve tf = characteristic_curve(f, radii, opt);
    std::vector<ProximityResult> mq;
    for (const auto& p : tf.points) mq.push_back(proximity_m(q, p.r, opt));
    for (long double delta : {0.25L, 0.5L, 0.75L}) {
        TrendSeries s;
        s.label = "m(r, f(z+c)/f(z)) * r^" + ld_string(delta) + " / T(r, f)";
        bool all_zero = true;
        for (std::size_t i = 0; i < tf.points.size(); ++i) {
            const auto& p = tf.points[i];
            bool bad = !p.converged || !mq[i].converged;
            long double val = p.T > 0 ? mq[i].value * std::pow(p.r, delta) / p.T : kInf;
            if (mq[i].value > 1e-12L) all_zero = false;
            s.radii.push_back(p.r);
            s.values.push_back(val);
            s.excluded.push_back(bad || !(p.T > 0));
        }
        s.vacuous = all_zero;
        apply_trend(s);
        rep.series.push_back(std::move(s));
    }
    count_excluded(rep);
    if (rep.series.front().vacuous) rep.note = "m(r, f(z+c)/f(z)) vanishes at every radius; vacuous PASS";
    return rep;
}

CharacteristicCurve technical_lemma_curve(const DivisorFunction& f, const std::vector<long double>& radii,
                                          long double s, const QuadratureOptions& opt) {
    std::vector<long double> all = radii;
    for (long double r : radii) all.push_back(r + s);
    return characteristic_curve(f, all, opt);
}

TrendReport check_technical_lemma(const CharacteristicCurve& curve, long double s, long double delta) {
    TrendReport rep;
    rep.check = "technical lemma: (T(r+s) - T(r)) * r^delta / T(r) -> 0 for finite-order T";
    rep.criterion = kTrendCriterion;
    TrendSeries ser;
    ser.label = "(T(r+" + ld_string(s) + ") - T(r)) * r^" + ld_string(delta) + " / T(r)";
    bool all_zero = true;
    for (const auto& p : curve.points) {
        const CurvePoint* q = nullptr;
        for (const auto& x : curve.points)
            if (std::fabs(x.r - (p.r + s)) <= 1e-12L * std::max(1.0L, p.r)) q = &x;
        if (!q) continue;
        if (p.T > 1e-12L || q->T > 1e-12L) all_zero = false;
        ser.radii.push_back(p.r);
        ser.values.push_back(p.T > 0 ? (q->T - p.T) * std::pow(p.r, delta) / p.T : kInf);
        ser.excluded.push_back(!p.converged || !q->converged || !(p.T > 0));
    }
    if (ser.radii.size() < 2 && !all_zero) throw NumericError("technical lemma check needs at least two radii r with r + s on the curve");
    ser.vacuous = all_zero;
    apply_trend(ser);
    rep.series.push_back(std::move(ser));
    count_excluded(rep);
    if (all_zero) rep.note = "T vanishes identically; vacuous PASS";
    return rep;
}

TrendReport check_valiron_mohonko(const FieldElem& f, const Poly& num, const Poly& den, Var w,
                                  const std::vector<long double>& radii, const QuadratureOptions& opt) {
    for (const Poly* p : {&num, &den})
        for (Var v : p->vars())
            if (!(v == w)) throw UnsupportedError("R may only involve w, found '" + v.display() + "'");
    if (den.is_zero()) throw ArithmeticError("R has a zero denominator");
    if (!gcd(num, den).is_constant()) throw UnsupportedError("R = Q/H is reducible: gcd(Q, H) is not constant");
    int D = std::max(num.degree(w), den.degree(w));
    if (D < 1) throw UnsupportedError("R is constant in w");
    FieldElem comp = FieldElem(num).substitute({{w, f}}) / FieldElem(den).substitute({{w, f}});
    DivisorFunction F = DivisorFunction::rational(f);
    DivisorFunction C = DivisorFunction::rational(comp);
    CharacteristicCurve cf = characteristic_curve(F, radii, opt);
    CharacteristicCurve cc = characteristic_curve(C, radii, opt);

    TrendReport rep;
    rep.check = "Valiron-Mohon'ko: T(r, R(z, f)) / T(r, f) -> " + std::to_string(D);
    rep.criterion = std::string(kTrendCriterion) + "; applied to |ratio - D|, which also passes once every top-half "
                    "value is within 2% of D";
    TrendSeries ratio;
    ratio.label = "T(r, R(z, f)) / T(r, f)";
    TrendSeries dev;
    dev.label = "|T(r, R(z, f)) / T(r, f) - " + std::to_string(D) + "|";
    for (std::size_t i = 0; i < cf.points.size(); ++i) {
        const auto& a = cf.points[i];
        const auto& b = cc.points[i];
        long double q = a.T > 0 ? b.T / a.T : kInf;
        bool bad = !a.converged || !b.converged || !(a.T > 0);
        for (TrendSeries* s : {&ratio, &dev}) {
            s->radii.push_back(a.r);
            s->excluded.push_back(bad);
        }
        ratio.values.push_back(q);
        dev.values.push_back(std::fabs(q - D));
    }
    std::vector<long double> top;
    for (std::size_t i = 0; i < dev.values.size(); ++i)
        if (!dev.excluded[i]) top.push_back(dev.values[i]);
    if (!top.empty()) {
        dev.converged = true;
        for (std::size_t i = top.size() / 2; i < top.size(); ++i) dev.converged = dev.converged && top[i] <= 0.02L * D;
    }
    apply_trend(dev);
    ratio.pass = dev.pass;
    rep.series.push_back(std::move(ratio));
    rep.series.push_back(std::move(dev));
    count_excluded(rep);
    rep.note = "composite R(z, f) = " + comp.to_string();
    return rep;
}

}  // namespace dclunie
