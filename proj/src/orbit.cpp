#include "dclunie/orbit.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <memory>
#include <random>

namespace dclunie {

namespace {

// Decimal or exact fraction "p/q".
Real real_text(const std::string& s, int precision) {
    auto slash = s.find('/');
    if (slash == std::string::npos) return Real::from_string(s, precision);
    Rational q;
    if (q.set_str(s, 10) != 0 || q.get_den() == 0) throw NumericError("not a number: '" + s + "'");
    q.canonicalize();
    return Real::from_rational(q, precision);
}

}  // namespace

Complex parse_complex(const std::string& text, int precision) {
    std::string s;
    for (char ch : text)
        if (ch != ' ') s += ch;
    if (s.empty()) throw NumericError("empty complex number");
    Real zero(precision);
    if (s.back() != 'i') return {real_text(s, precision), zero};
    s.pop_back();
    // split at the last sign that is not a leading sign or an exponent sign
    std::size_t cut = std::string::npos;
    for (std::size_t i = s.size(); i-- > 1;) {
        if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
            cut = i;
            break;
        }
    }
    std::string re = cut == std::string::npos ? "" : s.substr(0, cut);
    std::string im = cut == std::string::npos ? s : s.substr(cut);
    if (im.empty() || im == "+") im = "1";
    if (im == "-") im = "-1";
    if (im[0] == '+') im = im.substr(1);
    return {re.empty() ? zero : real_text(re, precision), real_text(im, precision)};
}

namespace {

struct Proj {
    Complex p;
    Complex q;
};

Proj normalized(Complex p, Complex q) {
    Real a = p.norm_inf();
    Real b = q.norm_inf();
    Real m = a < b ? b : a;
    if (m.is_zero()) throw NumericError("indeterminate step 0/0");
    Real inv = Real::from_double(1.0, m.precision()) / m;
    return {p.scaled(inv), q.scaled(inv)};
}

Proj finite_point(const Complex& w) {
    int prec = w.precision();
    return normalized(w, Complex(Real::from_double(1.0, prec), Real(prec)));
}

// Value of a coefficient variable at z.
Complex coefficient_value(Var v, const Complex& z, const NumericBindings& bind, int prec) {
    const VarInfo& i = v.info();
    switch (i.kind) {
        case VarKind::z:
        case VarKind::anchor:
            return z;
        case VarKind::symbol:
        case VarKind::jet: {
            auto it = bind.find(i.base);
            if (it == bind.end()) throw NumericError("no numeric value bound to symbol '" + i.base + "'");
            if (i.kind == VarKind::jet && i.deriv > 0) return Complex(prec);  // constant binding
            return it->second;
        }
        default:
            throw NumericError("cannot evaluate '" + v.display() + "' numerically");
    }
}

Complex power(const Complex& x, int e) {
    Complex r(Real::from_double(1.0, x.precision()), Real(x.precision()));
    for (int k = 0; k < e; ++k) r = r * x;
    return r;
}

Complex eval_poly(const Poly& p, const std::function<Complex(Var)>& value, int prec) {
    Complex acc(prec);
    std::map<Var, Complex> cache;
    for (const auto& t : p.terms()) {
        Complex term(Real::from_rational(t.coef, prec), Real(prec));
        for (const auto& [v, e] : t.mono.factors()) {
            auto it = cache.find(v);
            if (it == cache.end()) it = cache.emplace(v, value(v)).first;
            term = term * power(it->second, e);
        }
        acc = acc + term;
    }
    return acc;
}

// One term of a homogenized numerator or denominator: coef * w^i * wo^j.
struct HTerm {
    Monomial coef_mono;
    Rational coef;
    int i = 0;
    int j = 0;
};

class SecondOrderMap {
public:
    SecondOrderMap(const NormalizedEquation& eq, const NumericBindings& bind, int prec) : bind_(bind), prec_(prec) {
        TopShiftSolution sol = solve_top_shift(eq);
        w0_ = w_atom(Shift());
        wm_ = w_atom(Shift(-1));
        split(sol.rhs.num(), num_);
        split(sol.rhs.den(), den_);
    }

    Proj step(const Complex& z, const Proj& cur, const Proj& prev) const {
        std::vector<Complex> pp = powers(cur.p, d0_), qp = powers(cur.q, d0_);
        std::vector<Complex> mp = powers(prev.p, d1_), mq = powers(prev.q, d1_);
        std::map<std::pair<int, int>, Complex> coef_sum;
        auto eval = [&](const std::vector<HTerm>& ts, bool track) {
            Complex acc(prec_);
            for (const auto& t : ts) {
                Complex c(Real::from_rational(t.coef, prec_), Real(prec_));
                for (const auto& [v, e] : t.coef_mono.factors()) c = c * power(coefficient_value(v, z, bind_, prec_), e);
                if (track) {
                    auto key = std::make_pair(t.i, t.j);
                    auto it = coef_sum.find(key);
                    if (it == coef_sum.end()) coef_sum.emplace(key, c);
                    else it->second = it->second + c;
                }
                acc = acc + c * pp[t.i] * qp[d0_ - t.i] * mp[t.j] * mq[d1_ - t.j];
            }
            return acc;
        };
        Complex p = eval(num_, false);
        Complex q = eval(den_, true);
        bool all_zero = true;
        for (const auto& [k, c] : coef_sum)
            if (!c.is_zero()) all_zero = false;
        if (all_zero) throw NumericError("coefficient pole at z = " + z.to_string(12));
        return normalized(p, q);
    }

private:
    void split(const Poly& p, std::vector<HTerm>& out) {
        for (const auto& t : p.terms()) {
            HTerm h;
            h.coef = t.coef;
            std::vector<Monomial::Factor> rest;
            for (const auto& [v, e] : t.mono.factors()) {
                if (v == w0_) h.i = e;
                else if (v == wm_) h.j = e;
                else rest.emplace_back(v, e);
            }
            h.coef_mono = Monomial::from_factors(std::move(rest));
            d0_ = std::max(d0_, h.i);
            d1_ = std::max(d1_, h.j);
            out.push_back(std::move(h));
        }
    }

    std::vector<Complex> powers(const Complex& x, int d) const {
        std::vector<Complex> r{Complex(Real::from_double(1.0, prec_), Real(prec_))};
        for (int e = 1; e <= d; ++e) r.push_back(r.back() * x);
        return r;
    }

    const NumericBindings& bind_;
    int prec_;
    Var w0_ = Var::z();
    Var wm_ = Var::z();
    std::vector<HTerm> num_;
    std::vector<HTerm> den_;
    int d0_ = 0;
    int d1_ = 0;
};

class RiccatiMap {
public:
    RiccatiMap(const RiccatiEquation& rq, const NumericBindings& bind, int prec)
        : lp_(linearize(rq)), bind_(bind), prec_(prec) {}

    Proj step(const Complex& z, const Proj& cur) const {
        auto val = [&](const FieldElem& x) {
            auto f = [&](Var v) { return coefficient_value(v, z, bind_, prec_); };
            Complex d = eval_poly(x.den(), f, prec_);
            if (d.is_zero()) throw NumericError("coefficient pole at z = " + z.to_string(12));
            return eval_poly(x.num(), f, prec_) / d;
        };
        Complex a = val(lp_.M[0][0]), b = val(lp_.M[0][1]), c = val(lp_.M[1][1]);
        return normalized(a * cur.p + b * cur.q, cur.p + c * cur.q);
    }

private:
    LinearPair lp_;
    const NumericBindings& bind_;
    int prec_;
};

bool is_pole(const Proj& x, double threshold) {
    if (x.q.is_zero()) return true;
    return x.p.abs() > x.q.abs() * Real::from_double(threshold, x.q.precision());
}

Complex real_number(double x, int prec) {
    return {Real::from_double(x, prec), Real(prec)};
}

// Runs the orbit with local parameter t: seeds w_j + t and z -> z0 + n + t.
using Runner = std::function<std::vector<Proj>(const Complex& t)>;

Orbit finish(Runner run, const Complex& z0, const OrbitOptions& opt, std::string provenance) {
    int prec = opt.precision;
    Orbit o;
    o.z0 = z0;
    o.steps = opt.steps;
    o.precision = prec;
    o.provenance = std::move(provenance);
    if (prec < 64) o.warnings.push_back({"OR-1", "working precision " + std::to_string(prec) + " bits is below extended precision"});
    std::vector<Proj> main = run(Complex(prec));
    bool any_pole = false;
    for (std::size_t n = 0; n < main.size(); ++n) {
        OrbitPoint pt;
        pt.n = static_cast<int>(n);
        pt.z = z0 + real_number(static_cast<double>(n), prec);
        pt.p = main[n].p;
        pt.q = main[n].q;
        pt.pole = is_pole(main[n], opt.pole_threshold);
        any_pole = any_pole || pt.pole;
        o.points.push_back(std::move(pt));
    }
    if (!any_pole) return o;
    // Order from log|w| at t = h, -h, 2h.
    double h = opt.refine_step;
    std::vector<double> ts{h, -h, 2 * h};
    std::vector<std::vector<Proj>> refined;
    for (double t : ts) {
        try {
            refined.push_back(run(real_number(t, prec)));
        } catch (const NumericError& e) {
            o.warnings.push_back({"OR-2", std::string("order refinement at t = ") + std::to_string(t) + " failed: " + e.what()});
            return o;
        }
    }
    for (auto& pt : o.points) {
        if (!pt.pole) continue;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        bool ok = true;
        for (std::size_t r = 0; r < ts.size(); ++r) {
            const Proj& x = refined[r][static_cast<std::size_t>(pt.n)];
            if (x.q.is_zero()) {
                ok = false;
                break;
            }
            double y = (x.p.abs().log() - x.q.abs().log()).to_double();
            double lx = std::log(std::fabs(ts[r]));
            sx += lx;
            sy += y;
            sxx += lx * lx;
            sxy += lx * y;
        }
        double m = static_cast<double>(ts.size());
        double den = m * sxx - sx * sx;
        if (!ok || den == 0) {
            o.warnings.push_back({"OR-3", "no order estimate at n = " + std::to_string(pt.n)});
            continue;
        }
        double slope = (m * sxy - sx * sy) / den;
        pt.order_estimate = -slope;
        pt.order = static_cast<int>(std::lround(-slope));
        if (std::fabs(-slope - pt.order) > 0.25)
            o.warnings.push_back({"OR-3", "order estimate " + std::to_string(-slope) + " at n = " + std::to_string(pt.n) +
                                              " is not close to an integer"});
    }
    return o;
}

}  // namespace

Orbit iterate(const NormalizedEquation& eq, const NumericBindings& bind, const Complex& w0, const Complex& w1,
              const Complex& z0, const OrbitOptions& opt) {
    if (opt.steps < 1) throw NumericError("steps must be positive");
    int prec = opt.precision;
    auto map = std::make_shared<SecondOrderMap>(eq, bind, prec);
    Runner run = [=](const Complex& t) {
        std::vector<Proj> v;
        v.push_back(finite_point(w0 + t));
        v.push_back(finite_point(w1 + t));
        for (int n = 1; n < opt.steps; ++n) {
            Complex z = z0 + t + real_number(static_cast<double>(n), prec);
            try {
                v.push_back(map->step(z, v[static_cast<std::size_t>(n)], v[static_cast<std::size_t>(n - 1)]));
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " at n = " + std::to_string(n + 1));
            }
        }
        return v;
    };
    return finish(run, z0, opt, print_canonical(eq) + " | w(z0) = " + w0.to_string() + ", w(z0+1) = " + w1.to_string());
}

Orbit iterate(const RiccatiEquation& rq, const NumericBindings& bind, const Complex& w0, const Complex& z0,
              const OrbitOptions& opt) {
    if (opt.steps < 1) throw NumericError("steps must be positive");
    int prec = opt.precision;
    auto map = std::make_shared<RiccatiMap>(rq, bind, prec);
    Runner run = [=](const Complex& t) {
        std::vector<Proj> v;
        v.push_back(finite_point(w0 + t));
        for (int n = 0; n < opt.steps; ++n) {
            Complex z = z0 + t + real_number(static_cast<double>(n), prec);
            try {
                v.push_back(map->step(z, v.back()));
            } catch (const NumericError& e) {
                throw NumericError(std::string(e.what()) + " at n = " + std::to_string(n + 1));
            }
        }
        return v;
    };
    return finish(run, z0, opt, rq.to_string() + " | w(z0) = " + w0.to_string());
}

Complex evaluate_numeric(const FieldElem& x, const Complex& z, const NumericBindings& bind, int precision) {
    auto f = [&](Var v) { return coefficient_value(v, z, bind, precision); };
    Complex d = eval_poly(x.den(), f, precision);
    if (d.is_zero()) throw NumericError("coefficient pole at z = " + z.to_string(12));
    return eval_poly(x.num(), f, precision) / d;
}

PolePattern riccati_template(const RiccatiEquation& rq) {
    PolePattern p;
    p.id = 1;
    p.kind = EntryKind::h_root;
    p.direction = Direction::forward;
    p.entry_site = -1;
    p.entry_condition = "w(zhat-1) = " + value_at_site(rq.c, -1).to_string();
    p.pre_value = value_at_site(rq.c, -1);
    p.post_value = value_at_site(rq.a, 0);
    p.confined = true;
    p.parametric = true;
    return p;
}

namespace {

// Fills free parameters (fresh symbols) from the observed neighbour values when a value
// is linear in a single one of them.
std::optional<std::map<Var, Complex>> solve_free(const PolePattern& fam, const Complex& pre, const Complex& post,
                                                 const std::function<Complex(Var)>& coef, int prec) {
    std::set<Var> fresh;
    for (const FieldElem* x : {&fam.pre_value, &fam.post_value})
        for (Var v : x->vars())
            if (v.kind() == VarKind::fresh) fresh.insert(v);
    std::map<Var, Complex> out;
    if (fresh.empty()) return out;
    if (fresh.size() > 1) return std::nullopt;
    Var s = *fresh.begin();
    auto try_solve = [&](const FieldElem& x, bool finite, const Complex& obs) -> bool {
        if (!finite || x.den().degree(s) != 0 || x.num().degree(s) != 1) return false;
        auto c = x.num().coefficients(s);
        auto f = [&](Var v) { return coef(v); };
        Complex den = eval_poly(x.den(), f, prec);
        Complex c1 = eval_poly(c[1], f, prec);
        if (c1.is_zero()) return false;
        Complex c0 = eval_poly(c[0], f, prec);
        out.emplace(s, (obs * den - c0) / c1);
        return true;
    };
    if (try_solve(fam.pre_value, fam.pre_finite, pre) || try_solve(fam.post_value, fam.post_finite, post)) return out;
    return std::nullopt;
}

}  // namespace

std::vector<PoleEvent> classify_poles(const Orbit& orbit, const std::vector<PolePattern>& patterns,
                                      const NumericBindings& bind, double tol) {
    std::vector<PoleEvent> events;
    int prec = orbit.precision;
    const auto& pts = orbit.points;
    for (std::size_t n = 0; n < pts.size(); ++n) {
        if (!pts[n].pole) continue;
        // a run of poles counts once, at its first site
        PoleEvent ev;
        ev.n = pts[n].n;
        ev.order = pts[n].order;
        ev.order_estimate = pts[n].order_estimate;
        if (n == 0 || n + 1 >= pts.size()) {
            ev.note = "pole at the end of the orbit; neighbours unavailable";
            events.push_back(std::move(ev));
            continue;
        }
        const OrbitPoint& a = pts[n - 1];
        const OrbitPoint& b = pts[n + 1];
        ev.pre_pole = a.pole;
        ev.post_pole = b.pole;
        if (!a.infinite()) ev.pre = a.value();
        if (!b.infinite()) ev.post = b.value();
        const Complex& zhat = pts[n].z;
        auto coef = [&](Var v) { return coefficient_value(v, zhat, bind, prec); };
        double best = std::numeric_limits<double>::infinity();
        for (const auto& fam : patterns) {
            std::function<Complex(Var)> val;
            std::optional<std::map<Var, Complex>> free;
            try {
                free = solve_free(fam, ev.pre, ev.post, coef, prec);
            } catch (const NumericError&) {
                continue;
            }
            if (!free) continue;
            auto value_of = [&](Var v) {
                auto it = free->find(v);
                return it != free->end() ? it->second : coef(v);
            };
            double r = 0;
            auto side = [&](bool finite, const FieldElem& x, bool obs_pole, const Complex& obs) {
                if (!finite) return obs_pole ? 0.0 : std::numeric_limits<double>::infinity();
                if (obs_pole) return std::numeric_limits<double>::infinity();
                Complex e = eval_poly(x.num(), value_of, prec) / eval_poly(x.den(), value_of, prec);
                Real scale = e.abs();
                Real one = Real::from_double(1.0, prec);
                if (scale < one) scale = one;
                return ((obs - e).abs() / scale).to_double();
            };
            try {
                r = std::max(side(fam.pre_finite, fam.pre_value, ev.pre_pole, ev.pre),
                             side(fam.post_finite, fam.post_value, ev.post_pole, ev.post));
            } catch (const NumericError&) {
                continue;
            }
            if (r < best) {
                best = r;
                ev.family = fam.id;
            }
        }
        ev.residual = best;
        if (!(best < tol)) {
            ev.family = 0;
            ev.note = "no family within tolerance";
        }
        events.push_back(std::move(ev));
    }
    return events;
}

OrbitSummary summarize(const std::vector<PoleEvent>& events) {
    OrbitSummary s;
    s.events = static_cast<int>(events.size());
    for (const auto& e : events) {
        if (e.family == 0) ++s.unclassified;
        else s.families.insert(e.family);
    }
    if (events.empty()) {
        s.verdict = AdmissibilityVerdict::no_candidate;
        s.statement = "no poles detected";
    } else if (s.families.size() > 1) {
        s.verdict = AdmissibilityVerdict::multi_family_obstruction;
        s.statement = "multi-family: non-Riccati solution (pole events lie in " + std::to_string(s.families.size()) +
                      " families)";
    } else if (s.families.size() == 1 && s.unclassified == 0) {
        s.verdict = AdmissibilityVerdict::single_family_candidates;
        s.statement = "all " + std::to_string(s.events) + " pole events lie in family " +
                      std::to_string(*s.families.begin()) + "; the one-family condition for a Riccati solution holds";
    } else {
        s.verdict = AdmissibilityVerdict::no_candidate;
        s.statement = std::to_string(s.unclassified) + " of " + std::to_string(s.events) + " pole events are unclassified";
    }
    return s;
}

std::string orbit_csv(const Orbit& orbit, const std::vector<PoleEvent>& events, int digits) {
    std::map<int, int> fam;
    for (const auto& e : events) fam[e.n] = e.family;
    std::string out = "n,Re(z),Im(z),Re(w),Im(w),is_pole,family_id\n";
    for (const auto& pt : orbit.points) {
        out += std::to_string(pt.n) + "," + pt.z.re.to_string(digits) + "," + pt.z.im.to_string(digits) + ",";
        if (pt.infinite()) {
            out += "inf,inf,";
        } else {
            Complex w = pt.value();
            out += w.re.to_string(digits) + "," + w.im.to_string(digits) + ",";
        }
        out += std::string(pt.pole ? "1" : "0") + ",";
        auto it = fam.find(pt.n);
        out += std::to_string(it == fam.end() ? 0 : it->second) + "\n";
    }
    return out;
}

std::uint64_t experiment_seed() {
    const char* s = std::getenv("DELTA_CLUNIE_SEED");
    if (!s || !*s) return 0;
    char* end = nullptr;
    unsigned long long v = std::strtoull(s, &end, 10);
    if (*end != '\0') throw NumericError(std::string("DELTA_CLUNIE_SEED is not an unsigned integer: ") + s);
    return v;
}

Complex sample_point(std::uint64_t seed, int index, int precision) {
    std::mt19937_64 gen(seed * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(index));
    auto unit = [&] {
        Rational q(static_cast<long>(gen() >> 11));
        q /= Rational(mpz_class(1) << 52);
        return Rational(q - 1);
    };
    Rational re = unit();
    Rational im = unit();
    return Complex::from_rationals(re, im, precision);
}

}  // namespace dclunie
