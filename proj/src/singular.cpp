#include "dclunie/singular.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "dclunie/errors.hpp"
#include "modseries.hpp"

namespace dclunie {

namespace {

void check_shifts(const NormalizedEquation& eq) {
    for (const auto& s : eq.shifts()) {
        if (!s.is_integer() || s.as_int() < -1 || s.as_int() > 1)
            throw UnsupportedError("singularity analysis needs shifts in {-1, 0, 1}; found w(" + s.arg_text() + ")");
    }
}

std::optional<TopShiftSolution> solve_extreme(const NormalizedEquation& eq, int shift, bool required) {
    check_shifts(eq);
    auto idx = eq.P.shift_index(Shift(shift));
    std::string atom = "w(" + Shift(shift).arg_text() + ")";
    if (!idx) {
        if (required) throw UnsupportedError("P does not involve " + atom);
        return std::nullopt;
    }
    FieldElem A, B;
    for (const auto& [l, c] : eq.P.terms()) {
        if (l[*idx] > 1) {
            if (required) throw UnsupportedError("P is not linear in " + atom);
            return std::nullopt;
        }
        std::vector<Monomial::Factor> f;
        for (std::size_t j = 0; j < l.size(); ++j)
            if (j != *idx && l[j] > 0) f.emplace_back(w_atom(eq.P.shifts()[j]), l[j]);
        FieldElem mono = c * FieldElem(Poly::monomial(Monomial::from_factors(std::move(f))));
        (l[*idx] == 1 ? B : A) += mono;
    }
    Var w0 = w_atom(Shift());
    FieldElem H = eq.H.to_field(w0);
    FieldElem Q = eq.Q.to_field(w0);
    TopShiftSolution s;
    s.direction = shift > 0 ? Direction::forward : Direction::backward;
    s.A = A;
    s.B = B;
    s.rhs = (Q - H * A) / (H * B);
    return s;
}

int atom_degree(const FieldElem& x) {
    int d = 0;
    for (const Poly* p : {&x.num(), &x.den()}) {
        for (const auto& t : p->terms()) {
            int s = 0;
            for (const auto& [v, e] : t.mono.factors())
                if (w_atom_shift(v)) s += e;
            d = std::max(d, s);
        }
    }
    return d;
}

WPolynomial derivative(const WPolynomial& p) {
    std::vector<FieldElem> c;
    for (int i = 1; i <= p.degree(); ++i) c.push_back(p.coeff(i) * FieldElem(i));
    return WPolynomial(std::move(c));
}

WPolynomial exact_quotient(const WPolynomial& a, const WPolynomial& b) {
    auto [q, r] = a.divmod(b);
    if (!r.is_zero()) throw Error("internal: inexact polynomial division");
    return q;
}

std::optional<FieldElem> field_sqrt(const FieldElem& x) {
    if (x.is_zero()) return FieldElem();
    auto n = poly_sqrt(x.num());
    if (!n) return std::nullopt;
    auto d = poly_sqrt(x.den());
    if (!d) return std::nullopt;
    return FieldElem(*n, *d);
}

std::string assumption_text(const FieldElem& x) {
    return x.to_string() + " != 0";
}

}  // namespace

TopShiftSolution solve_top_shift(const NormalizedEquation& eq) {
    return *solve_extreme(eq, 1, true);
}

std::optional<TopShiftSolution> solve_bottom_shift(const NormalizedEquation& eq) {
    return solve_extreme(eq, -1, false);
}

// ---------------------------------------------------------------- roots of H

std::vector<std::pair<WPolynomial, int>> squarefree_decomposition(const WPolynomial& p) {
    std::vector<std::pair<WPolynomial, int>> out;
    if (p.degree() <= 0) return out;
    WPolynomial f = p.monic();
    WPolynomial df = derivative(f);
    WPolynomial a = wpoly_gcd(f, df);
    WPolynomial b = exact_quotient(f, a);
    WPolynomial c = exact_quotient(df, a);
    WPolynomial d = c - derivative(b);
    for (int i = 1; b.degree() > 0; ++i) {
        WPolynomial g = wpoly_gcd(b, d);
        WPolynomial nb = exact_quotient(b, g);
        WPolynomial nc = exact_quotient(d, g);
        if (g.degree() > 0) out.emplace_back(g, i);
        b = nb;
        d = nc - derivative(b);
        if (i > 1000) throw Error("internal: squarefree decomposition did not terminate");
    }
    return out;
}

HRootResult roots_of(const WPolynomial& poly) {
    HRootResult out;
    if (poly.degree() <= 0) return out;
    WPolynomial p = poly.monic();
    int m0 = p.ord_0();
    if (m0 > 0) {
        out.roots.push_back({FieldElem(), m0});
        std::vector<FieldElem> c(p.coefficients().begin() + m0, p.coefficients().end());
        p = WPolynomial(std::move(c));
    }
    for (const auto& [f, mult] : squarefree_decomposition(p)) {
        if (f.degree() == 1) {
            out.roots.push_back({-(f.coeff(0) / f.coeff(1)), mult});
        } else if (f.degree() == 2) {
            FieldElem b = f.coeff(1) / f.coeff(2);
            FieldElem c = f.coeff(0) / f.coeff(2);
            auto s = field_sqrt(b * b - FieldElem(4) * c);
            if (!s) {
                out.unsupported.push_back(f);
                continue;
            }
            FieldElem half(Rational(1, 2));
            out.roots.push_back({(-b + *s) * half, mult});
            out.roots.push_back({(-b - *s) * half, mult});
        } else {
            out.unsupported.push_back(f);
        }
    }
    return out;
}

// ---------------------------------------------------------------- helpers

FieldElem value_at_site(const FieldElem& x, int site, ExpansionPolicy policy) {
    bool opaque = false;
    for (Var v : x.vars())
        if (v.kind() == VarKind::symbol && !v.info().constant) opaque = true;
    if (opaque && policy == ExpansionPolicy::strict) return taylor_at(x, GenericPoint{site}, 0, policy).coeff(0);
    auto f = [site](Var v) {
        const VarInfo& i = v.info();
        if (v.is_z() && site == 0) return Var::anchor();
        if (i.kind == VarKind::symbol && !i.constant) return Var::jet(i.base, site + i.shift, 0, i.period);
        return v;
    };
    FieldElem r = FieldElem::from_coprime(x.num().rename(f), x.den().rename(f));
    if (site != 0 && r.contains(Var::z()))
        r = r.substitute({{Var::z(), FieldElem::variable(Var::anchor()) + FieldElem(site)}});
    return r;
}

std::optional<FieldElem> as_function_of_z(const FieldElem& x) {
    for (Var v : x.vars()) {
        const VarInfo& i = v.info();
        if (i.kind == VarKind::fresh || i.kind == VarKind::aux || i.kind == VarKind::z) return std::nullopt;
        if (i.kind == VarKind::jet && i.deriv != 0) return std::nullopt;
    }
    auto f = [](Var v) {
        const VarInfo& i = v.info();
        if (i.kind == VarKind::anchor) return Var::z();
        if (i.kind == VarKind::jet) return Var::function_instance(i.base, i.shift, i.period);
        return v;
    };
    return FieldElem::from_coprime(x.num().rename(f), x.den().rename(f));
}

FieldElem reflect_sites(const FieldElem& x) {
    auto f = [](Var v) {
        const VarInfo& i = v.info();
        if (i.kind == VarKind::jet) return Var::jet(i.base, -i.shift, i.deriv, i.period);
        return v;
    };
    return FieldElem::from_coprime(x.num().rename(f), x.den().rename(f));
}

std::string to_string(EntryKind k) {
    return k == EntryKind::h_root ? "h-root" : "b-vanishing";
}

std::string to_string(Direction d) {
    return d == Direction::forward ? "forward" : "backward";
}

std::string to_string(AdmissibilityVerdict v) {
    switch (v) {
        case AdmissibilityVerdict::single_family_candidates:
            return "single-family-candidates";
        case AdmissibilityVerdict::multi_family_obstruction:
            return "multi-family-obstruction";
        case AdmissibilityVerdict::no_candidate:
            return "no-candidate";
    }
    return "no-candidate";
}

std::string PolePattern::pole_order_text() const {
    if (parametric) return multiplier == 1 ? "k" : std::to_string(multiplier) + "k";
    return samples.empty() ? "?" : std::to_string(samples.front().pole_order);
}

std::string PolePattern::pre_text() const {
    return pre_finite ? pre_value.to_string() : "inf";
}

std::string PolePattern::post_text() const {
    return post_finite ? post_value.to_string() : "inf";
}

bool AdmissibilityReport::obstructing(int family) const {
    for (const auto& f : families)
        if (f.family == family) return !f.template_match;
    return false;
}

// ---------------------------------------------------------------- LocalEngine

LocalEngine::LocalEngine(const NormalizedEquation& eq, ExpansionPolicy policy)
    : eq_(eq), policy_(policy), fwd_(solve_top_shift(eq)), bwd_(solve_bottom_shift(eq)) {
    rhs_degree_ = std::max(1, atom_degree(fwd_.rhs));
    if (bwd_) rhs_degree_ = std::max(rhs_degree_, atom_degree(bwd_->rhs));
}

LaurentSeries LocalEngine::symbol_series(Var v, int site, int trunc) {
    const VarInfo& i = v.info();
    if (policy_ == ExpansionPolicy::strict)
        throw UnsupportedError("cannot expand through non-constant opaque symbol '" + i.base + "'; declare it constant");
    std::vector<FieldElem> c;
    for (int j = 0; j < trunc; ++j) c.push_back(FieldElem::variable(Var::jet(i.base, site + i.shift, j, i.period)));
    return LaurentSeries::from_coefficients(0, std::move(c), trunc);
}

LaurentSeries LocalEngine::evaluate_at(const FieldElem& x, int site, const std::map<int, LaurentSeries>& atoms,
                                       int cap, Assumptions* as) {
    long long slack = 0;
    for (const auto& [j, s] : atoms)
        if (!s.is_zero() && s.valuation() < 0) slack += static_cast<long long>(-s.valuation()) * rhs_degree_ * 2;
    int jet_trunc = static_cast<int>(std::min<long long>(cap + slack + 1, LaurentSeries::kExact / 2));
    auto series_of = [&](Var v) -> LaurentSeries {
        const VarInfo& i = v.info();
        if (v.is_z()) {
            FieldElem base = FieldElem::variable(Var::anchor()) + FieldElem(site);
            return LaurentSeries::from_coefficients(0, {base, FieldElem(1)}, LaurentSeries::kExact);
        }
        if (i.kind == VarKind::symbol && !i.constant) return symbol_series(v, site, jet_trunc);
        if (auto s = w_atom_shift(v)) {
            auto it = atoms.find(s->as_int());
            if (it == atoms.end()) throw Error("internal: no series for atom w(" + s->arg_text() + ")");
            return it->second;
        }
        return LaurentSeries::constant(FieldElem::variable(v));
    };
    LaurentSeries num = evaluate(x.num(), series_of, cap);
    if (x.den().is_one()) return num;
    LaurentSeries den = evaluate(x.den(), series_of, cap);
    return num.divide(den, as);
}

const FieldElem& LocalEngine::projective_rhs(bool forward, bool inner_pole, bool outer_pole) {
    int key = (forward ? 4 : 0) + (inner_pole ? 2 : 0) + (outer_pole ? 1 : 0);
    auto it = projective_.find(key);
    if (it != projective_.end()) return it->second;
    const TopShiftSolution& sol = forward ? fwd_ : *bwd_;
    std::map<Var, FieldElem> sub;
    FieldElem one(1);
    if (inner_pole) sub.emplace(w_atom(Shift()), one / FieldElem::variable(Var::aux("u(z)")));
    Shift o(forward ? -1 : 1);
    if (outer_pole) sub.emplace(w_atom(o), one / FieldElem::variable(Var::aux("u(" + o.arg_text() + ")")));
    return projective_.emplace(key, sub.empty() ? sol.rhs : sol.rhs.substitute(sub)).first->second;
}

SiteValue LocalEngine::propagate(const std::map<int, SiteValue>& sites, int target, Assumptions& as) {
    bool forward;
    int s;
    int dir;
    if (sites.count(target - 1) && sites.count(target - 2)) {
        forward = true;
        s = target - 1;
        dir = -1;
    } else if (bwd_ && sites.count(target + 1) && sites.count(target + 2)) {
        forward = false;
        s = target + 1;
        dir = 1;
    } else {
        throw Error("propagation to site " + std::to_string(target) + " needs two neighbouring sites on one side");
    }
    const SiteValue& inner = sites.at(s);
    const SiteValue& outer = sites.at(s + dir);
    const FieldElem& x = projective_rhs(forward, inner.pole, outer.pole);
    Var ui = Var::aux("u(z)");
    Var uo = Var::aux("u(" + Shift(dir).arg_text() + ")");
    int cap = 0;
    for (const SiteValue* a : {&inner, &outer})
        if (!a->s.is_exact()) cap = std::max(cap, a->s.trunc());
    if (cap == 0) cap = 1;

    auto series_of = [&](Var v) -> LaurentSeries {
        if (v == ui) return inner.s;
        if (v == uo) return outer.s;
        if (v.is_z()) {
            FieldElem base = FieldElem::variable(Var::anchor()) + FieldElem(s);
            return LaurentSeries::from_coefficients(0, {base, FieldElem(1)}, LaurentSeries::kExact);
        }
        const VarInfo& i = v.info();
        if (i.kind == VarKind::symbol && !i.constant) return symbol_series(v, s, cap);
        if (auto sh = w_atom_shift(v)) {
            int j = sh->as_int();
            if (j == 0) return inner.s;
            if (j == dir) return outer.s;
            throw Error("internal: unexpected atom w(" + sh->arg_text() + ")");
        }
        return LaurentSeries::constant(FieldElem::variable(v));
    };
    LaurentSeries num = evaluate(x.num(), series_of, cap);
    LaurentSeries den = x.den().is_one() ? LaurentSeries::constant(FieldElem(1)) : evaluate(x.den(), series_of, cap);
    std::string where = "while propagating to site " + std::to_string(target);
    if (num.is_zero() && den.is_zero()) throw TruncationExhausted("truncation exhausted " + where);
    if (den.is_zero()) {
        // 1/w = den/num is known to vanish to order trunc(den) - val(num).
        if (num.valuation() >= den.trunc()) throw TruncationExhausted("truncation exhausted " + where);
        as.classify(num.leading());
        return SiteValue::reciprocal(LaurentSeries::zero(den.trunc() - num.valuation()));
    }
    as.classify(den.leading());
    if (num.is_zero()) {
        if (num.trunc() - den.valuation() <= 0) throw TruncationExhausted("truncation exhausted " + where);
        return SiteValue::finite(LaurentSeries::zero(num.trunc() - den.valuation()));
    }
    as.classify(num.leading());
    if (num.valuation() < den.valuation()) return SiteValue::reciprocal(den.divide(num, &as));
    return SiteValue::finite(num.divide(den, &as));
}

LaurentSeries LocalEngine::propagate(const std::map<int, LaurentSeries>& sites, int target, Assumptions& as) {
    std::map<int, SiteValue> sv;
    for (const auto& [j, x] : sites) {
        if (!x.is_zero() && x.valuation() < 0)
            sv.emplace(j, SiteValue::reciprocal(x.inverse(&as)));
        else
            sv.emplace(j, SiteValue::finite(x));
    }
    SiteValue r = propagate(sv, target, as);
    if (r.pole && r.s.is_zero())
        throw TruncationExhausted("truncation exhausted while propagating to site " + std::to_string(target));
    LaurentSeries out = r.laurent(&as);
    if (out.is_zero() && out.trunc() <= 0)
        throw Error("truncation exhausted while propagating to site " + std::to_string(target));
    return out;
}

LaurentSeries LocalEngine::residual(const std::map<int, LaurentSeries>& sites, int site) {
    Var w0 = w_atom(Shift());
    FieldElem expr = eq_.H.to_field(w0) * eq_.P.to_field() - eq_.Q.to_field(w0);
    std::map<int, LaurentSeries> atoms;
    int tmin = LaurentSeries::kExact;
    for (const auto& s : eq_.shifts()) {
        int j = s.as_int();
        atoms.emplace(j, sites.at(site + j));
        tmin = std::min(tmin, sites.at(site + j).trunc());
    }
    return evaluate_at(expr, site, atoms, tmin);
}

Propagation propagate(const NormalizedEquation& eq, const std::map<int, LaurentSeries>& sites, int target,
                      ExpansionPolicy policy) {
    LocalEngine engine(eq, policy);
    Assumptions as;
    Propagation p;
    p.value = engine.propagate(sites, target, as);
    p.zero_branches = as.assumed();
    return p;
}

// ---------------------------------------------------------------- enumeration

namespace {

enum class EntryShape { root, solve_inner, outer_root };

struct Entry {
    EntryKind kind;
    Direction direction;
    EntryShape shape;
    int sign;             // -1: entry at zhat-1 (forward), +1: entry at zhat+1 (backward)
    FieldElem value;      // root (function of z), or solved value in terms of the outer atom
    int multiplicity = 1;
    std::string condition;
};

std::string site_text(int s) {
    if (s == 0) return "zhat";
    return "zhat" + std::string(s > 0 ? "+" : "-") + std::to_string(s > 0 ? s : -s);
}

struct RunResult {
    bool pole = false;
    PatternSample sample;
    std::string note;
};

struct ExactPass {
    bool pole = false;
    std::map<int, SiteValue> sites;
    std::vector<FieldElem> assumptions;
};

struct ModSite {
    bool pole = false;
    modp::Series s;
};

struct ModPass {
    bool pole = false;
    bool enough = false;  // every order below is determined
    int K = 0;
    int pre_pole = 0;
    int post_pole = 0;
    Contact pre;
    Contact post;
};

class Enumerator {
public:
    Enumerator(const NormalizedEquation& eq, const SingularOptions& opt) : eng_(eq, opt.policy), opt_(opt) {}

    EnumerationResult run();

private:
    std::vector<Entry> entries_for(const TopShiftSolution& sol, Direction dir, const HRootResult& roots,
                                   EnumerationResult& res);
    RunResult run_entry(const Entry& e, int k);
    ExactPass exact(const Entry& e, int k, int depth);
    ModPass modular(const Entry& e, int k, int depth, modp::u64 salt, const std::optional<FieldElem>& pre_fn,
                    const std::optional<FieldElem>& post_fn);
    modp::Series mod_var(Var v, int site, int jet_trunc, modp::u64 salt);
    modp::Series mod_eval(const FieldElem& x, int site, const std::map<int, modp::Series>& atoms, int cap,
                          modp::u64 salt);
    ModSite mod_propagate(const std::map<int, ModSite>& sites, int target, modp::u64 salt);
    void parametric(const Entry& e, PolePattern& p);

    LocalEngine eng_;
    SingularOptions opt_;
};

std::vector<Entry> Enumerator::entries_for(const TopShiftSolution& sol, Direction dir, const HRootResult& roots,
                                           EnumerationResult& res) {
    std::vector<Entry> out;
    int sg = dir == Direction::forward ? -1 : 1;
    for (const auto& r : roots.roots) {
        Entry e{EntryKind::h_root, dir, EntryShape::root, sg, r.value, r.multiplicity, ""};
        e.condition = "w(" + site_text(sg) + ") = " + value_at_site(r.value, sg, eng_.policy()).to_string();
        out.push_back(std::move(e));
    }
    Var w0 = w_atom(Shift());
    Var wo = w_atom(Shift(sg));
    const FieldElem& B = sol.B;
    bool has0 = B.contains(w0);
    bool hasO = B.contains(wo);
    if (!has0 && !hasO) return out;
    auto bw = WPolynomial::from_field(B, w0);
    if (has0 && bw && bw->degree() == 1) {
        FieldElem v = -(bw->coeff(0) / bw->coeff(1));
        Entry e{EntryKind::b_vanishing, dir, EntryShape::solve_inner, sg, v, 1, ""};
        std::map<Var, FieldElem> disp{{wo, FieldElem::variable(Var::aux("w(" + site_text(2 * sg) + ")"))}};
        e.condition = "w(" + site_text(sg) + ") = " + value_at_site(v.substitute(disp), sg, eng_.policy()).to_string();
        out.push_back(std::move(e));
    } else if (!has0) {
        auto bo = WPolynomial::from_field(B, wo);
        HRootResult br = bo ? roots_of(*bo) : HRootResult{};
        for (const auto& r : br.roots) {
            Entry e{EntryKind::b_vanishing, dir, EntryShape::outer_root, sg, r.value, r.multiplicity, ""};
            e.condition = "w(" + site_text(2 * sg) + ") = " + value_at_site(r.value, sg, eng_.policy()).to_string();
            out.push_back(std::move(e));
        }
        for (const auto& f : br.unsupported)
            res.failures.push_back(to_string(dir) + " b-vanishing: factor " + f.to_string() + " has no roots over the coefficient field");
    } else {
        res.failures.push_back(to_string(dir) + " b-vanishing: coefficient " + B.to_string() +
                               " of the extreme shift is not linear in w(z)");
    }
    return out;
}

ExactPass Enumerator::exact(const Entry& e, int k, int depth) {
    ExactPass ep;
    FreshSeed gs("g");
    FreshSeed vs("v");
    Assumptions as;
    int entry = e.sign;
    int outer = 2 * e.sign;
    auto correction = [&](LaurentSeries base) {
        base = base.truncated(depth);
        if (depth <= k) return base;
        std::vector<FieldElem> c;
        c.push_back(FieldElem::variable(vs.next(true)));
        for (int j = k + 1; j < depth; ++j) c.push_back(FieldElem::variable(vs.next()));
        return base + LaurentSeries::from_coefficients(k, std::move(c), depth);
    };
    std::map<int, LaurentSeries> init;
    switch (e.shape) {
        case EntryShape::root:
            init[outer] = generic_finite_series(gs, depth);
            init[entry] = correction(taylor_at(e.value, GenericPoint{entry}, depth - 1, eng_.policy()));
            break;
        case EntryShape::solve_inner: {
            init[outer] = generic_finite_series(gs, depth);
            std::map<int, LaurentSeries> atoms{{e.sign, init[outer]}};
            init[entry] = correction(eng_.evaluate_at(e.value, entry, atoms, depth, &as));
            break;
        }
        case EntryShape::outer_root:
            init[entry] = generic_finite_series(gs, depth);
            init[outer] = correction(eng_.evaluate_at(e.value, entry, {}, depth, &as));
            break;
    }
    for (auto& [j, x] : init) ep.sites.emplace(j, SiteValue::finite(std::move(x)));
    SiteValue pole = eng_.propagate(ep.sites, 0, as);
    ep.assumptions = as.assumed();
    if (!pole.pole) return ep;
    ep.pole = true;
    ep.sites[0] = pole;
    ep.sites[-e.sign] = eng_.propagate(ep.sites, -e.sign, as);
    for (int j : {-1, 1}) {
        const SiteValue& v = ep.sites[j];
        if (!v.pole && v.s.trunc() < 1) throw TruncationExhausted("value at " + site_text(j) + " not determined");
    }
    ep.assumptions = as.assumed();
    return ep;
}

modp::Series Enumerator::mod_var(Var v, int site, int jet_trunc, modp::u64 salt) {
    using modp::Series;
    const VarInfo& i = v.info();
    if (v.is_z())
        return Series::from_coefficients(
            0, {modp::add(modp::point_value(Var::anchor(), salt), modp::image(Rational(site))), 1}, Series::kExact);
    if (i.kind == VarKind::symbol && !i.constant) {
        if (eng_.policy() == ExpansionPolicy::strict)
            throw UnsupportedError("cannot expand through non-constant opaque symbol '" + i.base + "'; declare it constant");
        std::vector<modp::u64> c;
        for (int j = 0; j < jet_trunc; ++j)
            c.push_back(modp::point_value(Var::jet(i.base, site + i.shift, j, i.period), salt));
        return Series::from_coefficients(0, std::move(c), jet_trunc);
    }
    return Series::constant(modp::point_value(v, salt));
}

modp::Series Enumerator::mod_eval(const FieldElem& x, int site, const std::map<int, modp::Series>& atoms, int cap,
                                  modp::u64 salt) {
    long long slack = 0;
    for (const auto& [j, s] : atoms)
        if (!s.is_zero() && s.valuation() < 0) slack += static_cast<long long>(-s.valuation()) * 4;
    int jet_trunc = static_cast<int>(std::min<long long>(cap + slack + 1, modp::Series::kExact / 2));
    auto series_of = [&](Var v) -> modp::Series {
        if (auto s = w_atom_shift(v)) {
            auto it = atoms.find(s->as_int());
            if (it == atoms.end()) throw Error("internal: no series for atom w(" + s->arg_text() + ")");
            return it->second;
        }
        return mod_var(v, site, jet_trunc, salt);
    };
    modp::Series num = modp::evaluate(x.num(), series_of, cap);
    if (x.den().is_one()) return num;
    modp::Series den = modp::evaluate(x.den(), series_of, cap);
    if (den.is_zero()) throw TruncationExhausted("denominator vanishes to the computed order at " + site_text(site));
    return num.divide(den);
}

// Mirror of LocalEngine::propagate over F_p.
ModSite Enumerator::mod_propagate(const std::map<int, ModSite>& sites, int target, modp::u64 salt) {
    using modp::Series;
    bool forward = sites.count(target - 1) && sites.count(target - 2);
    int dir = forward ? -1 : 1;
    int s = target + dir;
    const ModSite& inner = sites.at(s);
    const ModSite& outer = sites.at(s + dir);
    const FieldElem& x = eng_.projective_rhs(forward, inner.pole, outer.pole);
    Var ui = Var::aux("u(z)");
    Var uo = Var::aux("u(" + Shift(dir).arg_text() + ")");
    int cap = 0;
    for (const ModSite* a : {&inner, &outer})
        if (!a->s.is_exact()) cap = std::max(cap, a->s.trunc());
    if (cap == 0) cap = 1;
    auto series_of = [&](Var v) -> Series {
        if (v == ui) return inner.s;
        if (v == uo) return outer.s;
        if (auto sh = w_atom_shift(v)) {
            int j = sh->as_int();
            if (j == 0) return inner.s;
            if (j == dir) return outer.s;
            throw Error("internal: unexpected atom w(" + sh->arg_text() + ")");
        }
        return mod_var(v, s, cap, salt);
    };
    Series num = modp::evaluate(x.num(), series_of, cap);
    Series den = x.den().is_one() ? Series::constant(1) : modp::evaluate(x.den(), series_of, cap);
    std::string where = "while propagating to site " + std::to_string(target);
    if (num.is_zero() && den.is_zero()) throw TruncationExhausted("truncation exhausted " + where);
    if (den.is_zero()) {
        if (num.valuation() >= den.trunc()) throw TruncationExhausted("truncation exhausted " + where);
        return {true, Series::zero(den.trunc() - num.valuation())};
    }
    if (num.is_zero()) {
        if (num.trunc() - den.valuation() <= 0) throw TruncationExhausted("truncation exhausted " + where);
        return {false, Series::zero(num.trunc() - den.valuation())};
    }
    if (num.valuation() < den.valuation()) return {true, den.divide(num)};
    return {false, num.divide(den)};
}

ModPass Enumerator::modular(const Entry& e, int k, int depth, modp::u64 salt, const std::optional<FieldElem>& pre_fn,
                            const std::optional<FieldElem>& post_fn) {
    using modp::Series;
    ModPass mp;
    auto generic = [&](const std::string& prefix, int from, int trunc) {
        std::vector<modp::u64> c;
        for (int j = from; j < trunc; ++j) c.push_back(modp::point_value(prefix + std::to_string(j), salt));
        return Series::from_coefficients(from, std::move(c), trunc);
    };
    auto correction = [&](const Series& base) {
        Series b = base.truncated(depth);
        return depth > k ? b + generic("#v", k, depth) : b;
    };
    int entry = e.sign;
    int outer = 2 * e.sign;
    std::map<int, ModSite> sites;
    switch (e.shape) {
        case EntryShape::root:
            sites[outer] = {false, generic("#g", 0, depth)};
            sites[entry] = {false, correction(mod_eval(e.value, entry, {}, depth, salt))};
            break;
        case EntryShape::solve_inner:
            sites[outer] = {false, generic("#g", 0, depth)};
            sites[entry] = {false, correction(mod_eval(e.value, entry, {{e.sign, sites[outer].s}}, depth, salt))};
            break;
        case EntryShape::outer_root:
            sites[entry] = {false, generic("#g", 0, depth)};
            sites[outer] = {false, correction(mod_eval(e.value, entry, {}, depth, salt))};
            break;
    }
    ModSite pole = mod_propagate(sites, 0, salt);
    if (!pole.pole) return mp;
    mp.pole = true;
    if (pole.s.is_zero()) return mp;
    mp.K = pole.s.valuation();
    sites[0] = pole;
    sites[-e.sign] = mod_propagate(sites, -e.sign, salt);
    mp.enough = true;
    auto assess = [&](const ModSite& v, const std::optional<FieldElem>& fn, int& pole_order, Contact& c) {
        if (v.pole) {
            if (v.s.is_zero()) mp.enough = false;
            pole_order = v.s.valuation();
            return;
        }
        if (v.s.trunc() <= mp.K) mp.enough = false;
        if (!fn) return;
        Series d = v.s - mod_eval(*fn, 0, {}, v.s.trunc(), salt);
        c.order = d.valuation();
        c.lower_bound = d.is_zero();
    };
    assess(sites[-1], pre_fn, mp.pre_pole, mp.pre);
    assess(sites[1], post_fn, mp.post_pole, mp.post);
    return mp;
}

RunResult Enumerator::run_entry(const Entry& e, int k) {
    RunResult rr;
    int K = std::max(1, e.multiplicity) * k;
    // Shallow exact pass: the triple values and the genericity assumptions.
    std::optional<ExactPass> ep;
    std::string last;
    for (int depth = 1; depth <= K + 4 + opt_.extra_terms && !ep; ++depth) {
        try {
            ep = exact(e, k, depth);
        } catch (const TruncationExhausted& x) {
            last = x.what();
        }
    }
    if (!ep) throw Error(last);
    if (!ep->pole) {
        rr.note = "entry " + e.condition + " at order " + std::to_string(k) + " does not produce a pole";
        return rr;
    }
    const SiteValue& pre = ep->sites.at(-1);
    const SiteValue& post = ep->sites.at(1);
    std::optional<FieldElem> pre_fn = pre.pole ? std::nullopt : as_function_of_z(pre.s.coeff(0));
    std::optional<FieldElem> post_fn = post.pole ? std::nullopt : as_function_of_z(post.s.coeff(0));

    // Deep pass over F_p at two independent points. Accidental vanishing at a point only
    // raises valuations, so the smaller value of each order is kept.
    std::optional<ModPass> best;
    for (modp::u64 salt : {1, 2}) {
        int depth = K + 2 + opt_.extra_terms;
        ModPass mp;
        for (int attempt = 0; attempt < 8; ++attempt) {
            try {
                mp = modular(e, k, depth, salt, pre_fn, post_fn);
                if (!mp.pole || mp.enough) break;
            } catch (const TruncationExhausted&) {
            }
            depth += std::max(2, mp.K / 2 + 1);
        }
        if (!mp.pole) throw Error("exact and modular passes disagree on the pole at zhat");
        if (!mp.enough) throw Error("truncation exhausted in the modular pass at depth " + std::to_string(depth));
        if ((mp.pre_pole > 0) != pre.pole || (mp.post_pole > 0) != post.pole)
            throw Error("exact and modular passes disagree on the sites next to the pole");
        if (!best) {
            best = mp;
            continue;
        }
        auto lower = [](Contact& a, const Contact& b) {
            if (b.order >= 0 && (a.order < 0 || b.order < a.order || (b.order == a.order && !b.lower_bound))) a = b;
        };
        best->K = std::min(best->K, mp.K);
        best->pre_pole = std::min(best->pre_pole, mp.pre_pole);
        best->post_pole = std::min(best->post_pole, mp.post_pole);
        lower(best->pre, mp.pre);
        lower(best->post, mp.post);
    }
    rr.pole = true;
    PatternSample& s = rr.sample;
    s.k = k;
    s.pole_order = best->K;
    s.pre_pole_order = best->pre_pole;
    s.post_pole_order = best->post_pole;
    if (!pre.pole) s.pre = pre.s;
    if (!post.pole) s.post = post.s;
    s.pole = ep->sites.at(0).s;
    s.pre_contact = best->pre;
    s.post_contact = best->post;
    s.assumptions = ep->assumptions;
    return rr;
}

void Enumerator::parametric(const Entry& e, PolePattern& p) {
    // Leading-order valuation count with the entry order kept symbolic.
    const TopShiftSolution& sol = e.direction == Direction::forward ? eng_.forward() : *eng_.backward();
    Var w0 = w_atom(Shift());
    Var wo = w_atom(Shift(e.sign));
    Var g = Var::fresh("_g", false);
    Var hvar = Var::aux("W");
    FieldElem H = eng_.equation().H.to_field(w0);
    FieldElem Q = eng_.equation().Q.to_field(w0);
    FieldElem num = Q - H * sol.A;
    std::map<Var, FieldElem> sub;
    int predicted = 0;
    bool ok = true;
    auto check = [&](const std::string& what, const FieldElem& x, bool exact) {
        FieldElem v = value_at_site(x.substitute(sub), e.sign, eng_.policy());
        Nonzero n = classify_nonzero(v);
        if (n == Nonzero::zero) {
            ok = false;
            p.parametric_conditions.push_back(what + " vanishes identically");
        } else if (n == Nonzero::inconclusive || !exact) {
            p.parametric_conditions.push_back(what + " != 0 (generic)");
        } else {
            p.parametric_conditions.push_back(what + " != 0");
        }
    };
    switch (e.shape) {
        case EntryShape::root: {
            sub = {{w0, e.value}, {wo, FieldElem::variable(g)}};
            WPolynomial factor({-e.value, FieldElem(1)});
            WPolynomial rest = eng_.equation().H;
            for (int i = 0; i < e.multiplicity; ++i) rest = exact_quotient(rest, factor);
            check("Q at the root", Q, true);
            check("H/(w-r)^" + std::to_string(e.multiplicity) + " at the root", rest.to_field(hvar).substitute({{hvar, e.value}}), true);
            check("B at the root", sol.B, false);
            predicted = e.multiplicity;
            break;
        }
        case EntryShape::solve_inner: {
            sub = {{wo, FieldElem::variable(g)}};
            FieldElem inner = e.value.substitute(sub);
            sub[w0] = inner;
            auto bw = WPolynomial::from_field(sol.B, w0);
            check("dB/dw", bw->coeff(1), false);
            check("Q - H*A on B = 0", num, false);
            check("H on B = 0", H, false);
            predicted = 1;
            break;
        }
        case EntryShape::outer_root: {
            sub = {{w0, FieldElem::variable(g)}, {wo, e.value}};
            check("Q - H*A on B = 0", num, false);
            check("H at the generic value", H, false);
            predicted = e.multiplicity;
            break;
        }
    }
    p.multiplier = predicted;
    bool all = ok && !p.samples.empty();
    for (const auto& s : p.samples) {
        if (s.pole_order != predicted * s.k) {
            all = false;
            p.notes.push_back("leading-order prediction " + std::to_string(predicted) + "k differs from the sweep at k=" +
                              std::to_string(s.k) + " (pole order " + std::to_string(s.pole_order) + ")");
        }
    }
    p.parametric = all;
}

// Key used to merge families: the pre-value is rewritten as a free parameter when it is
// linear in one seed symbol, so entries reached from both directions coincide.
std::string family_key(const PolePattern& p) {
    FieldElem pre = p.pre_value;
    FieldElem post = p.post_value;
    if (p.pre_finite) {
        std::vector<Var> seeds;
        for (Var v : pre.vars())
            if (v.kind() == VarKind::fresh) seeds.push_back(v);
        if (seeds.size() == 1 && pre.den().degree(seeds[0]) == 0 && pre.num().degree(seeds[0]) == 1) {
            Var s = seeds[0];
            auto c = pre.num().coefficients(s);
            FieldElem u = FieldElem(c[1], pre.den());
            FieldElem v = FieldElem(c[0], pre.den());
            bool clean = !u.contains(s) && !v.contains(s);
            for (Var x : u.vars())
                if (x.kind() == VarKind::fresh) clean = false;
            if (clean) {
                FieldElem X = FieldElem::variable(Var::fresh("_X", false));
                std::map<Var, FieldElem> m{{s, (X - v) / u}};
                pre = X;
                if (p.post_finite) post = post.substitute(m);
            }
        }
    }
    return std::to_string(static_cast<int>(p.kind)) + "|" + (p.pre_finite ? pre.to_string() : "inf") + "|" +
           (p.post_finite ? post.to_string() : "inf") + "|" + p.pole_order_text();
}

EnumerationResult Enumerator::run() {
    EnumerationResult res;
    res.max_order = opt_.max_order;
    HRootResult roots = roots_of(eng_.equation().H);
    for (const auto& f : roots.unsupported)
        res.failures.push_back("factor " + f.to_string() + " of H has no roots over the coefficient field");
    std::vector<Entry> entries = entries_for(eng_.forward(), Direction::forward, roots, res);
    if (eng_.backward()) {
        auto b = entries_for(*eng_.backward(), Direction::backward, roots, res);
        entries.insert(entries.end(), b.begin(), b.end());
    } else {
        res.failures.push_back("P is not linear in w(z-1): time-reversed entries skipped");
    }

    std::vector<PolePattern> found;
    for (const auto& e : entries) {
        std::vector<PatternSample> samples;
        std::vector<std::string> notes;
        bool pruned = false;
        for (int k = 1; k <= opt_.max_order; ++k) {
            RunResult rr;
            try {
                rr = run_entry(e, k);
            } catch (const UnsupportedError&) {
                throw;
            } catch (const Error& err) {
                res.failures.push_back(e.condition + " (" + to_string(e.direction) + ", k=" + std::to_string(k) +
                                       "): " + err.what());
                continue;
            }
            if (!rr.pole) {
                notes.push_back(rr.note);
                continue;
            }
            if (static_cast<int>(rr.sample.assumptions.size()) > opt_.max_assumptions) {
                res.pruned.push_back(e.condition + " at k=" + std::to_string(k) + ": " +
                                     std::to_string(rr.sample.assumptions.size()) + " stacked genericity assumptions");
                pruned = true;
                continue;
            }
            samples.push_back(std::move(rr.sample));
        }
        if (samples.empty()) {
            for (auto& n : notes) res.failures.push_back(n);
            (void)pruned;
            continue;
        }
        // Group the sweep by triple; normally every k gives the same triple.
        std::vector<PolePattern> groups;
        for (auto& s : samples) {
            PolePattern p;
            p.kind = e.kind;
            p.direction = e.direction;
            p.entry_site = e.sign;
            p.entry_condition = e.condition;
            p.pre_finite = s.pre_pole_order == 0;
            p.post_finite = s.post_pole_order == 0;
            if (p.pre_finite) p.pre_value = s.pre.coeff(0);
            if (p.post_finite) p.post_value = s.post.coeff(0);
            p.post_pole_order = std::max(s.pre_pole_order, s.post_pole_order);
            bool merged = false;
            for (auto& g : groups) {
                if (g.pre_finite == p.pre_finite && g.post_finite == p.post_finite && g.pre_value == p.pre_value &&
                    g.post_value == p.post_value) {
                    g.confirmed_orders.push_back(s.k);
                    g.samples.push_back(std::move(s));
                    merged = true;
                    break;
                }
            }
            if (!merged) {
                p.confirmed_orders.push_back(s.k);
                p.samples.push_back(std::move(s));
                groups.push_back(std::move(p));
            }
        }
        for (auto& g : groups) {
            parametric(e, g);
            if (groups.size() > 1) g.parametric = false;
            g.confined = g.pre_finite && g.post_finite;
            std::set<std::string> seen;
            for (const auto& s : g.samples)
                for (const auto& a : s.assumptions)
                    if (seen.insert(a.to_string()).second)
                        g.notes.push_back("assumed " + assumption_text(a) + " (zero branch not enumerated)");
            for (const auto& n : notes) g.notes.push_back(n);
            found.push_back(std::move(g));
        }
    }

    std::stable_sort(found.begin(), found.end(), [](const PolePattern& a, const PolePattern& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.entry_site != b.entry_site) return a.entry_site < b.entry_site;
        return a.entry_condition < b.entry_condition;
    });
    std::map<std::string, std::size_t> index;
    for (auto& p : found) {
        std::string key = family_key(p);
        auto it = index.find(key);
        if (it != index.end()) {
            res.families[it->second].notes.push_back("also reached by the " + to_string(p.direction) + " entry " +
                                                     p.entry_condition);
            continue;
        }
        index.emplace(key, res.families.size());
        res.families.push_back(std::move(p));
    }
    for (std::size_t i = 0; i < res.families.size(); ++i) res.families[i].id = static_cast<int>(i) + 1;
    return res;
}

}  // namespace

EnumerationResult enumerate_pole_patterns(const NormalizedEquation& eq, const SingularOptions& opt) {
    if (opt.max_order < 1) throw Error("max_order must be at least 1");
    Enumerator en(eq, opt);
    return en.run();
}

// ---------------------------------------------------------------- admissibility

namespace {

std::string contact_gap(const Contact& c, int K, const char* which) {
    if (c.order < 0) return std::string(which) + "-value contact was not computed";
    if (c.lower_bound || c.order > K) return std::string(which) + "-value is attained beyond order " + std::to_string(K);
    if (c.order < K)
        return std::string(which) + "-value is attained to order " + std::to_string(c.order) + ", below the pole order " +
               std::to_string(K);
    return "";
}

}  // namespace

AdmissibilityReport riccati_admissibility(const std::vector<PolePattern>& patterns) {
    AdmissibilityReport rep;
    for (const auto& p : patterns) {
        FamilyAssessment fa;
        fa.family = p.id;
        auto pre = p.pre_finite ? as_function_of_z(p.pre_value) : std::nullopt;
        auto post = p.post_finite ? as_function_of_z(p.post_value) : std::nullopt;
        if (!p.confined) {
            fa.reason = "adjacent pole: the family is not confined";
        } else if (!pre) {
            fa.reason = "pre-value " + p.pre_text() + " is not a function of z (free data)";
        } else if (!post) {
            fa.reason = "post-value " + p.post_text() + " is not a function of z (free data)";
        } else {
            for (const auto& s : p.samples) {
                std::string r = contact_gap(s.pre_contact, s.pole_order, "pre");
                if (r.empty()) r = contact_gap(s.post_contact, s.pole_order, "post");
                if (!r.empty()) {
                    fa.reason = r + " (k=" + std::to_string(s.k) + ")";
                    break;
                }
            }
            if (fa.reason.empty()) {
                fa.template_match = true;
                RiccatiCandidate c;
                c.a = *post;
                c.c = shift(*pre, 1);
                c.source_family = p.id;
                c.consistent = true;
                rep.candidates.push_back(std::move(c));
            }
        }
        rep.families.push_back(std::move(fa));
    }
    std::string obstructing;
    for (const auto& f : rep.families)
        if (!f.template_match) obstructing += (obstructing.empty() ? "" : ", ") + std::to_string(f.family);
    if (rep.candidates.empty()) {
        rep.verdict = AdmissibilityVerdict::no_candidate;
        rep.statement = patterns.empty()
                            ? "no pole families were found, so no Riccati candidate arises"
                            : "no family has the Riccati pole template; a solution with infinitely many poles of "
                              "families " + obstructing + " cannot solve a difference Riccati equation";
    } else {
        rep.verdict = AdmissibilityVerdict::single_family_candidates;
        rep.statement =
            "a solution can satisfy w(z+1) = (a(z)w(z) + b(z))/(w(z) - c(z)) only if all but finitely many of its "
            "poles lie in one template family; candidate (a, c) pairs are listed per family";
        if (!obstructing.empty()) rep.statement += "; families " + obstructing + " are Riccati-obstructing";
    }
    return rep;
}

}  // namespace dclunie
