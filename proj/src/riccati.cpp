#include "dclunie/riccati.hpp"

#include "dclunie/eqparse.hpp"
#include "dclunie/singular.hpp"

namespace dclunie {

namespace {

LaurentSeries at(const FieldElem& x, int site, int cap) {
    return taylor_at(x, GenericPoint{site}, cap - 1, ExpansionPolicy::jets);
}

std::string paren(const FieldElem& x) {
    std::string s = x.to_string();
    return s.find_first_of("+-") == std::string::npos ? s : "(" + s + ")";
}

}  // namespace

void RiccatiEquation::require_nondegenerate() const {
    if (degenerate())
        throw DegenerateError("degenerate Riccati equation: a*c + b vanishes identically, so w(z+1) = " +
                              a.to_string());
}

std::string RiccatiEquation::to_string() const {
    std::string num = paren(a) + "*w(z) + " + paren(b);
    return "w(z+1) = (" + num + ") / (w(z) - " + paren(c) + ")";
}

RiccatiEquation riccati_from_text(const std::string& text, const SymbolTable& symbols) {
    RawEquation raw = parse_equation(text, symbols);
    Var w0 = w_atom(Shift());
    FieldElem lhs = evaluate_expr(*raw.lhs, raw.symbols);
    if (!(lhs == FieldElem::variable(w_atom(Shift(1)))))
        throw NormalizeError("a Riccati equation must have w(z+1) alone on the left-hand side");
    FieldElem rhs = evaluate_expr(*raw.rhs, raw.symbols);
    for (Var v : rhs.vars())
        if (auto s = w_atom_shift(v); s && !(*s == Shift()))
            throw NormalizeError("the right-hand side of a Riccati equation may only involve w(z)");
    // Read numerator and denominator as written so that w/w stays a (degenerate) Moebius map.
    FieldElem num(rhs.num()), den(rhs.den());
    if (raw.rhs->kind == Expr::Kind::div) {
        FieldElem n = evaluate_expr(*raw.rhs->lhs, raw.symbols);
        FieldElem d = evaluate_expr(*raw.rhs->rhs, raw.symbols);
        auto nw = WPolynomial::from_field(n, w0);
        auto dw = WPolynomial::from_field(d, w0);
        if (nw && dw && nw->degree() <= 1 && dw->degree() == 1) {
            num = n;
            den = d;
        }
    }
    auto N = WPolynomial::from_field(num, w0);
    auto D = WPolynomial::from_field(den, w0);
    if (!N || !D || N->degree() > 1 || D->degree() != 1)
        throw UnsupportedError("right-hand side is not a Moebius map (a*w + b)/(w - c) in w(z)");
    FieldElem d1 = D->coeff(1);
    RiccatiEquation rq{N->coeff(1) / d1, N->coeff(0) / d1, -(D->coeff(0) / d1)};
    return rq;
}

RiccatiExpansion local_expansion_check(const RiccatiEquation& rq, int k, int extra) {
    if (k < 1) throw Error("pole order k must be at least 1");
    if (extra < 1) extra = 1;
    rq.require_nondegenerate();
    RiccatiExpansion ex;
    ex.k = k;
    int cap = k + extra + 1;
    Assumptions as;
    FreshSeed seed("beta");
    FieldElem D = rq.discriminant();
    ex.pole = generic_pole_series(seed, k, cap);
    // w(z+1) = a + (ac+b)/(w - c) at zhat, and w(z-1) = c(z-1) + (ac+b)(z-1)/(w - a(z-1)) at zhat-1.
    LaurentSeries a0 = at(rq.a, 0, cap);
    LaurentSeries c0 = at(rq.c, 0, cap);
    ex.post = (a0 + at(D, 0, cap) * (ex.pole - c0).inverse(&as, cap)).truncated(cap);
    LaurentSeries cm = at(rq.c, -1, cap);
    LaurentSeries am = at(rq.a, -1, cap);
    ex.pre = (cm + at(D, -1, cap) * (ex.pole - am).inverse(&as, cap)).truncated(cap);
    ex.post_value = ex.post.coeff(0);
    ex.pre_value = ex.pre.coeff(0);
    LaurentSeries gp = ex.post - a0;
    LaurentSeries gm = ex.pre - cm;
    ex.post_gap = gp.valuation();
    ex.pre_gap = gm.valuation();
    if (gp.trunc() > k) ex.gamma = gp.coeff(k);
    if (gm.trunc() > k) ex.alpha = gm.coeff(k);

    LaurentSeries r1 = ex.post * (ex.pole - c0) - (a0 * ex.pole + at(rq.b, 0, cap));
    LaurentSeries r2 = ex.pole * (ex.pre - cm) - (am * ex.pre + at(rq.b, -1, cap));
    ex.residual_zero = r1.is_zero() && r2.is_zero() && r1.trunc() > 0 && r2.trunc() > 0;
    ex.template_match = ex.post_value == value_at_site(rq.a, 0) && ex.pre_value == value_at_site(rq.c, -1) &&
                        ex.post_gap == k && ex.pre_gap == k && gp.trunc() > k && gm.trunc() > k;
    return ex;
}

AuxiliaryG auxiliary_g(const RiccatiEquation& rq, int k) {
    rq.require_nondegenerate();
    AuxiliaryG out;
    Var w0 = w_atom(Shift());
    Var w1 = w_atom(Shift(1));
    out.g = (FieldElem::variable(w1) - rq.a) * (FieldElem::variable(w0) - rq.c);

    RiccatiExpansion ex = local_expansion_check(rq, k);
    int cap = k + 3;
    LaurentSeries a0 = at(rq.a, 0, cap);
    LaurentSeries c0 = at(rq.c, 0, cap);
    out.valuation_at_pole_of_w = ((ex.post - a0) * (ex.pole - c0)).valuation();

    // w(zhat + t) = c(zhat + t) + alpha t^k + ..., so w(z+1) has a pole of order k at zhat.
    Assumptions as;
    FreshSeed seed("alpha");
    std::vector<FieldElem> tail{FieldElem::variable(seed.next(true))};
    for (int j = k + 1; j < cap + k; ++j) tail.push_back(FieldElem::variable(seed.next()));
    LaurentSeries w = c0 + LaurentSeries::from_coefficients(k, std::move(tail), cap + k);
    LaurentSeries wbar = a0 + at(rq.discriminant(), 0, cap) * (w - c0).inverse(&as, cap);
    out.valuation_at_pole_of_shift = ((wbar - a0) * (w - c0)).valuation();
    return out;
}

LinearPair linearize(const RiccatiEquation& rq) {
    rq.require_nondegenerate();
    LinearPair lp;
    lp.M = {{{rq.a, rq.b}, {FieldElem(1), -rq.c}}};
    lp.det = -rq.discriminant();
    return lp;
}

}  // namespace dclunie
