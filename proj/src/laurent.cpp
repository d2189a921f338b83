#include "dclunie/laurent.hpp"

#include <algorithm>
#include <map>

namespace dclunie {

namespace {

int norm_trunc(long long t) {
    if (t >= LaurentSeries::kExact - (1 << 20)) return LaurentSeries::kExact;
    return static_cast<int>(t);
}

bool is_free_seed(Var v) {
    return v.kind() == VarKind::fresh && !v.info().nonzero;
}

bool has_seed(const Poly& p) {
    for (Var v : p.vars())
        if (v.kind() == VarKind::fresh) return true;
    return false;
}

bool all_polynomial(const std::vector<FieldElem>& c) {
    for (const auto& x : c)
        if (!x.is_polynomial()) return false;
    return true;
}

// c[i] = a[i] / den with polynomial a[i]; keeps series arithmetic gcd-free.
struct CommonDen {
    std::vector<Poly> a;
    Poly den{1};
};

CommonDen common_denominator(const std::vector<FieldElem>& c) {
    CommonDen r;
    for (const auto& x : c) {
        if (x.den().is_one() || r.den.divide_exact(x.den())) continue;
        Poly g = gcd(r.den, x.den());
        r.den = r.den * (g.is_one() ? x.den() : *x.den().divide_exact(g));
    }
    r.a.reserve(c.size());
    for (const auto& x : c)
        r.a.push_back(x.den() == r.den ? x.num() : x.num() * *r.den.divide_exact(x.den()));
    return r;
}

}  // namespace

// ---------------------------------------------------------------- zero tests

Nonzero classify_nonzero(const FieldElem& x, const std::vector<FieldElem>& assumed) {
    if (x.is_zero()) return Nonzero::zero;
    Poly r = x.num();
    Monomial m = r.monomial_content();
    if (!m.is_one()) r = *r.divide_exact(Poly::monomial(m));
    std::vector<Monomial::Factor> open;
    for (const auto& f : m.factors())
        if (is_free_seed(f.first)) open.push_back(f);
    // Strip factors already assumed nonzero.
    for (const auto& a : assumed) {
        const Poly& an = a.num();
        if (an.is_constant()) continue;
        if (an.is_monomial()) {
            for (const auto& [v, e] : an.leading().mono.factors())
                std::erase_if(open, [&](const Monomial::Factor& f) { return f.first == v; });
            continue;
        }
        for (int guard = 0; guard < 64 && !r.is_constant(); ++guard) {
            auto q = r.divide_exact(an);
            if (!q) break;
            r = *q;
        }
    }
    if (!open.empty()) return Nonzero::inconclusive;
    if (r.is_constant()) return Nonzero::nonzero;
    return has_seed(r) ? Nonzero::inconclusive : Nonzero::nonzero;
}

Nonzero Assumptions::classify(const FieldElem& x) {
    Nonzero n = classify_nonzero(x, assumed_);
    if (n == Nonzero::inconclusive && generic_) {
        assumed_.push_back(x);
        return Nonzero::nonzero;
    }
    return n;
}

// ---------------------------------------------------------------- LaurentSeries

LaurentSeries LaurentSeries::zero(int trunc) {
    LaurentSeries s;
    s.trunc_ = norm_trunc(trunc);
    s.val_ = s.trunc_;
    return s;
}

LaurentSeries LaurentSeries::constant(const FieldElem& c, int trunc) {
    return from_coefficients(0, {c}, trunc);
}

LaurentSeries LaurentSeries::monomial(const FieldElem& c, int exponent, int trunc) {
    return from_coefficients(exponent, {c}, trunc);
}

LaurentSeries LaurentSeries::from_coefficients(int val, std::vector<FieldElem> c, int trunc) {
    LaurentSeries s;
    s.trunc_ = norm_trunc(trunc);
    s.val_ = val;
    s.c_ = std::move(c);
    long long keep = static_cast<long long>(s.trunc_) - val;
    if (keep < 0) keep = 0;
    if (static_cast<long long>(s.c_.size()) > keep) s.c_.resize(static_cast<std::size_t>(keep));
    s.strip();
    return s;
}

void LaurentSeries::strip() {
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead].is_zero()) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        val_ = trunc_;
        return;
    }
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
        val_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

const FieldElem& LaurentSeries::leading() const {
    if (c_.empty()) throw ArithmeticError("series is zero up to its truncation");
    return c_.front();
}

FieldElem LaurentSeries::coeff(int e) const {
    if (e >= trunc_) throw ArithmeticError("coefficient of t^" + std::to_string(e) + " is beyond the truncation");
    if (e < val_) return FieldElem();
    std::size_t i = static_cast<std::size_t>(e - val_);
    return i < c_.size() ? c_[i] : FieldElem();
}

LaurentSeries LaurentSeries::truncated(int t) const {
    if (t >= trunc_) return *this;
    return from_coefficients(val_, c_, t);
}

LaurentSeries LaurentSeries::times_t(int n) const {
    LaurentSeries s = *this;
    if (!is_exact()) s.trunc_ = trunc_ + n;
    s.val_ = c_.empty() ? s.trunc_ : val_ + n;
    return s;
}

LaurentSeries LaurentSeries::map_coefficients(const std::function<FieldElem(const FieldElem&)>& f) const {
    std::vector<FieldElem> c;
    c.reserve(c_.size());
    for (const auto& x : c_) c.push_back(f(x));
    return from_coefficients(val_, std::move(c), trunc_);
}

LaurentSeries LaurentSeries::operator-() const {
    LaurentSeries s = *this;
    for (auto& x : s.c_) x = -x;
    return s;
}

LaurentSeries LaurentSeries::operator+(const LaurentSeries& o) const {
    int t = std::min(trunc_, o.trunc_);
    if (c_.empty()) return o.truncated(t);
    if (o.c_.empty()) return truncated(t);
    int v = std::min(val_, o.val_);
    int last = std::max(val_ + static_cast<int>(c_.size()), o.val_ + static_cast<int>(o.c_.size()));
    last = std::min(last, t);
    std::vector<FieldElem> c;
    for (int e = v; e < last; ++e) {
        FieldElem x;
        if (e >= val_ && e - val_ < static_cast<int>(c_.size())) x = c_[static_cast<std::size_t>(e - val_)];
        if (e >= o.val_ && e - o.val_ < static_cast<int>(o.c_.size()))
            x += o.c_[static_cast<std::size_t>(e - o.val_)];
        c.push_back(std::move(x));
    }
    return from_coefficients(v, std::move(c), t);
}

LaurentSeries LaurentSeries::operator-(const LaurentSeries& o) const {
    return *this + (-o);
}

LaurentSeries LaurentSeries::operator*(const LaurentSeries& o) const {
    long long t1 = static_cast<long long>(trunc_) + o.val_;
    long long t2 = static_cast<long long>(o.trunc_) + val_;
    int t = norm_trunc(std::min(t1, t2));
    if (c_.empty() || o.c_.empty()) return zero(t);
    int v = val_ + o.val_;
    long long n = std::min<long long>(static_cast<long long>(c_.size() + o.c_.size() - 1),
                                      static_cast<long long>(t) - v);
    if (n <= 0) return zero(t);
    std::vector<FieldElem> c(static_cast<std::size_t>(n));
    if (all_polynomial(c_) && all_polynomial(o.c_)) {
        for (std::size_t i = 0; i < c_.size() && i < c.size(); ++i) {
            for (std::size_t j = 0; j < o.c_.size() && i + j < c.size(); ++j) c[i + j] += c_[i] * o.c_[j];
        }
        return from_coefficients(v, std::move(c), t);
    }
    CommonDen a = common_denominator(c_);
    CommonDen b = common_denominator(o.c_);
    Poly den = a.den * b.den;
    for (std::size_t k = 0; k < c.size(); ++k) {
        Poly s;
        for (std::size_t i = 0; i <= k && i < a.a.size(); ++i)
            if (k - i < b.a.size()) s += a.a[i] * b.a[k - i];
        if (!s.is_zero()) c[k] = FieldElem(s, den);
    }
    return from_coefficients(v, std::move(c), t);
}

LaurentSeries LaurentSeries::scaled(const FieldElem& k) const {
    if (k.is_zero()) return zero(trunc_);
    return map_coefficients([&](const FieldElem& x) { return x * k; });
}

LaurentSeries LaurentSeries::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    LaurentSeries result = constant(FieldElem(1));
    LaurentSeries base = *this;
    while (e > 0) {
        if (e & 1) result = result * base;
        e >>= 1;
        if (e) base = base * base;
    }
    return result;
}

LaurentSeries LaurentSeries::inverse(Assumptions* a, int cap) const {
    if (c_.empty()) throw ArithmeticError("division by a series that is zero up to its truncation");
    Nonzero nz = a ? a->classify(c_.front()) : classify_nonzero(c_.front());
    if (nz == Nonzero::zero) throw ArithmeticError("division by zero leading coefficient");
    if (nz == Nonzero::inconclusive) throw InconclusiveNonzero(c_.front());
    FieldElem d0 = c_.front().inverse();
    if (is_exact() && c_.size() == 1) return monomial(d0, -val_);
    long long t = is_exact() ? static_cast<long long>(cap) : static_cast<long long>(trunc_) - 2LL * val_;
    t = std::min<long long>(t, cap);
    if (t >= kExact) throw ArithmeticError("inverse of an exact series needs a truncation");
    long long n = t + val_;  // number of coefficients from t^-val upward
    if (n <= 0) return zero(static_cast<int>(t));
    std::vector<Poly> e = inverse_numerators(static_cast<std::size_t>(n));
    CommonDen cd = common_denominator(c_);
    std::vector<FieldElem> d(e.size());
    Poly p = cd.a[0];
    for (std::size_t k = 0; k < e.size(); ++k) {
        if (!e[k].is_zero()) d[k] = FieldElem(e[k] * cd.den, p);
        p *= cd.a[0];
    }
    return from_coefficients(-val_, std::move(d), static_cast<int>(t));
}

// With c = a/L and A = sum a_j t^j: 1/A = sum e_k t^k / a_0^(k+1), where
// e_0 = 1 and e_k = -sum_{j>=1} a_j e_{k-j} a_0^(j-1).
std::vector<Poly> LaurentSeries::inverse_numerators(std::size_t n) const {
    CommonDen cd = common_denominator(c_);
    std::vector<Poly> e(n);
    std::vector<Poly> a0pow{Poly(1)};
    e[0] = Poly(1);
    for (std::size_t k = 1; k < n; ++k) {
        Poly s;
        for (std::size_t j = 1; j <= k && j < cd.a.size(); ++j) {
            if (cd.a[j].is_zero() || e[k - j].is_zero()) continue;
            while (a0pow.size() < j) a0pow.push_back(a0pow.back() * cd.a[0]);
            s += cd.a[j] * e[k - j] * a0pow[j - 1];
        }
        e[k] = -s;
    }
    return e;
}

LaurentSeries LaurentSeries::divide(const LaurentSeries& o, Assumptions* a, int cap) const {
    int inv_cap = cap;
    if (cap < kExact && !c_.empty()) inv_cap = cap - val_;
    if (c_.empty() || o.c_.empty() || (o.is_exact() && o.c_.size() == 1)) {
        LaurentSeries r = *this * o.inverse(a, inv_cap);
        return cap < kExact ? r.truncated(cap) : r;
    }
    // Same truncation bookkeeping as *this * o.inverse(), but fraction-free:
    // r_m = (L_o / L) sum_i b_i e_{m-i} a_0^i / a_0^(m+1).
    Nonzero nz = a ? a->classify(o.c_.front()) : classify_nonzero(o.c_.front());
    if (nz == Nonzero::zero) throw ArithmeticError("division by zero leading coefficient");
    if (nz == Nonzero::inconclusive) throw InconclusiveNonzero(o.c_.front());
    long long it = o.is_exact() ? static_cast<long long>(inv_cap)
                                : static_cast<long long>(o.trunc_) - 2LL * o.val_;
    it = std::min<long long>(it, inv_cap);
    if (it >= kExact) throw ArithmeticError("inverse of an exact series needs a truncation");
    long long n_inv = it + o.val_;
    int iv = -o.val_;
    long long t1 = static_cast<long long>(trunc_) + iv;
    long long t2 = it + val_;
    int t = norm_trunc(std::min(t1, t2));
    if (cap < kExact) t = std::min(t, cap);
    int v = val_ + iv;
    long long n = std::min<long long>(static_cast<long long>(c_.size()) + n_inv - 1, static_cast<long long>(t) - v);
    if (n_inv <= 0 || n <= 0) return zero(t);
    std::vector<Poly> e = o.inverse_numerators(static_cast<std::size_t>(std::min<long long>(n_inv, n)));
    CommonDen num = common_denominator(c_);
    CommonDen den = common_denominator(o.c_);
    const Poly& a0 = den.a[0];
    std::vector<Poly> a0pow{Poly(1)};
    std::vector<FieldElem> c(static_cast<std::size_t>(n));
    Poly scale = den.den;
    for (std::size_t m = 0; m < c.size(); ++m) {
        while (a0pow.size() < m + 2) a0pow.push_back(a0pow.back() * a0);
        Poly s;
        for (std::size_t i = 0; i <= m && i < num.a.size(); ++i) {
            if (m - i >= e.size() || num.a[i].is_zero() || e[m - i].is_zero()) continue;
            s += num.a[i] * e[m - i] * a0pow[i];
        }
        if (!s.is_zero()) c[m] = FieldElem(s * scale, a0pow[m + 1] * num.den);
    }
    return from_coefficients(v, std::move(c), t);
}

bool operator==(const LaurentSeries& a, const LaurentSeries& b) {
    return a.trunc_ == b.trunc_ && a.val_ == b.val_ && a.c_ == b.c_;
}

bool LaurentSeries::agrees_with(const LaurentSeries& o) const {
    int t = std::min(trunc_, o.trunc_);
    LaurentSeries d = truncated(t) - o.truncated(t);
    return d.is_zero();
}

std::string LaurentSeries::to_string(const std::string& var) const {
    std::string out;
    auto power = [&](int e) -> std::string {
        if (e == 0) return "";
        if (e == 1) return var;
        return var + "^" + std::to_string(e);
    };
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i].is_zero()) continue;
        int e = val_ + static_cast<int>(i);
        std::string c = c_[i].to_string();
        bool compound = c.find_first_of("+-/ ", 1) != std::string::npos;
        std::string term;
        if (e == 0) {
            term = c;
        } else if (c_[i].is_one()) {
            term = power(e);
        } else {
            term = (compound ? "(" + c + ")" : c) + "*" + power(e);
        }
        if (!out.empty()) out += " + ";
        out += term;
    }
    if (!is_exact()) {
        if (!out.empty()) out += " + ";
        out += "O(" + (trunc_ == 0 ? std::string("1") : power(trunc_)) + ")";
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- seeds

Var FreshSeed::next(bool nonzero) {
    int n = counter_.fetch_add(1);
    return Var::fresh("_" + prefix_ + std::to_string(n), nonzero);
}

LaurentSeries generic_finite_series(FreshSeed& seed, int trunc) {
    if (trunc < 1) throw Error("generic_finite_series needs trunc >= 1");
    std::vector<FieldElem> c;
    for (int i = 0; i < trunc; ++i) c.push_back(FieldElem::variable(seed.next()));
    return LaurentSeries::from_coefficients(0, std::move(c), trunc);
}

LaurentSeries generic_pole_series(FreshSeed& seed, int k, int trunc) {
    if (k < 1 || trunc <= -k) throw Error("generic_pole_series needs k >= 1 and trunc > -k");
    std::vector<FieldElem> c;
    c.push_back(FieldElem::variable(seed.next(true)));
    for (int e = -k + 1; e < trunc; ++e) c.push_back(FieldElem::variable(seed.next()));
    return LaurentSeries::from_coefficients(-k, std::move(c), trunc);
}

// ---------------------------------------------------------------- evaluation

LaurentSeries evaluate(const Poly& p, const std::function<LaurentSeries(Var)>& series_of, int cap) {
    if (p.is_zero()) return LaurentSeries::zero(cap);
    std::map<Var, std::vector<LaurentSeries>> powers;
    long long slack = 0;
    for (Var v : p.vars()) {
        LaurentSeries s = series_of(v);
        int d = p.degree(v);
        if (!s.is_zero() && s.valuation() < 0) slack += static_cast<long long>(-s.valuation()) * d;
        powers[v].push_back(std::move(s));
    }
    int pcap = norm_trunc(static_cast<long long>(cap) + slack);
    for (auto& [v, pw] : powers) {
        int d = p.degree(v);
        LaurentSeries base = pw[0];
        pw.clear();
        pw.push_back(LaurentSeries::constant(FieldElem(1)));
        for (int e = 1; e <= d; ++e) pw.push_back((pw.back() * base).truncated(pcap));
    }
    LaurentSeries acc = LaurentSeries::zero(cap);
    for (const auto& t : p.terms()) {
        const auto& fs = t.mono.factors();
        long long total = 0;
        for (const auto& [v, e] : fs) total += powers[v][static_cast<std::size_t>(e)].valuation();
        LaurentSeries prod = LaurentSeries::constant(FieldElem(t.coef));
        long long sofar = 0;
        for (const auto& [v, e] : fs) {
            const LaurentSeries& f = powers[v][static_cast<std::size_t>(e)];
            prod = prod * f;
            sofar += f.valuation();
            if (cap < LaurentSeries::kExact) prod = prod.truncated(norm_trunc(cap - (total - sofar)));
        }
        acc = acc + prod;
    }
    return acc;
}

LaurentSeries taylor_at(const FieldElem& a, GenericPoint site, int order, ExpansionPolicy policy) {
    if (order < 0) throw Error("taylor_at needs order >= 0");
    int cap = order + 1;
    auto series_of = [&](Var v) -> LaurentSeries {
        const VarInfo& i = v.info();
        if (v.is_z()) {
            FieldElem base = FieldElem::variable(Var::anchor()) + FieldElem(site.offset);
            return LaurentSeries::from_coefficients(0, {base, FieldElem(1)}, LaurentSeries::kExact);
        }
        if (i.kind == VarKind::symbol && !i.constant) {
            if (policy == ExpansionPolicy::strict)
                throw UnsupportedError("cannot expand through non-constant opaque symbol '" + i.base +
                                       "'; declare it constant");
            std::vector<FieldElem> c;
            for (int j = 0; j <= order; ++j)
                c.push_back(FieldElem::variable(Var::jet(i.base, site.offset + i.shift, j, i.period)));
            return LaurentSeries::from_coefficients(0, std::move(c), cap);
        }
        return LaurentSeries::constant(FieldElem::variable(v));
    };
    LaurentSeries num = evaluate(a.num(), series_of, cap);
    if (a.den().is_one()) return num.truncated(cap);
    LaurentSeries den = evaluate(a.den(), series_of, cap);
    return num.divide(den, nullptr, cap).truncated(cap);
}

}  // namespace dclunie
