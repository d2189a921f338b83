#include "dclunie/poly.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <sstream>

#include "dclunie/errors.hpp"

namespace dclunie {

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Var v, int e) {
    if (e != 0) f_.emplace_back(v, e);
}

Monomial Monomial::from_factors(std::vector<Factor> f) {
    std::sort(f.begin(), f.end(), [](const Factor& a, const Factor& b) { return a.first < b.first; });
    Monomial m;
    for (auto& [v, e] : f) {
        if (!m.f_.empty() && m.f_.back().first == v)
            m.f_.back().second += e;
        else
            m.f_.emplace_back(v, e);
    }
    std::erase_if(m.f_, [](const Factor& x) { return x.second == 0; });
    return m;
}

int Monomial::degree(Var v) const {
    for (const auto& [w, e] : f_)
        if (w == v) return e;
    return 0;
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& x : f_) d += x.second;
    return d;
}

Monomial Monomial::operator*(const Monomial& o) const {
    Monomial r;
    r.f_.reserve(f_.size() + o.f_.size());
    std::size_t i = 0, j = 0;
    while (i < f_.size() && j < o.f_.size()) {
        if (f_[i].first == o.f_[j].first) {
            r.f_.emplace_back(f_[i].first, f_[i].second + o.f_[j].second);
            ++i;
            ++j;
        } else if (f_[i].first < o.f_[j].first) {
            r.f_.push_back(f_[i++]);
        } else {
            r.f_.push_back(o.f_[j++]);
        }
    }
    for (; i < f_.size(); ++i) r.f_.push_back(f_[i]);
    for (; j < o.f_.size(); ++j) r.f_.push_back(o.f_[j]);
    return r;
}

std::optional<Monomial> Monomial::divide(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (j < o.f_.size()) {
        if (i == f_.size()) return std::nullopt;
        if (f_[i].first == o.f_[j].first) {
            int e = f_[i].second - o.f_[j].second;
            if (e < 0) return std::nullopt;
            if (e > 0) r.f_.emplace_back(f_[i].first, e);
            ++i;
            ++j;
        } else if (f_[i].first < o.f_[j].first) {
            r.f_.push_back(f_[i++]);
        } else {
            return std::nullopt;
        }
    }
    for (; i < f_.size(); ++i) r.f_.push_back(f_[i]);
    return r;
}

Monomial Monomial::gcd(const Monomial& o) const {
    Monomial r;
    std::size_t i = 0, j = 0;
    while (i < f_.size() && j < o.f_.size()) {
        if (f_[i].first == o.f_[j].first) {
            r.f_.emplace_back(f_[i].first, std::min(f_[i].second, o.f_[j].second));
            ++i;
            ++j;
        } else if (f_[i].first < o.f_[j].first) {
            ++i;
        } else {
            ++j;
        }
    }
    return r;
}

Monomial Monomial::without(Var v) const {
    Monomial r;
    for (const auto& x : f_)
        if (!(x.first == v)) r.f_.push_back(x);
    return r;
}

std::string Monomial::to_string() const {
    std::string s;
    for (const auto& [v, e] : f_) {
        if (!s.empty()) s += "*";
        s += v.display();
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

int lex_compare(const Monomial& a, const Monomial& b) {
    const auto& fa = a.factors();
    const auto& fb = b.factors();
    std::size_t i = 0, j = 0;
    while (i < fa.size() && j < fb.size()) {
        if (fa[i].first == fb[j].first) {
            if (fa[i].second != fb[j].second) return fa[i].second > fb[j].second ? 1 : -1;
            ++i;
            ++j;
        } else if (fa[i].first < fb[j].first) {
            return 1;
        } else {
            return -1;
        }
    }
    if (i < fa.size()) return 1;
    if (j < fb.size()) return -1;
    return 0;
}

std::string rational_to_string(const Rational& q) {
    return q.get_str();
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const Rational& c) {
    if (c != 0) terms_.push_back(Term{Monomial(), c});
}

Poly Poly::variable(Var v) {
    Poly p;
    p.terms_.push_back(Term{Monomial(v), 1});
    return p;
}

Poly Poly::monomial(const Monomial& m, const Rational& c) {
    Poly p;
    if (c != 0) p.terms_.push_back(Term{m, c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::sort(terms.begin(), terms.end(),
              [](const Term& a, const Term& b) { return lex_compare(a.mono, b.mono) > 0; });
    Poly p;
    p.terms_.reserve(terms.size());
    for (auto& t : terms) {
        if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
            p.terms_.back().coef += t.coef;
        } else {
            if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
            p.terms_.push_back(std::move(t));
        }
    }
    if (!p.terms_.empty() && p.terms_.back().coef == 0) p.terms_.pop_back();
    return p;
}

bool Poly::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one());
}

bool Poly::is_one() const {
    return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1;
}

Rational Poly::constant_value() const {
    assert(is_constant());
    return terms_.empty() ? Rational(0) : terms_[0].coef;
}

int Poly::degree(Var v) const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.degree(v));
    return d;
}

int Poly::min_degree(Var v) const {
    if (terms_.empty()) return 0;
    int d = terms_[0].mono.degree(v);
    for (const auto& t : terms_) d = std::min(d, t.mono.degree(v));
    return d;
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.total_degree());
    return d;
}

std::set<Var> Poly::vars() const {
    std::set<Var> s;
    for (const auto& t : terms_)
        for (const auto& f : t.mono.factors()) s.insert(f.first);
    return s;
}

bool Poly::contains(Var v) const {
    for (const auto& t : terms_)
        if (t.mono.degree(v) > 0) return true;
    return false;
}

std::vector<Poly> Poly::coefficients(Var v) const {
    std::vector<std::vector<Term>> buckets(static_cast<std::size_t>(degree(v)) + 1);
    for (const auto& t : terms_) {
        int e = t.mono.degree(v);
        buckets[static_cast<std::size_t>(e)].push_back(Term{t.mono.without(v), t.coef});
    }
    std::vector<Poly> out;
    out.reserve(buckets.size());
    // Removing v keeps the relative lex order inside each bucket.
    for (auto& b : buckets) {
        Poly p;
        p.terms_ = std::move(b);
        out.push_back(std::move(p));
    }
    return out;
}

Poly Poly::from_coefficients(Var v, const std::vector<Poly>& c) {
    std::vector<Term> all;
    for (std::size_t e = 0; e < c.size(); ++e)
        for (const auto& t : c[e].terms_) all.push_back(Term{t.mono * Monomial(v, static_cast<int>(e)), t.coef});
    return from_terms(std::move(all));
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

Poly Poly::operator+(const Poly& o) const {
    Poly r;
    r.terms_.reserve(terms_.size() + o.terms_.size());
    std::size_t i = 0, j = 0;
    while (i < terms_.size() && j < o.terms_.size()) {
        int c = lex_compare(terms_[i].mono, o.terms_[j].mono);
        if (c > 0) {
            r.terms_.push_back(terms_[i++]);
        } else if (c < 0) {
            r.terms_.push_back(o.terms_[j++]);
        } else {
            Rational s = terms_[i].coef + o.terms_[j].coef;
            if (s != 0) r.terms_.push_back(Term{terms_[i].mono, s});
            ++i;
            ++j;
        }
    }
    for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
    for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
    return r;
}

Poly Poly::operator-(const Poly& o) const {
    return *this + (-o);
}

Poly Poly::operator*(const Poly& o) const {
    if (terms_.empty() || o.terms_.empty()) return Poly();
    if (o.is_constant()) return scaled(o.terms_[0].coef);
    if (is_constant()) return o.scaled(terms_[0].coef);
    if (o.terms_.size() == 1) {
        Poly r = times_monomial(o.terms_[0].mono);
        if (o.terms_[0].coef != 1)
            for (auto& t : r.terms_) t.coef *= o.terms_[0].coef;
        return r;
    }
    std::vector<Term> all;
    all.reserve(terms_.size() * o.terms_.size());
    for (const auto& a : terms_)
        for (const auto& b : o.terms_) all.push_back(Term{a.mono * b.mono, a.coef * b.coef});
    return from_terms(std::move(all));
}

Poly Poly::scaled(const Rational& c) const {
    if (c == 0) return Poly();
    Poly r = *this;
    for (auto& t : r.terms_) t.coef *= c;
    return r;
}

Poly Poly::times_monomial(const Monomial& m) const {
    Poly r = *this;
    for (auto& t : r.terms_) t.mono = t.mono * m;
    return r;
}

Poly Poly::pow(int e) const {
    if (e < 0) throw ArithmeticError("negative power of a polynomial");
    Poly result(1);
    Poly base = *this;
    while (e > 0) {
        if (e & 1) result *= base;
        e >>= 1;
        if (e) base *= base;
    }
    return result;
}

std::optional<Poly> Poly::divide_exact(const Poly& o) const {
    if (o.is_zero()) throw ArithmeticError("polynomial division by zero");
    if (is_zero()) return Poly();
    if (o.is_constant()) return scaled(1 / o.terms_[0].coef);
    if (o.terms_.size() == 1) {
        Poly r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) {
            auto q = t.mono.divide(o.terms_[0].mono);
            if (!q) return std::nullopt;
            r.terms_.push_back(Term{*q, t.coef / o.terms_[0].coef});
        }
        return r;
    }
    const Term& lead = o.terms_[0];
    // Quick degree rejection on every variable of the divisor.
    for (const auto& [v, e] : lead.mono.factors())
        if (degree(v) < o.degree(v)) return std::nullopt;
    for (const auto& [v, e] : lead.mono.factors())
        if (min_degree(v) < o.min_degree(v)) return std::nullopt;
    std::vector<Term> quotient;
    if (terms_.size() < 16) {
        Poly rem = *this;
        while (!rem.is_zero()) {
            const Term& rt = rem.terms_[0];
            auto q = rt.mono.divide(lead.mono);
            if (!q) return std::nullopt;
            Term qt{*q, rt.coef / lead.coef};
            Poly sub = o.times_monomial(qt.mono).scaled(qt.coef);
            quotient.push_back(std::move(qt));
            rem = rem - sub;
        }
    } else {
        std::map<Monomial, Rational, LexGreater> rem;
        for (const auto& t : terms_) rem.emplace_hint(rem.end(), t.mono, t.coef);
        while (!rem.empty()) {
            auto top = rem.begin();
            auto q = top->first.divide(lead.mono);
            if (!q) return std::nullopt;
            Rational c = top->second / lead.coef;
            rem.erase(top);
            for (std::size_t j = 1; j < o.terms_.size(); ++j) {
                Monomial m = o.terms_[j].mono * *q;
                auto [it, fresh] = rem.try_emplace(std::move(m), 0);
                it->second -= c * o.terms_[j].coef;
                if (it->second == 0) rem.erase(it);
            }
            quotient.push_back(Term{std::move(*q), std::move(c)});
        }
    }
    Poly r;
    r.terms_ = std::move(quotient);  // generated in decreasing order
    return r;
}

Poly Poly::monic() const {
    if (is_zero() || lc() == 1) return *this;
    return scaled(1 / lc());
}

Monomial Poly::monomial_content() const {
    if (terms_.empty()) return Monomial();
    Monomial g = terms_[0].mono;
    for (const auto& t : terms_) {
        if (g.is_one()) break;
        g = g.gcd(t.mono);
    }
    return g;
}

Poly Poly::substitute(const std::map<Var, Poly>& s) const {
    std::map<std::pair<Var, int>, Poly> powers;
    auto power = [&](Var v, int e) -> const Poly& {
        auto key = std::make_pair(v, e);
        auto it = powers.find(key);
        if (it != powers.end()) return it->second;
        return powers.emplace(key, s.at(v).pow(e)).first->second;
    };
    Poly result;
    std::vector<Term> untouched;
    for (const auto& t : terms_) {
        Poly acc(t.coef);
        std::vector<Monomial::Factor> keep;
        bool replaced = false;
        for (const auto& [v, e] : t.mono.factors()) {
            if (s.count(v)) {
                acc *= power(v, e);
                replaced = true;
            } else {
                keep.emplace_back(v, e);
            }
        }
        Monomial rest = Monomial::from_factors(std::move(keep));
        if (!replaced)
            untouched.push_back(Term{rest, t.coef});
        else
            result += acc.times_monomial(rest);
    }
    return result + from_terms(std::move(untouched));
}

Poly Poly::rename(const std::function<Var(Var)>& f) const {
    std::vector<Term> all;
    all.reserve(terms_.size());
    for (const auto& t : terms_) {
        std::vector<Monomial::Factor> fs;
        for (const auto& [v, e] : t.mono.factors()) fs.emplace_back(f(v), e);
        all.push_back(Term{Monomial::from_factors(std::move(fs)), t.coef});
    }
    return from_terms(std::move(all));
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coef != b.terms_[i].coef) return false;
    return true;
}

std::string Poly::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& t : terms_) {
        Rational c = t.coef;
        bool neg = c < 0;
        if (neg) c = -c;
        if (first)
            os << (neg ? "-" : "");
        else
            os << (neg ? " - " : " + ");
        first = false;
        if (t.mono.is_one()) {
            os << rational_to_string(c);
        } else {
            if (c != 1) os << rational_to_string(c) << "*";
            os << t.mono.to_string();
        }
    }
    return os.str();
}

}  // namespace dclunie

namespace dclunie {

std::optional<Rational> rational_sqrt(const Rational& q) {
    if (q < 0) return std::nullopt;
    mpz_class n = q.get_num();
    mpz_class d = q.get_den();
    if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return std::nullopt;
    mpz_class rn, rd;
    mpz_sqrt(rn.get_mpz_t(), n.get_mpz_t());
    mpz_sqrt(rd.get_mpz_t(), d.get_mpz_t());
    return Rational(rn, rd);
}

namespace {

std::optional<Monomial> monomial_sqrt(const Monomial& m) {
    std::vector<Monomial::Factor> f;
    for (const auto& [v, e] : m.factors()) {
        if (e % 2 != 0) return std::nullopt;
        f.emplace_back(v, e / 2);
    }
    return Monomial::from_factors(std::move(f));
}

}  // namespace

std::optional<Poly> poly_sqrt(const Poly& p) {
    if (p.is_zero()) return Poly();
    auto c0 = rational_sqrt(p.lc());
    auto m0 = monomial_sqrt(p.leading().mono);
    if (!c0 || !m0) return std::nullopt;
    const Monomial& lowest = p.terms().back().mono;
    Term lead{*m0, *c0};
    Poly s = Poly::monomial(lead.mono, lead.coef);
    for (std::size_t guard = 0; guard < 4 * p.size() + 16; ++guard) {
        Poly r = p - s * s;
        if (r.is_zero()) return s;
        const Term& lt = r.leading();
        auto q = lt.mono.divide(lead.mono);
        if (!q) return std::nullopt;
        if (lex_compare(*q * *q, lowest) < 0 || lex_compare(*q, lead.mono) >= 0) return std::nullopt;
        s += Poly::monomial(*q, lt.coef / (2 * lead.coef));
    }
    return std::nullopt;
}

}  // namespace dclunie
