#include "dclunie/field.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "dclunie/errors.hpp"

namespace dclunie {

// ---------------------------------------------------------------- SymbolTable

bool SymbolTable::is_reserved(const std::string& name) {
    static const char* reserved[] = {"z", "w", "i", "zhat", "gamma", "exp"};
    return std::any_of(std::begin(reserved), std::end(reserved), [&](const char* r) { return name == r; });
}

void SymbolTable::declare(const std::string& name, SymbolKind kind, int period) {
    if (name.empty() || !std::isalpha(static_cast<unsigned char>(name[0])))
        throw ParseError("invalid symbol name '" + name + "'", 1, 1);
    for (char ch : name)
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_')
            throw ParseError("invalid symbol name '" + name + "'", 1, 1);
    if (is_reserved(name)) throw ParseError("symbol name '" + name + "' is reserved", 1, 1);
    if (find(name)) throw ParseError("symbol '" + name + "' declared twice", 1, 1);
    if (period < 0) throw ParseError("period must be positive", 1, 1);
    if (period > 0 && kind == SymbolKind::constant)
        throw ParseError("period applies only to opaque-function symbols", 1, 1);
    entries_.push_back(SymbolEntry{name, kind, period});
}

void SymbolTable::declare_spec(const std::string& spec) {
    std::string s = spec;
    std::replace(s.begin(), s.end(), ':', ' ');
    std::istringstream is(s);
    std::string name, tok;
    is >> name;
    SymbolKind kind = SymbolKind::opaque_function;
    int period = 0;
    while (is >> tok) {
        if (tok == "constant") {
            kind = SymbolKind::constant;
        } else if (tok.rfind("period=", 0) == 0) {
            try {
                period = std::stoi(tok.substr(7));
            } catch (const std::exception&) {
                throw ParseError("bad period in symbol declaration '" + spec + "'", 1, 1);
            }
            if (period <= 0) throw ParseError("period must be positive in '" + spec + "'", 1, 1);
        } else {
            throw ParseError("unknown symbol attribute '" + tok + "'", 1, 1);
        }
    }
    declare(name, kind, period);
}

const SymbolEntry* SymbolTable::find(const std::string& name) const {
    for (const auto& e : entries_)
        if (e.name == name) return &e;
    return nullptr;
}

Var SymbolTable::instance(const std::string& name, int shift) const {
    const SymbolEntry* e = find(name);
    if (!e) throw ParseError("unknown symbol '" + name + "'", 1, 1);
    if (e->kind == SymbolKind::constant) return Var::constant_symbol(name);
    return Var::function_instance(name, shift, e->period);
}

// ---------------------------------------------------------------- FieldElem

FieldElem FieldElem::raw(Poly num, Poly den) {
    FieldElem r;
    r.num_ = std::move(num);
    r.den_ = std::move(den);
    return r;
}

FieldElem FieldElem::from_coprime(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw ArithmeticError("division by zero in the coefficient field");
    if (num.is_zero()) return FieldElem();
    Rational lc = den.lc();
    return raw(num.scaled(1 / lc), den.scaled(1 / lc));
}

FieldElem normalize(const Poly& num, const Poly& den) {
    return FieldElem(num, den);
}

FieldElem::FieldElem(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw ArithmeticError("division by zero in the coefficient field");
    if (num.is_zero()) {
        den_ = Poly(1);
        return;
    }
    if (den.is_constant()) {
        num_ = num.scaled(1 / den.constant_value());
        den_ = Poly(1);
        return;
    }
    Poly g = gcd(num, den);
    Poly n = g.is_one() ? num : *num.divide_exact(g);
    Poly d = g.is_one() ? den : *den.divide_exact(g);
    Rational lc = d.lc();
    num_ = n.scaled(1 / lc);
    den_ = d.scaled(1 / lc);
}

std::set<Var> FieldElem::vars() const {
    auto s = num_.vars();
    auto t = den_.vars();
    s.insert(t.begin(), t.end());
    return s;
}

FieldElem FieldElem::operator-() const {
    return raw(-num_, den_);
}

FieldElem FieldElem::operator+(const FieldElem& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den_.is_one() && o.den_.is_one()) return raw(num_ + o.num_, den_);
    if (den_ == o.den_) return FieldElem(num_ + o.num_, den_);
    if (den_.is_one()) return raw(num_ * o.den_ + o.num_, o.den_);
    if (o.den_.is_one()) return raw(num_ + o.num_ * den_, den_);
    // With b = b'g, d = d'g only gcd(a d' + c b', g) can be nontrivial.
    Poly g = gcd(den_, o.den_);
    Poly b1 = g.is_one() ? den_ : *den_.divide_exact(g);
    Poly d1 = g.is_one() ? o.den_ : *o.den_.divide_exact(g);
    Poly n = num_ * d1 + o.num_ * b1;
    Poly d = b1 * o.den_;
    if (n.is_zero()) return FieldElem();
    if (!g.is_one()) {
        Poly h = gcd(n, g);
        if (!h.is_one()) {
            n = *n.divide_exact(h);
            d = *d.divide_exact(h);
        }
    }
    Rational lc = d.lc();
    return raw(n.scaled(1 / lc), d.scaled(1 / lc));
}

FieldElem FieldElem::operator-(const FieldElem& o) const {
    return *this + (-o);
}

FieldElem FieldElem::operator*(const FieldElem& o) const {
    if (is_zero() || o.is_zero()) return FieldElem();
    if (den_.is_one() && o.den_.is_one()) return raw(num_ * o.num_, den_);
    Poly g1 = o.den_.is_one() ? Poly(1) : gcd(num_, o.den_);
    Poly g2 = den_.is_one() ? Poly(1) : gcd(o.num_, den_);
    Poly a = g1.is_one() ? num_ : *num_.divide_exact(g1);
    Poly d = g1.is_one() ? o.den_ : *o.den_.divide_exact(g1);
    Poly c = g2.is_one() ? o.num_ : *o.num_.divide_exact(g2);
    Poly b = g2.is_one() ? den_ : *den_.divide_exact(g2);
    Poly n = a * c;
    Poly dd = b * d;
    Rational lc = dd.lc();
    return raw(n.scaled(1 / lc), dd.scaled(1 / lc));
}

FieldElem FieldElem::inverse() const {
    if (is_zero()) throw ArithmeticError("division by zero in the coefficient field");
    Rational lc = num_.lc();
    return raw(den_.scaled(1 / lc), num_.scaled(1 / lc));
}

FieldElem FieldElem::operator/(const FieldElem& o) const {
    return *this * o.inverse();
}

FieldElem FieldElem::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    return raw(num_.pow(e), den_.pow(e));
}

FieldElem FieldElem::substitute(const std::map<Var, FieldElem>& s) const {
    // Evaluate num and den as polynomials in the substituted values.
    auto eval = [&](const Poly& p) {
        FieldElem acc;
        for (const auto& t : p.terms()) {
            FieldElem term(t.coef);
            std::vector<Monomial::Factor> keep;
            for (const auto& [v, e] : t.mono.factors()) {
                auto it = s.find(v);
                if (it != s.end())
                    term *= it->second.pow(e);
                else
                    keep.emplace_back(v, e);
            }
            term *= FieldElem(Poly::monomial(Monomial::from_factors(std::move(keep))));
            acc += term;
        }
        return acc;
    };
    return eval(num_) / eval(den_);
}

std::string FieldElem::to_string() const {
    if (den_.is_one()) return num_.to_string();
    auto wrap = [](const Poly& p) {
        std::string s = p.to_string();
        bool atom = p.is_monomial() && p.lc() == 1;
        return atom ? s : "(" + s + ")";
    };
    return wrap(num_) + "/" + wrap(den_);
}

// ---------------------------------------------------------------- shift

Poly shift(const Poly& p, int n) {
    if (n == 0 || p.is_zero()) return p;
    bool has_z = p.contains(Var::z());
    Poly renamed = p.rename([n](Var v) {
        const VarInfo& i = v.info();
        if (i.kind == VarKind::symbol && !i.constant) return Var::function_instance(i.base, i.shift + n, i.period);
        return v;
    });
    if (!has_z) return renamed;
    std::map<Var, Poly> s;
    s.emplace(Var::z(), Poly::variable(Var::z()) + Poly(n));
    return renamed.substitute(s);
}

FieldElem shift(const FieldElem& a, int n) {
    if (n == 0) return a;
    // Shift is a ring automorphism, so coprimality is preserved; only the scale changes.
    return FieldElem::from_coprime(shift(a.num(), n), shift(a.den(), n));
}

}  // namespace dclunie
