#include "dclunie/diffpoly.hpp"

#include <algorithm>

#include "dclunie/errors.hpp"

namespace dclunie {

// ---------------------------------------------------------------- Shift

int Shift::as_int() const {
    if (!is_integer()) throw UnsupportedError("shift " + arg_text() + " is not an integer");
    return static_cast<int>(re.get_num().get_si());
}

std::string Shift::arg_text() const {
    std::string s = "z";
    if (re != 0) s += (re > 0 ? "+" : "-") + rational_to_string(abs(re));
    if (im != 0) {
        Rational a = abs(im);
        s += im > 0 ? "+" : "-";
        if (a != 1) s += rational_to_string(a);
        s += "i";
    }
    return s;
}

Var w_atom(const Shift& s) {
    return Var::aux("w(" + s.arg_text() + ")");
}

namespace {

// Parses the text produced by Shift::arg_text.
std::optional<Shift> parse_arg_text(const std::string& t) {
    if (t.empty() || t[0] != 'z') return std::nullopt;
    Shift s;
    std::size_t i = 1;
    while (i < t.size()) {
        char sign = t[i++];
        if (sign != '+' && sign != '-') return std::nullopt;
        std::size_t j = i;
        while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
        std::string part = t.substr(i, j - i);
        i = j;
        bool imag = !part.empty() && part.back() == 'i';
        if (imag) part.pop_back();
        Rational v = part.empty() ? Rational(1) : Rational(part);
        v.canonicalize();
        if (sign == '-') v = -v;
        (imag ? s.im : s.re) += v;
    }
    return s;
}

}  // namespace

std::optional<Shift> w_atom_shift(Var v) {
    if (v.kind() != VarKind::aux) return std::nullopt;
    const std::string& n = v.info().base;
    if (n.size() < 4 || n.compare(0, 2, "w(") != 0 || n.back() != ')') return std::nullopt;
    return parse_arg_text(n.substr(2, n.size() - 3));
}

// ---------------------------------------------------------------- formatting

namespace {

bool top_level_sum(const std::string& s) {
    int depth = 0;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        char c = s[i];
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (depth == 0 && (c == '+' || c == '-') && s[i - 1] == ' ' && s[i + 1] == ' ') return true;
    }
    return false;
}

}  // namespace

std::string join_signed_terms(const std::vector<std::pair<FieldElem, std::string>>& terms) {
    std::string out;
    for (const auto& [c, atoms] : terms) {
        std::string t;
        if (atoms.empty()) {
            t = c.to_string();
            if (top_level_sum(t) && !out.empty() && t[0] == '-') t = "(" + t + ")";
        } else if (c.is_one()) {
            t = atoms;
        } else if ((-c).is_one()) {
            t = "-" + atoms;
        } else {
            std::string cs = c.to_string();
            t = (top_level_sum(cs) ? "(" + cs + ")" : cs) + "*" + atoms;
        }
        if (out.empty()) {
            out = t;
        } else if (t[0] == '-') {
            out += " - " + t.substr(1);
        } else {
            out += " + " + t;
        }
    }
    return out.empty() ? "0" : out;
}

// ---------------------------------------------------------------- DiffPoly

DiffPoly::DiffPoly() : shifts_{Shift()} {}

DiffPoly::DiffPoly(std::vector<Shift> shifts) {
    std::vector<Shift> rest;
    for (auto& s : shifts)
        if (!s.is_zero()) rest.push_back(std::move(s));
    std::sort(rest.begin(), rest.end());
    rest.erase(std::unique(rest.begin(), rest.end()), rest.end());
    shifts_.push_back(Shift());
    shifts_.insert(shifts_.end(), rest.begin(), rest.end());
}

void DiffPoly::add_term(const MultiIndex& lambda, const FieldElem& c) {
    if (lambda.size() != shifts_.size()) throw Error("multi-index length does not match the shift list");
    for (int e : lambda)
        if (e < 0) throw Error("negative exponent in multi-index");
    if (c.is_zero()) return;
    auto it = terms_.find(lambda);
    if (it == terms_.end()) {
        terms_.emplace(lambda, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
}

std::optional<std::size_t> DiffPoly::shift_index(const Shift& s) const {
    for (std::size_t i = 0; i < shifts_.size(); ++i)
        if (shifts_[i] == s) return i;
    return std::nullopt;
}

bool DiffPoly::has_shifted_atom() const {
    for (const auto& [l, c] : terms_)
        for (std::size_t j = 1; j < l.size(); ++j)
            if (l[j] > 0) return true;
    return false;
}

namespace {

void require_nonzero(const DiffPoly& p) {
    if (p.is_zero()) throw Error("degree of the zero difference polynomial is undefined");
}

}  // namespace

int DiffPoly::deg_w() const {
    require_nonzero(*this);
    int best = 0;
    for (const auto& [l, c] : terms_) {
        int d = 0;
        for (int e : l) d += e;
        best = std::max(best, d);
    }
    return best;
}

int DiffPoly::ord_0() const {
    require_nonzero(*this);
    int best = terms_.begin()->first[0];
    for (const auto& [l, c] : terms_) best = std::min(best, l[0]);
    return best;
}

int DiffPoly::weight() const {
    require_nonzero(*this);
    int best = 0;
    for (const auto& [l, c] : terms_) {
        int d = 0;
        for (std::size_t j = 1; j < l.size(); ++j) d += l[j];
        best = std::max(best, d);
    }
    return best;
}

std::optional<int> DiffPoly::homogeneous_degree() const {
    if (terms_.empty()) return std::nullopt;
    std::optional<int> deg;
    for (const auto& [l, c] : terms_) {
        int d = 0;
        for (int e : l) d += e;
        if (deg && *deg != d) return std::nullopt;
        deg = d;
    }
    if (*deg <= 0) return std::nullopt;
    return deg;
}

FieldElem DiffPoly::to_field() const {
    FieldElem acc;
    for (const auto& [l, c] : terms_) {
        std::vector<Monomial::Factor> f;
        for (std::size_t j = 0; j < l.size(); ++j)
            if (l[j] > 0) f.emplace_back(w_atom(shifts_[j]), l[j]);
        acc += c * FieldElem(Poly::monomial(Monomial::from_factors(std::move(f))));
    }
    return acc;
}

std::optional<DiffPoly> DiffPoly::from_field(const FieldElem& x) {
    for (Var v : x.den().vars())
        if (w_atom_shift(v)) return std::nullopt;
    std::vector<Shift> shifts;
    for (Var v : x.num().vars())
        if (auto s = w_atom_shift(v)) shifts.push_back(*s);
    DiffPoly p(shifts);
    FieldElem inv_den = FieldElem(Poly(1), x.den());
    for (const auto& t : x.num().terms()) {
        MultiIndex l(p.shifts_.size(), 0);
        std::vector<Monomial::Factor> rest;
        for (const auto& [v, e] : t.mono.factors()) {
            if (auto s = w_atom_shift(v))
                l[*p.shift_index(*s)] = e;
            else
                rest.emplace_back(v, e);
        }
        FieldElem c(Poly::monomial(Monomial::from_factors(std::move(rest)), t.coef));
        p.add_term(l, c * inv_den);
    }
    return p;
}

std::string DiffPoly::to_string() const {
    // Atom order: shift descending.
    std::vector<std::size_t> order(shifts_.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return shifts_[b] < shifts_[a]; });
    std::vector<std::pair<MultiIndex, const FieldElem*>> rows;
    for (const auto& [l, c] : terms_) {
        MultiIndex key;
        for (std::size_t i : order) key.push_back(l[i]);
        rows.emplace_back(std::move(key), &c);
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::pair<FieldElem, std::string>> parts;
    for (const auto& [key, c] : rows) {
        std::string atoms;
        for (std::size_t k = 0; k < key.size(); ++k) {
            if (key[k] == 0) continue;
            if (!atoms.empty()) atoms += "*";
            atoms += "w(" + shifts_[order[k]].arg_text() + ")";
            if (key[k] > 1) atoms += "^" + std::to_string(key[k]);
        }
        parts.emplace_back(*c, atoms);
    }
    return join_signed_terms(parts);
}

// ---------------------------------------------------------------- WPolynomial

WPolynomial::WPolynomial(std::vector<FieldElem> c) : c_(std::move(c)) {
    trim();
}

WPolynomial WPolynomial::w() {
    return WPolynomial({FieldElem(), FieldElem(1)});
}

WPolynomial WPolynomial::constant(const FieldElem& c) {
    return WPolynomial({c});
}

void WPolynomial::trim() {
    while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

FieldElem WPolynomial::coeff(int i) const {
    if (i < 0 || i >= static_cast<int>(c_.size())) return FieldElem();
    return c_[static_cast<std::size_t>(i)];
}

int WPolynomial::ord_0() const {
    if (c_.empty()) throw Error("ord_0 of the zero polynomial is undefined");
    int i = 0;
    while (c_[static_cast<std::size_t>(i)].is_zero()) ++i;
    return i;
}

WPolynomial WPolynomial::operator+(const WPolynomial& o) const {
    std::vector<FieldElem> c(std::max(c_.size(), o.c_.size()));
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (i < c_.size()) c[i] += c_[i];
        if (i < o.c_.size()) c[i] += o.c_[i];
    }
    return WPolynomial(std::move(c));
}

WPolynomial WPolynomial::operator-(const WPolynomial& o) const {
    return *this + o.scaled(FieldElem(-1));
}

WPolynomial WPolynomial::operator*(const WPolynomial& o) const {
    if (is_zero() || o.is_zero()) return WPolynomial();
    std::vector<FieldElem> c(c_.size() + o.c_.size() - 1);
    for (std::size_t i = 0; i < c_.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size(); ++j) c[i + j] += c_[i] * o.c_[j];
    return WPolynomial(std::move(c));
}

WPolynomial WPolynomial::scaled(const FieldElem& k) const {
    std::vector<FieldElem> c;
    for (const auto& x : c_) c.push_back(x * k);
    return WPolynomial(std::move(c));
}

std::pair<WPolynomial, WPolynomial> WPolynomial::divmod(const WPolynomial& d) const {
    if (d.is_zero()) throw ArithmeticError("polynomial division by zero");
    std::vector<FieldElem> r = c_;
    int dd = d.degree();
    std::vector<FieldElem> q(std::max<int>(0, degree() - dd + 1));
    FieldElem inv = d.lc().inverse();
    for (int i = degree(); i >= dd; --i) {
        FieldElem f = r[static_cast<std::size_t>(i)] * inv;
        if (f.is_zero()) continue;
        q[static_cast<std::size_t>(i - dd)] = f;
        for (int j = 0; j <= dd; ++j) r[static_cast<std::size_t>(i - dd + j)] -= f * d.c_[static_cast<std::size_t>(j)];
    }
    return {WPolynomial(std::move(q)), WPolynomial(std::move(r))};
}

WPolynomial WPolynomial::monic() const {
    if (is_zero()) return *this;
    return scaled(lc().inverse());
}

FieldElem WPolynomial::evaluate(const FieldElem& x) const {
    FieldElem acc;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

FieldElem WPolynomial::to_field(Var w) const {
    FieldElem acc;
    FieldElem wv = FieldElem::variable(w);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * wv + *it;
    return acc;
}

std::optional<WPolynomial> WPolynomial::from_field(const FieldElem& x, Var w) {
    if (x.den().contains(w)) return std::nullopt;
    FieldElem inv_den(Poly(1), x.den());
    std::vector<FieldElem> c;
    for (const auto& p : x.num().coefficients(w)) c.push_back(FieldElem(p) * inv_den);
    return WPolynomial(std::move(c));
}

std::string WPolynomial::to_string(const std::string& atom) const {
    std::vector<std::pair<FieldElem, std::string>> parts;
    for (int i = degree(); i >= 0; --i) {
        const FieldElem& c = c_[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        std::string a = i == 0 ? "" : (i == 1 ? atom : atom + "^" + std::to_string(i));
        parts.emplace_back(c, a);
    }
    return join_signed_terms(parts);
}

// ---------------------------------------------------------------- gcd / resultant

namespace {

// Multiplies by the lcm of the coefficient denominators.
Poly cleared(const WPolynomial& a, Var w) {
    Poly l(1);
    for (const auto& c : a.coefficients()) {
        if (c.den().is_one()) continue;
        Poly g = gcd(l, c.den());
        l = *(l * c.den()).divide_exact(g);
    }
    Poly acc;
    for (int i = a.degree(); i >= 0; --i) {
        const FieldElem& c = a.coefficients()[static_cast<std::size_t>(i)];
        Poly term = c.is_zero() ? Poly() : c.num() * *l.divide_exact(c.den());
        acc = acc * Poly::variable(w) + term;
    }
    return acc;
}

}  // namespace

WPolynomial wpoly_gcd(const WPolynomial& a, const WPolynomial& b) {
    if (a.is_zero()) return b.monic();
    if (b.is_zero()) return a.monic();
    if (a.degree() == 0 || b.degree() == 0) return WPolynomial::constant(FieldElem(1));
    Var w = Var::aux("W");
    Poly g = gcd(cleared(a, w), cleared(b, w));
    std::vector<FieldElem> c;
    for (const auto& p : g.coefficients(w)) c.push_back(FieldElem(p));
    WPolynomial r(std::move(c));
    if (r.degree() <= 0) return WPolynomial::constant(FieldElem(1));
    return r.monic();
}

FieldElem determinant(std::vector<std::vector<FieldElem>> m) {
    std::size_t n = m.size();
    FieldElem det(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col].is_zero()) ++piv;
        if (piv == n) return FieldElem();
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        FieldElem inv = m[col][col].inverse();
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col].is_zero()) continue;
            FieldElem f = m[r][col] * inv;
            for (std::size_t k = col; k < n; ++k) m[r][k] -= f * m[col][k];
        }
    }
    return det;
}

FieldElem wpoly_resultant(const WPolynomial& a, const WPolynomial& b) {
    if (a.is_zero() || b.is_zero()) throw Error("resultant needs nonzero polynomials");
    int m = a.degree();
    int n = b.degree();
    if (m == 0 && n == 0) return FieldElem(1);
    std::size_t size = static_cast<std::size_t>(m + n);
    std::vector<std::vector<FieldElem>> s(size, std::vector<FieldElem>(size));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) s[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + i)] = a.coeff(i);
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i)
            s[static_cast<std::size_t>(n + r)][static_cast<std::size_t>(r + i)] = b.coeff(i);
    return determinant(std::move(s));
}

}  // namespace dclunie
