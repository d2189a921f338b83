#include "modseries.hpp"

#include <algorithm>
#include <map>

namespace dclunie::modp {

namespace {

int norm_trunc(long long t) {
    if (t >= Series::kExact - (1 << 20)) return Series::kExact;
    return static_cast<int>(t);
}

}  // namespace

Series Series::zero(int trunc) {
    Series s;
    s.trunc_ = norm_trunc(trunc);
    s.val_ = s.trunc_;
    return s;
}

Series Series::constant(u64 c, int trunc) {
    return from_coefficients(0, {c}, trunc);
}

Series Series::from_coefficients(int val, std::vector<u64> c, int trunc) {
    Series s;
    s.trunc_ = norm_trunc(trunc);
    s.val_ = val;
    s.c_ = std::move(c);
    long long keep = std::max(0LL, static_cast<long long>(s.trunc_) - val);
    if (static_cast<long long>(s.c_.size()) > keep) s.c_.resize(static_cast<std::size_t>(keep));
    s.strip();
    return s;
}

void Series::strip() {
    std::size_t lead = 0;
    while (lead < c_.size() && c_[lead] == 0) ++lead;
    if (lead == c_.size()) {
        c_.clear();
        val_ = trunc_;
        return;
    }
    if (lead > 0) {
        c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(lead));
        val_ += static_cast<int>(lead);
    }
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

u64 Series::coeff(int e) const {
    if (e >= trunc_) throw ArithmeticError("coefficient of t^" + std::to_string(e) + " is beyond the truncation");
    if (e < val_) return 0;
    std::size_t i = static_cast<std::size_t>(e - val_);
    return i < c_.size() ? c_[i] : 0;
}

Series Series::truncated(int t) const {
    if (t >= trunc_) return *this;
    return from_coefficients(val_, c_, t);
}

Series Series::operator-() const {
    Series s = *this;
    for (auto& x : s.c_) x = sub(0, x);
    return s;
}

Series Series::operator+(const Series& o) const {
    int t = std::min(trunc_, o.trunc_);
    if (c_.empty()) return o.truncated(t);
    if (o.c_.empty()) return truncated(t);
    int v = std::min(val_, o.val_);
    int last = std::max(val_ + static_cast<int>(c_.size()), o.val_ + static_cast<int>(o.c_.size()));
    last = std::min(last, t);
    std::vector<u64> c(static_cast<std::size_t>(std::max(0, last - v)), 0);
    for (std::size_t i = 0; i < c_.size(); ++i) {
        long long e = val_ + static_cast<long long>(i) - v;
        if (e < static_cast<long long>(c.size())) c[static_cast<std::size_t>(e)] = c_[i];
    }
    for (std::size_t i = 0; i < o.c_.size(); ++i) {
        long long e = o.val_ + static_cast<long long>(i) - v;
        if (e < static_cast<long long>(c.size())) c[static_cast<std::size_t>(e)] = add(c[static_cast<std::size_t>(e)], o.c_[i]);
    }
    return from_coefficients(v, std::move(c), t);
}

Series Series::operator*(const Series& o) const {
    long long t1 = static_cast<long long>(trunc_) + o.val_;
    long long t2 = static_cast<long long>(o.trunc_) + val_;
    int t = norm_trunc(std::min(t1, t2));
    if (c_.empty() || o.c_.empty()) return zero(t);
    int v = val_ + o.val_;
    long long n = std::min<long long>(static_cast<long long>(c_.size() + o.c_.size() - 1),
                                      static_cast<long long>(t) - v);
    if (n <= 0) return zero(t);
    std::vector<u64> c(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < c_.size() && i < c.size(); ++i)
        for (std::size_t j = 0; j < o.c_.size() && i + j < c.size(); ++j) c[i + j] = add(c[i + j], mul(c_[i], o.c_[j]));
    return from_coefficients(v, std::move(c), t);
}

Series Series::inverse(int cap) const {
    if (c_.empty()) throw ArithmeticError("division by a series that is zero up to its truncation");
    u64 d0 = inv(c_.front());
    if (is_exact() && c_.size() == 1) return from_coefficients(-val_, {d0}, kExact);
    long long t = is_exact() ? static_cast<long long>(cap) : static_cast<long long>(trunc_) - 2LL * val_;
    t = std::min<long long>(t, cap);
    if (t >= kExact) throw ArithmeticError("inverse of an exact series needs a truncation");
    long long n = t + val_;
    if (n <= 0) return zero(static_cast<int>(t));
    std::vector<u64> d(static_cast<std::size_t>(n), 0);
    d[0] = d0;
    for (std::size_t k = 1; k < d.size(); ++k) {
        u64 s = 0;
        for (std::size_t j = 1; j <= k && j < c_.size(); ++j) s = add(s, mul(c_[j], d[k - j]));
        d[k] = mul(sub(0, s), d0);
    }
    return from_coefficients(-val_, std::move(d), static_cast<int>(t));
}

Series Series::divide(const Series& o, int cap) const {
    int inv_cap = cap;
    if (cap < kExact && !c_.empty()) inv_cap = cap - val_;
    Series r = *this * o.inverse(inv_cap);
    return cap < kExact ? r.truncated(cap) : r;
}

u64 image(const Rational& q) {
    auto r = reduce(q);
    if (!r) throw ArithmeticError("rational " + q.get_str() + " has no image mod p");
    return *r;
}

Series evaluate(const Poly& p, const std::function<Series(Var)>& series_of, int cap) {
    if (p.is_zero()) return Series::zero(cap);
    std::map<Var, std::vector<Series>> powers;
    long long slack = 0;
    for (Var v : p.vars()) {
        Series s = series_of(v);
        int d = p.degree(v);
        if (!s.is_zero() && s.valuation() < 0) slack += static_cast<long long>(-s.valuation()) * d;
        std::vector<Series> pw{Series::constant(1)};
        pw.reserve(static_cast<std::size_t>(d) + 1);
        powers.emplace(v, std::move(pw)).first->second.push_back(std::move(s));
    }
    int pcap = norm_trunc(static_cast<long long>(cap) + slack);
    for (auto& [v, pw] : powers) {
        int d = p.degree(v);
        Series base = pw[1];
        pw.resize(1);
        for (int e = 1; e <= d; ++e) pw.push_back((pw.back() * base).truncated(pcap));
    }
    Series acc = Series::zero(cap);
    for (const auto& t : p.terms()) {
        const auto& fs = t.mono.factors();
        long long total = 0;
        for (const auto& [v, e] : fs) total += powers[v][static_cast<std::size_t>(e)].valuation();
        Series prod = Series::constant(image(t.coef));
        long long sofar = 0;
        for (const auto& [v, e] : fs) {
            const Series& f = powers[v][static_cast<std::size_t>(e)];
            prod = prod * f;
            sofar += f.valuation();
            if (cap < Series::kExact) prod = prod.truncated(norm_trunc(cap - (total - sofar)));
        }
        acc = acc + prod;
    }
    return acc;
}

}  // namespace dclunie::modp
