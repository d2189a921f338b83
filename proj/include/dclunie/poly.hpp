#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dclunie/var.hpp"

namespace dclunie {

using Rational = mpq_class;
using Integer = mpz_class;

// Power product; factors sorted by variable order (most significant first), exponents > 0.
class Monomial {
public:
    using Factor = std::pair<Var, int>;

    Monomial() = default;
    explicit Monomial(Var v, int e = 1);
    static Monomial from_factors(std::vector<Factor> f);  // sorts and merges

    const std::vector<Factor>& factors() const { return f_; }
    bool is_one() const { return f_.empty(); }
    int degree(Var v) const;
    int total_degree() const;

    Monomial operator*(const Monomial& o) const;
    // nullopt when o does not divide *this.
    std::optional<Monomial> divide(const Monomial& o) const;
    Monomial gcd(const Monomial& o) const;
    Monomial without(Var v) const;

    friend bool operator==(const Monomial& a, const Monomial& b) = default;

    std::string to_string() const;

private:
    std::vector<Factor> f_;
};

// Lexicographic comparison, z most significant: >0 if a > b.
int lex_compare(const Monomial& a, const Monomial& b);

struct LexGreater {
    bool operator()(const Monomial& a, const Monomial& b) const { return lex_compare(a, b) > 0; }
};

struct Term {
    Monomial mono;
    Rational coef;
};

// Sparse multivariate polynomial over Q; terms strictly decreasing in lex order.
class Poly {
public:
    Poly() = default;
    Poly(const Rational& c);  // NOLINT(google-explicit-constructor)
    Poly(long c) : Poly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
    static Poly variable(Var v);
    static Poly monomial(const Monomial& m, const Rational& c = 1);
    // Canonicalizes: sorts, merges, drops zeros.
    static Poly from_terms(std::vector<Term> terms);

    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    bool is_one() const;
    bool is_monomial() const { return terms_.size() == 1; }
    Rational constant_value() const;  // requires is_constant()

    const Term& leading() const { return terms_.front(); }
    const Rational& lc() const { return terms_.front().coef; }

    int degree(Var v) const;
    int min_degree(Var v) const;
    int total_degree() const;
    std::set<Var> vars() const;
    bool contains(Var v) const;

    // Coefficients with respect to v, indexed by power of v.
    std::vector<Poly> coefficients(Var v) const;
    static Poly from_coefficients(Var v, const std::vector<Poly>& c);

    Poly operator-() const;
    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly& operator+=(const Poly& o) { return *this = *this + o; }
    Poly& operator-=(const Poly& o) { return *this = *this - o; }
    Poly& operator*=(const Poly& o) { return *this = *this * o; }
    Poly scaled(const Rational& c) const;
    Poly times_monomial(const Monomial& m) const;
    Poly pow(int e) const;

    // Exact quotient, nullopt when o does not divide *this.
    std::optional<Poly> divide_exact(const Poly& o) const;

    // Leading coefficient made 1 (zero stays zero).
    Poly monic() const;
    // Greatest monomial dividing every term.
    Monomial monomial_content() const;

    // Substitution of variables; vars absent from the map are kept.
    Poly substitute(const std::map<Var, Poly>& s) const;
    Poly rename(const std::function<Var(Var)>& f) const;

    friend bool operator==(const Poly& a, const Poly& b);

    std::string to_string() const;

private:
    std::vector<Term> terms_;
};

// Monic gcd over Q[vars]; gcd(0,0) = 0.
Poly gcd(const Poly& a, const Poly& b);
// Content with respect to v: gcd of the coefficients in v.
Poly content(const Poly& p, Var v);

// Pseudo-remainder of a by b in v.
Poly pseudo_remainder(const Poly& a, const Poly& b, Var v);

std::string rational_to_string(const Rational& q);

// Exact square root when p is the square of a polynomial over Q (sign chosen so the
// leading coefficient is positive).
std::optional<Poly> poly_sqrt(const Poly& p);
std::optional<Rational> rational_sqrt(const Rational& q);

}  // namespace dclunie
