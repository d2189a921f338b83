#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dclunie/field.hpp"

namespace dclunie {

// Exact Gaussian-rational shift constant re + im*i.
struct Shift {
    Rational re;
    Rational im;

    Shift() = default;
    Shift(long n) : re(n), im(0) {}  // NOLINT(google-explicit-constructor)
    Shift(Rational r, Rational i) : re(std::move(r)), im(std::move(i)) {}

    bool is_zero() const { return re == 0 && im == 0; }
    bool is_integer() const { return im == 0 && re.get_den() == 1; }
    int as_int() const;  // requires is_integer()

    friend bool operator==(const Shift& a, const Shift& b) { return a.re == b.re && a.im == b.im; }
    friend bool operator<(const Shift& a, const Shift& b) {
        return a.re != b.re ? a.re < b.re : a.im < b.im;
    }

    // "z", "z+1", "z-1/2", "z+i", "z+1-2i"
    std::string arg_text() const;
};

// Internal variable standing for w(z + s) inside polynomial arithmetic.
Var w_atom(const Shift& s);
// Inverse of w_atom; nullopt for other variables.
std::optional<Shift> w_atom_shift(Var v);

class WPolynomial;

// Difference polynomial sum_lambda a_lambda(z) prod_j w(z + c_j)^lambda_j.
// shifts()[0] is always 0; the remaining shifts are distinct and sorted.
class DiffPoly {
public:
    using MultiIndex = std::vector<int>;

    DiffPoly();  // zero polynomial with shift list {0}
    explicit DiffPoly(std::vector<Shift> shifts);

    const std::vector<Shift>& shifts() const { return shifts_; }
    const std::map<MultiIndex, FieldElem>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    // Adds c * prod w(z+shifts[j])^lambda[j]; zero results are removed.
    void add_term(const MultiIndex& lambda, const FieldElem& c);
    std::optional<std::size_t> shift_index(const Shift& s) const;
    bool has_shifted_atom() const;

    // Errors (Error) on the zero polynomial.
    int deg_w() const;
    int ord_0() const;
    int weight() const;
    // Common total degree when all terms share one positive degree.
    std::optional<int> homogeneous_degree() const;
    bool is_homogeneous() const { return homogeneous_degree().has_value(); }

    // Polynomial in the w_atom variables.
    FieldElem to_field() const;
    // Inverse of to_field; nullopt if x is not polynomial in the atoms.
    static std::optional<DiffPoly> from_field(const FieldElem& x);

    // Atoms ordered by shift descending, terms in descending lex order of exponents.
    std::string to_string() const;

    friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
        return a.shifts_ == b.shifts_ && a.terms_ == b.terms_;
    }

private:
    std::vector<Shift> shifts_;
    std::map<MultiIndex, FieldElem> terms_;
};

// Polynomial in w(z) with coefficients in the coefficient field.
class WPolynomial {
public:
    WPolynomial() = default;
    explicit WPolynomial(std::vector<FieldElem> c);
    static WPolynomial w();
    static WPolynomial constant(const FieldElem& c);

    int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero
    bool is_zero() const { return c_.empty(); }
    const std::vector<FieldElem>& coefficients() const { return c_; }
    FieldElem coeff(int i) const;
    const FieldElem& lc() const { return c_.back(); }
    int ord_0() const;  // lowest power with nonzero coefficient

    WPolynomial operator+(const WPolynomial& o) const;
    WPolynomial operator-(const WPolynomial& o) const;
    WPolynomial operator*(const WPolynomial& o) const;
    WPolynomial scaled(const FieldElem& k) const;
    // Division with remainder over the coefficient field.
    std::pair<WPolynomial, WPolynomial> divmod(const WPolynomial& d) const;
    WPolynomial monic() const;
    FieldElem evaluate(const FieldElem& x) const;

    FieldElem to_field(Var w) const;
    static std::optional<WPolynomial> from_field(const FieldElem& x, Var w);

    // "a2*w(z)^2 + a1*w(z) + a0"
    std::string to_string(const std::string& atom = "w(z)") const;

    friend bool operator==(const WPolynomial& a, const WPolynomial& b) { return a.c_ == b.c_; }

private:
    void trim();
    std::vector<FieldElem> c_;
};

// Monic gcd over the coefficient field (gcd(0,0) = 0). Denominators are cleared and the
// gcd is taken in the polynomial ring with primitive parts and fraction-free
// pseudo-remainders.
WPolynomial wpoly_gcd(const WPolynomial& a, const WPolynomial& b);

// Determinant of the Sylvester matrix: deg(b) rows of a's coefficients on top, then
// deg(a) rows of b's, columns indexed by ascending powers of w. With this layout
// Res(w - r1, w - r2) = r2 - r1.
FieldElem wpoly_resultant(const WPolynomial& a, const WPolynomial& b);

// Determinant by Gaussian elimination over the field.
FieldElem determinant(std::vector<std::vector<FieldElem>> m);

// Formats "c*atoms" products with signs folded into the joiner.
std::string join_signed_terms(const std::vector<std::pair<FieldElem, std::string>>& terms);

}  // namespace dclunie
