#pragma once

#include <mpfr.h>

#include <string>

#include "dclunie/poly.hpp"

namespace dclunie {

// MPFR value that carries its own precision; results take the larger operand precision.
class Real {
public:
    explicit Real(int precision = 128);
    Real(const Real& o);
    Real(Real&& o) noexcept;
    Real& operator=(const Real& o);
    Real& operator=(Real&& o) noexcept;
    ~Real();

    static Real from_rational(const Rational& q, int precision);
    static Real from_double(double x, int precision);
    // Decimal text such as "-1.25e3"; NumericError on malformed input.
    static Real from_string(const std::string& s, int precision);

    int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    // Significant digits in scientific notation; "0" for zero.
    std::string to_string(int digits = 20) const;

    Real operator-() const;
    Real operator+(const Real& o) const;
    Real operator-(const Real& o) const;
    Real operator*(const Real& o) const;
    Real operator/(const Real& o) const;
    Real abs() const;
    Real log() const;
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }

    mpfr_srcptr raw() const { return v_; }
    mpfr_ptr raw() { return v_; }

private:
    mpfr_t v_;
};

Real hypot(const Real& a, const Real& b);

struct Complex {
    Real re;
    Real im;

    explicit Complex(int precision = 128) : re(precision), im(precision) {}
    Complex(Real r, Real i) : re(std::move(r)), im(std::move(i)) {}
    static Complex from_rationals(const Rational& r, const Rational& i, int precision) {
        return {Real::from_rational(r, precision), Real::from_rational(i, precision)};
    }

    int precision() const { return re.precision(); }
    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    Real abs() const { return hypot(re, im); }
    // max(|re|, |im|): cheap norm for scaling
    Real norm_inf() const;

    Complex operator-() const { return {-re, -im}; }
    Complex operator+(const Complex& o) const { return {re + o.re, im + o.im}; }
    Complex operator-(const Complex& o) const { return {re - o.re, im - o.im}; }
    Complex operator*(const Complex& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    Complex operator/(const Complex& o) const;
    Complex scaled(const Real& s) const { return {re * s, im * s}; }

    std::string to_string(int digits = 20) const;
};

}  // namespace dclunie
