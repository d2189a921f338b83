#include "dclunie/mpcomplex.hpp"

#include <algorithm>

#include "dclunie/errors.hpp"

namespace dclunie {

namespace {

int prec_of(const Real& a, const Real& b) {
    return std::max(a.precision(), b.precision());
}

}  // namespace

Real::Real(int precision) {
    mpfr_init2(v_, std::max(precision, static_cast<int>(MPFR_PREC_MIN)));
    mpfr_set_zero(v_, 1);
}

Real::Real(const Real& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
}

Real::Real(Real&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
}

Real& Real::operator=(const Real& o) {
    if (this != &o) {
        mpfr_set_prec(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
}

Real::~Real() {
    mpfr_clear(v_);
}

Real Real::from_rational(const Rational& q, int precision) {
    Real r(precision);
    mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
    return r;
}

Real Real::from_double(double x, int precision) {
    Real r(precision);
    mpfr_set_d(r.v_, x, MPFR_RNDN);
    return r;
}

Real Real::from_string(const std::string& s, int precision) {
    Real r(precision);
    char* end = nullptr;
    if (!s.empty()) mpfr_strtofr(r.v_, s.c_str(), &end, 10, MPFR_RNDN);
    if (end == nullptr || end == s.c_str() || *end != '\0') throw NumericError("not a number: '" + s + "'");
    return r;
}

std::string Real::to_string(int digits) const {
    if (mpfr_zero_p(v_)) return "0";
    char* buf = nullptr;
    mpfr_asprintf(&buf, "%.*Rg", digits, v_);
    std::string s(buf);
    mpfr_free_str(buf);
    return s;
}

Real Real::operator-() const {
    Real r(precision());
    mpfr_neg(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::operator+(const Real& o) const {
    Real r(prec_of(*this, o));
    mpfr_add(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

Real Real::operator-(const Real& o) const {
    Real r(prec_of(*this, o));
    mpfr_sub(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

Real Real::operator*(const Real& o) const {
    Real r(prec_of(*this, o));
    mpfr_mul(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

Real Real::operator/(const Real& o) const {
    if (o.is_zero()) throw NumericError("division by zero");
    Real r(prec_of(*this, o));
    mpfr_div(r.v_, v_, o.v_, MPFR_RNDN);
    return r;
}

Real Real::abs() const {
    Real r(precision());
    mpfr_abs(r.v_, v_, MPFR_RNDN);
    return r;
}

Real Real::log() const {
    Real r(precision());
    mpfr_log(r.v_, v_, MPFR_RNDN);
    return r;
}

Real hypot(const Real& a, const Real& b) {
    Real r(std::max(a.precision(), b.precision()));
    mpfr_hypot(r.raw(), a.raw(), b.raw(), MPFR_RNDN);
    return r;
}

Real Complex::norm_inf() const {
    Real a = re.abs();
    Real b = im.abs();
    return a < b ? b : a;
}

Complex Complex::operator/(const Complex& o) const {
    if (o.is_zero()) throw NumericError("division by zero");
    Real d = o.re * o.re + o.im * o.im;
    return {(re * o.re + im * o.im) / d, (im * o.re - re * o.im) / d};
}

std::string Complex::to_string(int digits) const {
    if (im.is_zero()) return re.to_string(digits);
    std::string i = im.to_string(digits);
    if (i[0] == '-') return re.to_string(digits) + " - " + i.substr(1) + "i";
    return re.to_string(digits) + " + " + i + "i";
}

}  // namespace dclunie
