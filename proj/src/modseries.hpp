// Truncated Laurent series over F_p with the truncation rules of LaurentSeries.
#pragma once

#include <functional>
#include <vector>

#include "dclunie/laurent.hpp"
#include "modp.hpp"

namespace dclunie::modp {

class Series {
public:
    static constexpr int kExact = LaurentSeries::kExact;

    Series() = default;  // exact zero
    static Series zero(int trunc = kExact);
    static Series constant(u64 c, int trunc = kExact);
    static Series from_coefficients(int val, std::vector<u64> c, int trunc);

    int valuation() const { return val_; }
    int trunc() const { return trunc_; }
    bool is_exact() const { return trunc_ >= kExact; }
    bool is_zero() const { return c_.empty(); }
    u64 coeff(int e) const;  // 0 below the valuation; ArithmeticError beyond trunc

    Series truncated(int t) const;
    Series operator-() const;
    Series operator+(const Series& o) const;
    Series operator-(const Series& o) const { return *this + (-o); }
    Series operator*(const Series& o) const;
    // ArithmeticError on a zero series.
    Series inverse(int cap = kExact) const;
    Series divide(const Series& o, int cap = kExact) const;

private:
    void strip();
    int val_ = kExact;
    int trunc_ = kExact;
    std::vector<u64> c_;
};

// Image of a rational; ArithmeticError when p divides the denominator.
u64 image(const Rational& q);

Series evaluate(const Poly& p, const std::function<Series(Var)>& series_of, int cap = Series::kExact);

}  // namespace dclunie::modp
