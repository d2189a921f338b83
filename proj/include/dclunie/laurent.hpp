#pragma once

#include <atomic>
#include <functional>
#include <string>
#include <vector>

#include "dclunie/errors.hpp"
#include "dclunie/field.hpp"

namespace dclunie {

// Outcome of a symbolic zero test on a leading coefficient.
enum class Nonzero { zero, nonzero, inconclusive };

// Raised by series division when the divisor's leading coefficient might vanish
// (it depends on free seed symbols not known to be nonzero).
class InconclusiveNonzero : public Error {
public:
    explicit InconclusiveNonzero(FieldElem witness)
        : Error("leading coefficient " + witness.to_string() + " is not provably nonzero"),
          witness_(std::move(witness)) {}
    const FieldElem& witness() const { return witness_; }

private:
    FieldElem witness_;
};

// Genericity bookkeeping. Coefficient data (z, zhat, symbols, jets) is nonzero as soon as
// it is a nonzero field element; free seed symbols are only nonzero when flagged. In
// generic mode an inconclusive test is recorded as an assumption and answered "nonzero".
class Assumptions {
public:
    explicit Assumptions(bool assume_generic = true) : generic_(assume_generic) {}

    Nonzero classify(const FieldElem& x);
    bool generic() const { return generic_; }
    const std::vector<FieldElem>& assumed() const { return assumed_; }
    void add(const FieldElem& x) { assumed_.push_back(x); }

private:
    bool generic_;
    std::vector<FieldElem> assumed_;
};

// Zero test without side effects; `assumed` lists expressions already known to be nonzero.
Nonzero classify_nonzero(const FieldElem& x, const std::vector<FieldElem>& assumed = {});

// Truncated Laurent series sum_{e >= val} c_e t^e, known for exponents < trunc.
class LaurentSeries {
public:
    static constexpr int kExact = 1 << 28;

    LaurentSeries() = default;  // exact zero
    static LaurentSeries zero(int trunc = kExact);
    static LaurentSeries constant(const FieldElem& c, int trunc = kExact);
    static LaurentSeries monomial(const FieldElem& c, int exponent, int trunc = kExact);
    // Coefficients start at exponent `val`; leading zeros are stripped.
    static LaurentSeries from_coefficients(int val, std::vector<FieldElem> c, int trunc);

    // Zero up to trunc has valuation == trunc.
    int valuation() const { return val_; }
    int trunc() const { return trunc_; }
    bool is_exact() const { return trunc_ >= kExact; }
    bool is_zero() const { return c_.empty(); }
    const FieldElem& leading() const;
    FieldElem coeff(int e) const;  // ArithmeticError for e >= trunc
    const std::vector<FieldElem>& coefficients() const { return c_; }

    LaurentSeries truncated(int t) const;
    LaurentSeries times_t(int n) const;
    LaurentSeries map_coefficients(const std::function<FieldElem(const FieldElem&)>& f) const;

    LaurentSeries operator-() const;
    LaurentSeries operator+(const LaurentSeries& o) const;
    LaurentSeries operator-(const LaurentSeries& o) const;
    LaurentSeries operator*(const LaurentSeries& o) const;
    LaurentSeries scaled(const FieldElem& c) const;
    LaurentSeries pow(int e) const;

    // Division needs a provably nonzero leading coefficient; with an Assumptions object
    // in generic mode an inconclusive coefficient is assumed nonzero and recorded.
    // An exact multi-term divisor needs `cap` (absolute truncation of the result).
    LaurentSeries inverse(Assumptions* a = nullptr, int cap = kExact) const;
    LaurentSeries divide(const LaurentSeries& o, Assumptions* a = nullptr, int cap = kExact) const;
    LaurentSeries operator/(const LaurentSeries& o) const { return divide(o); }

    // Equality of known data: same truncation and coefficients.
    friend bool operator==(const LaurentSeries& a, const LaurentSeries& b);
    // Agreement on all exponents below min(trunc).
    bool agrees_with(const LaurentSeries& o) const;

    std::string to_string(const std::string& var = "t") const;

private:
    void strip();
    std::vector<Poly> inverse_numerators(std::size_t n) const;
    int val_ = kExact;
    int trunc_ = kExact;
    std::vector<FieldElem> c_;  // c_[i] is the coefficient of t^(val_ + i)
};

// Source of fresh seed symbols "_<prefix><n>". The counter is atomic so concurrent
// generators never hand out the same name twice.
class FreshSeed {
public:
    explicit FreshSeed(std::string prefix) : prefix_(std::move(prefix)) {}
    FreshSeed(const FreshSeed&) = delete;
    FreshSeed& operator=(const FreshSeed&) = delete;

    Var next(bool nonzero = false);
    const std::string& prefix() const { return prefix_; }
    int counter() const { return counter_.load(); }

private:
    std::string prefix_;
    std::atomic<int> counter_{0};
};

// u0 + u1 t + ... + u_{trunc-1} t^{trunc-1}.
LaurentSeries generic_finite_series(FreshSeed& seed, int trunc);
// beta t^-k + u t^{1-k} + ... with beta flagged nonzero.
LaurentSeries generic_pole_series(FreshSeed& seed, int k, int trunc);

// How opaque (non-constant) function symbols are handled by taylor_at.
//   strict: refuse them (UnsupportedError);
//   jets:   expand g(zhat+m+t) = sum_j g[j](zhat+m) t^j with one jet symbol per
//           Taylor coefficient.
enum class ExpansionPolicy { strict, jets };

struct GenericPoint {
    int offset = 0;  // site zhat + offset
};

// Expansion of a(zhat + site + t) up to and including t^order.
LaurentSeries taylor_at(const FieldElem& a, GenericPoint site, int order,
                        ExpansionPolicy policy = ExpansionPolicy::strict);

// Evaluates p with each variable replaced by a series. Result is sound and known at
// least up to `cap` whenever the inputs carry enough precision.
LaurentSeries evaluate(const Poly& p, const std::function<LaurentSeries(Var)>& series_of,
                       int cap = LaurentSeries::kExact);

}  // namespace dclunie
