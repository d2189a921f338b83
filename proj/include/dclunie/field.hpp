#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dclunie/poly.hpp"

namespace dclunie {

enum class SymbolKind { opaque_function, constant };

struct SymbolEntry {
    std::string name;
    SymbolKind kind = SymbolKind::opaque_function;
    int period = 0;  // 0 = aperiodic; only meaningful for opaque functions
};

// Declared coefficient symbols. Names are unique and never collide with the reserved
// words of the equation language.
class SymbolTable {
public:
    void declare(const std::string& name, SymbolKind kind, int period = 0);
    // Parses "name[:period=k][:constant]" (command line form) or
    // "name [period=k] [constant]" (header line form, after "#symbol").
    void declare_spec(const std::string& spec);

    const SymbolEntry* find(const std::string& name) const;
    const std::vector<SymbolEntry>& entries() const { return entries_; }
    bool empty() const { return entries_.empty(); }

    // Variable for the symbol evaluated at z + shift (constants ignore the shift).
    Var instance(const std::string& name, int shift = 0) const;

    static bool is_reserved(const std::string& name);

private:
    std::vector<SymbolEntry> entries_;
};

// Element of Q(z, symbols): num/den with gcd(num, den) = 1 and den monic in the
// lexicographic order. The representation is unique.
class FieldElem {
public:
    FieldElem() : den_(1) {}
    FieldElem(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
    FieldElem(long c) : FieldElem(Rational(c)) {}       // NOLINT(google-explicit-constructor)
    FieldElem(const Poly& p) : num_(p), den_(1) {}      // NOLINT(google-explicit-constructor)
    FieldElem(const Poly& num, const Poly& den);

    static FieldElem variable(Var v) { return FieldElem(Poly::variable(v)); }
    // Caller guarantees gcd(num, den) = 1; only the monic scaling is applied.
    static FieldElem from_coprime(const Poly& num, const Poly& den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    bool is_polynomial() const { return den_.is_one(); }
    Rational constant_value() const { return num_.constant_value() / den_.constant_value(); }
    std::set<Var> vars() const;
    bool contains(Var v) const { return num_.contains(v) || den_.contains(v); }

    FieldElem operator-() const;
    FieldElem operator+(const FieldElem& o) const;
    FieldElem operator-(const FieldElem& o) const;
    FieldElem operator*(const FieldElem& o) const;
    FieldElem operator/(const FieldElem& o) const;  // ArithmeticError on zero divisor
    FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
    FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
    FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }
    FieldElem& operator/=(const FieldElem& o) { return *this = *this / o; }
    FieldElem inverse() const;
    FieldElem pow(int e) const;

    FieldElem substitute(const std::map<Var, FieldElem>& s) const;

    friend bool operator==(const FieldElem& a, const FieldElem& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    std::string to_string() const;

private:
    static FieldElem raw(Poly num, Poly den);
    Poly num_;
    Poly den_;
};

// z -> z + n; opaque function instances advance by n modulo their period.
FieldElem shift(const FieldElem& a, int n);
Poly shift(const Poly& p, int n);

// Re-canonicalizes num/den (used by property tests to check idempotence).
FieldElem normalize(const Poly& num, const Poly& den);

}  // namespace dclunie
