#pragma once

#include <array>
#include <string>

#include "dclunie/laurent.hpp"

namespace dclunie {

// a*c + b vanishes identically, so w(z+1) = a(z) for every w.
class DegenerateError : public UnsupportedError {
public:
    using UnsupportedError::UnsupportedError;
};

// w(z+1) = (a(z) w(z) + b(z)) / (w(z) - c(z))
struct RiccatiEquation {
    FieldElem a;
    FieldElem b;
    FieldElem c;

    FieldElem discriminant() const { return a * c + b; }  // -det M
    bool degenerate() const { return discriminant().is_zero(); }
    void require_nondegenerate() const;
    std::string to_string() const;
};

// Parses "w(z+1) = (a*w + b)/(w - c)" style text by normalizing the right-hand side.
RiccatiEquation riccati_from_text(const std::string& text, const SymbolTable& symbols = {});

// Local data around a pole of order k at zhat.
struct RiccatiExpansion {
    int k = 1;
    LaurentSeries pole;  // w(zhat + t) = beta t^-k + ...
    LaurentSeries post;  // w(zhat + 1 + t)
    LaurentSeries pre;   // w(zhat - 1 + t)
    FieldElem post_value;  // t^0 coefficient of post
    FieldElem pre_value;   // t^0 coefficient of pre
    int post_gap = -1;     // valuation of post - a(zhat + t)
    int pre_gap = -1;      // valuation of pre - c(zhat - 1 + t)
    FieldElem gamma;       // t^k coefficient of post - a(zhat + t)
    FieldElem alpha;       // t^k coefficient of pre - c(zhat - 1 + t)
    bool residual_zero = false;  // both recurrences hold up to truncation
    bool template_match = false;  // constant terms a, c(z-1) and gaps exactly k
};

// extra: series terms beyond t^k (at least 1).
RiccatiExpansion local_expansion_check(const RiccatiEquation& rq, int k, int extra = 2);

// g = (w(z+1) - a)(w - c) at the two template pole types.
struct AuxiliaryG {
    FieldElem g;  // in terms of the atoms w(z), w(z+1)
    int valuation_at_pole_of_w = 0;       // w has a template pole at zhat
    int valuation_at_pole_of_shift = 0;   // w(z+1) has a pole at zhat (w(zhat) = c(zhat) to order k)
    bool finite() const { return valuation_at_pole_of_w >= 0 && valuation_at_pole_of_shift >= 0; }
};

AuxiliaryG auxiliary_g(const RiccatiEquation& rq, int k = 1);

// (p, q) -> M(z) (p, q) with w = p/q.
struct LinearPair {
    std::array<std::array<FieldElem, 2>, 2> M;
    FieldElem det;  // -(a c + b)
};

LinearPair linearize(const RiccatiEquation& rq);

}  // namespace dclunie
