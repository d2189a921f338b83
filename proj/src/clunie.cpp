#include "dclunie/clunie.hpp"

#include <algorithm>

namespace dclunie {

Invariants compute_invariants(const NormalizedEquation& eq) {
    Invariants v;
    v.deg_P = eq.P.deg_w();
    v.ord0_P = eq.P.ord_0();
    v.kappa_P = eq.P.weight();
    v.deg_H = eq.H.degree();
    v.deg_Q = eq.Q.degree();
    v.ord0_Q = eq.Q.ord_0();
    v.d_w = std::max(v.deg_Q, v.deg_H + v.deg_P) - std::min(v.deg_P, v.ord0_Q);
    v.homogeneous_degree = eq.P.homogeneous_degree().value_or(0);
    return v;
}

TheoremCheck check_pole_density(const Invariants& v) {
    TheoremCheck c;
    c.lhs = std::max(v.deg_H, v.deg_Q - v.deg_P);
    c.rhs = std::min(v.deg_P, v.ord0_Q) - v.ord0_P;
    c.applies = c.lhs > c.rhs;
    c.inequality = "max{" + std::to_string(v.deg_H) + ", " + std::to_string(v.deg_Q - v.deg_P) + "} = " +
                   std::to_string(c.lhs) + (c.applies ? " > " : " <= ") + "min{" + std::to_string(v.deg_P) +
                   ", " + std::to_string(v.ord0_Q) + "} - " + std::to_string(v.ord0_P) + " = " +
                   std::to_string(c.rhs);
    return c;
}

TheoremCheck check_proximity(const Invariants& v) {
    TheoremCheck c;
    c.lhs = 2 * v.kappa_P;
    c.rhs = v.d_w;
    c.applies = c.lhs <= c.rhs;
    c.borderline = c.lhs == c.rhs;
    c.inequality = "2*" + std::to_string(v.kappa_P) + " = " + std::to_string(c.lhs) + (c.applies ? " <= " : " > ") +
                   "max{" + std::to_string(v.deg_Q) + ", " + std::to_string(v.deg_H + v.deg_P) + "} - min{" +
                   std::to_string(v.deg_P) + ", " + std::to_string(v.ord0_Q) + "} = " + std::to_string(c.rhs);
    return c;
}

TheoremCheck check_pole_density(const NormalizedEquation& eq) {
    return check_pole_density(compute_invariants(eq));
}

TheoremCheck check_proximity(const NormalizedEquation& eq) {
    return check_proximity(compute_invariants(eq));
}

TheoremVerdict verdict_from_invariants(const Invariants& inv) {
    TheoremVerdict v;
    v.invariants = inv;
    v.pole_density = check_pole_density(inv);
    v.proximity = check_proximity(inv);
    if (v.pole_density.applies) {
        v.conclusions.push_back(
            {"pole-density", "every finite-order meromorphic solution w satisfies N(r,w) != S(r,w)"});
    }
    if (v.proximity.applies) {
        v.conclusions.push_back(
            {"proximity",
             "every finite-order meromorphic solution w satisfies m(r,w) = o(T(r,w)/r^delta) + O(T_coef(r)) "
             "for some delta in (0,1), outside a set of finite logarithmic measure; with small coefficients "
             "this is m(r,w) = S(r,w)"});
        v.conclusions.push_back(
            {"pole-count", "every finite-order meromorphic solution w satisfies N(r,w) = T(r,w) + S(r,w)"});
    }
    return v;
}

TheoremVerdict full_report(const NormalizedEquation& eq) {
    return verdict_from_invariants(compute_invariants(eq));
}

}  // namespace dclunie
