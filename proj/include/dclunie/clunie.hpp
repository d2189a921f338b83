#pragma once

#include <string>
#include <vector>

#include "dclunie/eqparse.hpp"

namespace dclunie {

struct Invariants {
    int deg_P = 0;
    int ord0_P = 0;
    int kappa_P = 0;
    int deg_H = 0;
    int deg_Q = 0;
    int ord0_Q = 0;
    int d_w = 0;  // max{deg_Q, deg_H + deg_P} - min{deg_P, ord0_Q}
    int homogeneous_degree = 0;

    friend bool operator==(const Invariants&, const Invariants&) = default;
};

struct TheoremCheck {
    bool applies = false;
    int lhs = 0;
    int rhs = 0;
    std::string inequality;  // evaluated form, e.g. "max{2, 1} = 2 > min{2, 0} - 0 = 0"
    bool borderline = false;  // equality case of the proximity bound
};

struct Conclusion {
    std::string tag;
    std::string statement;
};

struct TheoremVerdict {
    Invariants invariants;
    TheoremCheck pole_density;  // max{deg_H, deg_Q - deg_P} > min{deg_P, ord0_Q} - ord0_P
    TheoremCheck proximity;     // 2 kappa_P <= d_w
    std::vector<Conclusion> conclusions;
};

Invariants compute_invariants(const NormalizedEquation& eq);

TheoremCheck check_pole_density(const Invariants& inv);
TheoremCheck check_proximity(const Invariants& inv);
TheoremCheck check_pole_density(const NormalizedEquation& eq);
TheoremCheck check_proximity(const NormalizedEquation& eq);

// Verdicts depend on the invariants only.
TheoremVerdict verdict_from_invariants(const Invariants& inv);
TheoremVerdict full_report(const NormalizedEquation& eq);

}  // namespace dclunie
