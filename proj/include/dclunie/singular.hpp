#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dclunie/eqparse.hpp"
#include "dclunie/laurent.hpp"

namespace dclunie {

enum class Direction { forward, backward };

// w(z+1) = rhs(w(z), w(z-1)) (forward) or w(z-1) = rhs(w(z), w(z+1)) (backward), from
// P = A + B * w(z+-1). All pieces are field elements in z, the symbols and the atoms.
struct TopShiftSolution {
    Direction direction = Direction::forward;
    FieldElem A;
    FieldElem B;
    FieldElem rhs;  // (Q - H*A) / (H*B)
};

// UnsupportedError when shifts are not within {-1, 0, 1} or P is not linear in w(z+1).
TopShiftSolution solve_top_shift(const NormalizedEquation& eq);
// Same for w(z-1); nullopt when P is not linear in w(z-1) or does not involve it.
std::optional<TopShiftSolution> solve_bottom_shift(const NormalizedEquation& eq);

// Root of H in w over the coefficient field, with multiplicity.
struct HRoot {
    FieldElem value;
    int multiplicity = 1;
};

struct HRootResult {
    std::vector<HRoot> roots;
    std::vector<WPolynomial> unsupported;  // squarefree factors of degree >= 3 or irreducible quadratics
};

// Squarefree decomposition: list of (factor, multiplicity), factors monic.
std::vector<std::pair<WPolynomial, int>> squarefree_decomposition(const WPolynomial& p);
HRootResult roots_of(const WPolynomial& p);

class TruncationExhausted : public Error {
public:
    using Error::Error;
};

struct SingularOptions {
    int max_order = 3;
    int max_assumptions = 4;  // branches with more stacked genericity assumptions are pruned
    int extra_terms = 0;      // added to the default series depth
    ExpansionPolicy policy = ExpansionPolicy::jets;
};

// Value of w at a lattice site: the series itself, or 1/w (positive valuation) at a pole.
struct SiteValue {
    bool pole = false;
    LaurentSeries s;

    static SiteValue finite(LaurentSeries x) { return {false, std::move(x)}; }
    static SiteValue reciprocal(LaurentSeries u) { return {true, std::move(u)}; }
    int pole_order() const { return pole ? s.valuation() : 0; }
    LaurentSeries laurent(Assumptions* as = nullptr) const { return pole ? s.inverse(as) : s; }
};

// Local propagation through the lattice zhat + n.
class LocalEngine {
public:
    LocalEngine(const NormalizedEquation& eq, ExpansionPolicy policy = ExpansionPolicy::jets);

    const NormalizedEquation& equation() const { return eq_; }
    const TopShiftSolution& forward() const { return fwd_; }
    const std::optional<TopShiftSolution>& backward() const { return bwd_; }
    ExpansionPolicy policy() const { return policy_; }

    // Value of w at `target` from the two neighbours on one side (target-1, target-2 for
    // forward, target+1, target+2 for backward). Inconclusive leading coefficients are
    // assumed nonzero and recorded in `as` (their zero branches are the case splits).
    LaurentSeries propagate(const std::map<int, LaurentSeries>& sites, int target, Assumptions& as);
    // Same in projective form; poles never appear as negative powers, so no
    // cancellation between pole terms is needed.
    SiteValue propagate(const std::map<int, SiteValue>& sites, int target, Assumptions& as);

    // Evaluates a field element in z, symbols and w atoms at site `s`; `atoms` gives the
    // series for w(z + j) as atoms[j].
    LaurentSeries evaluate_at(const FieldElem& x, int site, const std::map<int, LaurentSeries>& atoms,
                              int cap, Assumptions* as = nullptr);

    // H(w)*P - Q at `site` with the given series (zero up to truncation on solutions).
    LaurentSeries residual(const std::map<int, LaurentSeries>& sites, int site);

    // rhs with w(z) -> 1/u(z) and/or the outer atom -> 1/u(z-+1).
    const FieldElem& projective_rhs(bool forward, bool inner_pole, bool outer_pole);

private:
    LaurentSeries symbol_series(Var v, int site, int trunc);

    std::map<int, FieldElem> projective_;

    NormalizedEquation eq_;
    ExpansionPolicy policy_;
    TopShiftSolution fwd_;
    std::optional<TopShiftSolution> bwd_;
    int rhs_degree_ = 1;
};

struct Propagation {
    LaurentSeries value;
    std::vector<FieldElem> zero_branches;  // one case split per inconclusive leading coefficient
};

Propagation propagate(const NormalizedEquation& eq, const std::map<int, LaurentSeries>& sites, int target,
                      ExpansionPolicy policy = ExpansionPolicy::jets);

enum class EntryKind { h_root, b_vanishing };

std::string to_string(EntryKind k);
std::string to_string(Direction d);

// Order to which w(zhat+j+t) agrees with f(zhat+t), f its own t^0 value read as a
// function of z. order < 0: not defined (pole site or free data in the value).
struct Contact {
    int order = -1;
    bool lower_bound = false;  // agreement up to the computed depth only
};

// One concrete pole-order sample of a family. The series come from the shallow exact
// pass; orders and contacts from the deep pass over F_p.
struct PatternSample {
    int k = 1;           // order of the entry condition
    int pole_order = 0;  // order of the pole at zhat
    int pre_pole_order = 0;
    int post_pole_order = 0;
    LaurentSeries pre;   // w(zhat - 1 + t), empty at a pole
    LaurentSeries pole;  // 1/w(zhat + t)
    LaurentSeries post;  // w(zhat + 1 + t), empty at a pole
    Contact pre_contact;
    Contact post_contact;
    std::vector<FieldElem> assumptions;
};

struct PolePattern {
    int id = 0;
    EntryKind kind = EntryKind::h_root;
    Direction direction = Direction::forward;
    int entry_site = -1;          // offset of the entry condition relative to the pole
    std::string entry_condition;  // "w(zhat-1) = b(zhat-1)"
    int multiplier = 1;           // pole order = multiplier * k
    bool parametric = false;      // leading-order analysis valid for every k >= 1
    std::vector<std::string> parametric_conditions;
    std::vector<int> confirmed_orders;  // k values checked by the sweep
    FieldElem pre_value;
    FieldElem post_value;
    bool pre_finite = true;
    bool post_finite = true;
    int post_pole_order = 0;
    bool confined = false;
    std::vector<std::string> notes;  // genericity assumptions and merges
    std::vector<PatternSample> samples;

    std::string pole_order_text() const;  // "k", "2k" or a number
    std::string pre_text() const;
    std::string post_text() const;
};

struct EnumerationResult {
    std::vector<PolePattern> families;
    std::vector<std::string> failures;  // per-entry failures (unsupported factors, ...)
    std::vector<std::string> pruned;    // branches over the assumption limit
    int max_order = 3;
};

EnumerationResult enumerate_pole_patterns(const NormalizedEquation& eq, const SingularOptions& opt = {});

struct RiccatiCandidate {
    FieldElem a;
    FieldElem c;
    int source_family = 0;
    bool consistent = false;
};

enum class AdmissibilityVerdict { single_family_candidates, multi_family_obstruction, no_candidate };
std::string to_string(AdmissibilityVerdict v);

struct FamilyAssessment {
    int family = 0;
    bool template_match = false;
    std::string reason;  // why the family violates the template
};

struct AdmissibilityReport {
    std::vector<RiccatiCandidate> candidates;
    std::vector<FamilyAssessment> families;
    AdmissibilityVerdict verdict = AdmissibilityVerdict::no_candidate;
    std::string statement;

    bool obstructing(int family) const;
};

AdmissibilityReport riccati_admissibility(const std::vector<PolePattern>& patterns);

// Rewrites a value at the generic point as a function of z: zhat -> z and order-0 jets
// g(zhat+m) -> g(z+m). nullopt when fresh symbols or derivative jets remain.
std::optional<FieldElem> as_function_of_z(const FieldElem& x);

// Mirrors jet sites zhat+m -> zhat-m (time reversal of a triple value).
FieldElem reflect_sites(const FieldElem& x);

// Canonical value of a coefficient-field element at zhat + site (order-0 jets).
FieldElem value_at_site(const FieldElem& x, int site, ExpansionPolicy policy = ExpansionPolicy::jets);

}  // namespace dclunie
