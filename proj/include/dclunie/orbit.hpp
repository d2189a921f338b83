#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dclunie/eqparse.hpp"
#include "dclunie/mpcomplex.hpp"
#include "dclunie/riccati.hpp"
#include "dclunie/singular.hpp"

namespace dclunie {

// Numeric values for declared symbols; opaque function symbols are bound to constants.
using NumericBindings = std::map<std::string, Complex>;

// "1.5", "1/3", "-2i", "0.5+3i", "1e-3-2.5e1i"
Complex parse_complex(const std::string& text, int precision);

struct OrbitOptions {
    int steps = 200;
    int precision = 128;          // bits
    double pole_threshold = 1e8;  // |w| above this is a pole candidate
    double refine_step = 1e-3;    // local parameter spacing for order estimates
};

// w = p/q; q = 0 is the point at infinity. (p, q) is scaled so max(|p|, |q|) = 1.
struct OrbitPoint {
    int n = 0;
    Complex z;
    Complex p;
    Complex q;
    bool pole = false;
    int order = 0;              // rounded order estimate at a pole
    double order_estimate = 0;  // least-squares slope of log|w| against log|t|

    bool infinite() const { return q.is_zero(); }
    Complex value() const { return p / q; }  // NumericError at infinity
};

struct Orbit {
    Complex z0;
    int steps = 0;
    int precision = 128;
    std::string provenance;
    std::vector<OrbitPoint> points;  // n = 0..steps
    std::vector<Warning> warnings;  // OR-1 low precision, OR-2 refinement failed, OR-3 order estimate
};

// Second-order equation through its top-shift solution; seeds are w(z0) and w(z0+1).
Orbit iterate(const NormalizedEquation& eq, const NumericBindings& bind, const Complex& w0, const Complex& w1,
              const Complex& z0, const OrbitOptions& opt = {});
// Riccati equation through its linearization; seed w(z0).
Orbit iterate(const RiccatiEquation& rq, const NumericBindings& bind, const Complex& w0, const Complex& z0,
              const OrbitOptions& opt = {});

// Numeric value of a coefficient at z: zhat -> z, symbols and jets -> bound constants.
Complex evaluate_numeric(const FieldElem& x, const Complex& z, const NumericBindings& bind, int precision);

// Family (c(zhat-1), inf^k, a(zhat)) of a Riccati equation.
PolePattern riccati_template(const RiccatiEquation& rq);

struct PoleEvent {
    int n = 0;
    int order = 0;
    double order_estimate = 0;
    bool pre_pole = false;
    bool post_pole = false;
    Complex pre;
    Complex post;
    int family = 0;  // 0: unclassified
    double residual = 0;
    std::string note;
};

std::vector<PoleEvent> classify_poles(const Orbit& orbit, const std::vector<PolePattern>& patterns,
                                      const NumericBindings& bind, double tol);

struct OrbitSummary {
    std::set<int> families;
    int events = 0;
    int unclassified = 0;
    AdmissibilityVerdict verdict = AdmissibilityVerdict::no_candidate;
    std::string statement;
};

OrbitSummary summarize(const std::vector<PoleEvent>& events);

// Columns n, Re(z), Im(z), Re(w), Im(w), is_pole, family_id.
std::string orbit_csv(const Orbit& orbit, const std::vector<PoleEvent>& events, int digits = 20);

// Experiment seed: DELTA_CLUNIE_SEED when set, else 0.
std::uint64_t experiment_seed();
// Deterministic pseudo-random point with real and imaginary parts in [-1, 1).
Complex sample_point(std::uint64_t seed, int index, int precision);

}  // namespace dclunie
