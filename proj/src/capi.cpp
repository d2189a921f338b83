#include "dclunie/dclunie.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <json.hpp>

#include "dclunie/clunie.hpp"
#include "dclunie/eqparse.hpp"
#include "dclunie/nevanlinna.hpp"
#include "dclunie/orbit.hpp"
#include "dclunie/riccati.hpp"
#include "dclunie/singular.hpp"

#ifndef DCLUNIE_VERSION
#define DCLUNIE_VERSION "0.0.0"
#endif

using json = nlohmann::ordered_json;
using namespace dclunie;

struct dcl_session {
    SymbolTable symbols;
    std::string error;
};

struct dcl_equation {
    std::string text;
    SymbolTable symbols;
    NormalizedEquation eq;
};

namespace {

dcl_status guard(dcl_session* s, const std::function<void()>& body) {
    if (!s) return DCL_ERR_INTERNAL;
    try {
        body();
        s->error.clear();
        return DCL_OK;
    } catch (const ParseError& e) {
        s->error = std::string("parse error: ") + e.what();
        return DCL_ERR_PARSE;
    } catch (const NormalizeError& e) {
        s->error = std::string("normalize error: ") + e.what();
        return DCL_ERR_PARSE;
    } catch (const UnsupportedError& e) {
        s->error = std::string("unsupported: ") + e.what();
        return DCL_ERR_UNSUPPORTED;
    } catch (const ArithmeticError& e) {
        s->error = std::string("unsupported: ") + e.what();
        return DCL_ERR_UNSUPPORTED;
    } catch (const NumericError& e) {
        s->error = std::string("numeric error: ") + e.what();
        return DCL_ERR_NUMERIC;
    } catch (const std::invalid_argument& e) {
        s->error = std::string("invalid argument: ") + e.what();
        return DCL_ERR_PARSE;
    } catch (const std::exception& e) {
        s->error = std::string("internal error: ") + e.what();
        return DCL_ERR_INTERNAL;
    }
}

char* dup(const std::string& s) {
    char* p = static_cast<char*>(std::malloc(s.size() + 1));
    if (!p) throw std::bad_alloc();
    std::memcpy(p, s.c_str(), s.size() + 1);
    return p;
}

std::string fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

dcl_options options_or_default(const dcl_options* o) {
    dcl_options d;
    dcl_options_init(&d);
    if (o) d = *o;
    if (d.max_order < 1) throw std::invalid_argument("max-order must be at least 1");
    if (d.steps < 1) throw std::invalid_argument("steps must be at least 1");
    if (d.precision < 2) throw std::invalid_argument("precision must be at least 2 bits");
    if (!(d.tol > 0)) throw std::invalid_argument("tol must be positive");
    return d;
}

std::string symbols_text(const SymbolTable& t) {
    std::string s;
    for (const auto& e : t.entries()) s += symbol_header(e) + "\n";
    return s;
}

json header(const std::string& command, const std::string& hashed) {
    json j;
    j["schema"] = DCL_SCHEMA_VERSION;
    j["tool"] = "dclunie";
    j["version"] = DCLUNIE_VERSION;
    j["command"] = command;
    j["input_hash"] = fnv1a(command + '\0' + hashed);
    return j;
}

json warnings_json(const std::vector<Warning>& ws) {
    json a = json::array();
    for (const auto& w : ws) a.push_back({{"id", w.id}, {"message", w.message}});
    return a;
}

json check_json(const TheoremCheck& c) {
    return {{"applies", c.applies}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"inequality", c.inequality},
            {"borderline", c.borderline}};
}

json verdict_json(const TheoremVerdict& v) {
    const Invariants& i = v.invariants;
    json j;
    j["invariants"] = {{"deg_P", i.deg_P},  {"ord0_P", i.ord0_P}, {"kappa_P", i.kappa_P},
                       {"deg_H", i.deg_H},  {"deg_Q", i.deg_Q},   {"ord0_Q", i.ord0_Q},
                       {"d_w", i.d_w},      {"homogeneous_degree", i.homogeneous_degree}};
    j["pole_density"] = check_json(v.pole_density);
    j["proximity"] = check_json(v.proximity);
    json c = json::array();
    for (const auto& x : v.conclusions) c.push_back({{"tag", x.tag}, {"statement", x.statement}});
    j["conclusions"] = c;
    return j;
}

json families_json(const EnumerationResult& r) {
    json a = json::array();
    for (const auto& p : r.families) {
        json f;
        f["id"] = p.id;
        f["kind"] = to_string(p.kind);
        f["direction"] = to_string(p.direction);
        f["entry_condition"] = p.entry_condition;
        f["triple"] = {p.pre_text(), "inf^" + p.pole_order_text(), p.post_text()};
        f["pole_order"] = p.pole_order_text();
        f["parametric"] = p.parametric;
        f["parametric_conditions"] = p.parametric_conditions;
        f["confirmed_orders"] = p.confirmed_orders;
        f["confined"] = p.confined;
        f["notes"] = p.notes;
        json samples = json::array();
        for (const auto& s : p.samples) {
            samples.push_back({{"k", s.k},
                               {"pole_order", s.pole_order},
                               {"pre_pole_order", s.pre_pole_order},
                               {"post_pole_order", s.post_pole_order},
                               {"pre_contact", s.pre_contact.order},
                               {"post_contact", s.post_contact.order}});
        }
        f["samples"] = samples;
        a.push_back(f);
    }
    return a;
}

json admissibility_json(const AdmissibilityReport& a) {
    json j;
    j["verdict"] = to_string(a.verdict);
    j["statement"] = a.statement;
    json c = json::array();
    for (const auto& x : a.candidates)
        c.push_back({{"a", x.a.to_string()}, {"c", x.c.to_string()}, {"family", x.source_family},
                     {"consistent", x.consistent}});
    j["candidates"] = c;
    json f = json::array();
    for (const auto& x : a.families)
        f.push_back({{"family", x.family}, {"template_match", x.template_match}, {"reason", x.reason}});
    j["families"] = f;
    return j;
}

json enumeration_json(const NormalizedEquation& eq, int max_order) {
    SingularOptions so;
    so.max_order = max_order;
    EnumerationResult r = enumerate_pole_patterns(eq, so);
    json j;
    j["max_order"] = r.max_order;
    j["families"] = families_json(r);
    j["failures"] = r.failures;
    j["pruned"] = r.pruned;
    j["riccati"] = admissibility_json(riccati_admissibility(r.families));
    return j;
}

std::string opt_text(const dcl_options& o) {
    std::string s = "max_order=" + std::to_string(o.max_order) + ";tol=" + std::to_string(o.tol) +
                    ";precision=" + std::to_string(o.precision) + ";steps=" + std::to_string(o.steps) + ";radii=";
    for (std::size_t i = 0; i < o.n_radii; ++i) s += std::to_string(o.radii[i]) + ",";
    return s;
}

Rational parse_rational(const std::string& text) {
    FieldElem x = evaluate_expr(*parse_equation("w = " + text).rhs, {});
    if (!x.num().is_constant() || !x.den().is_constant())
        throw std::invalid_argument("'" + text + "' is not a rational number");
    return x.num().constant_value() / x.den().constant_value();
}

double num(long double x) {
    return static_cast<double>(x);
}

json curve_json(const CharacteristicCurve& c) {
    json a = json::array();
    for (const auto& p : c.points)
        a.push_back({{"r", num(p.r)},
                     {"r_used", num(p.r_used)},
                     {"m", num(p.m)},
                     {"N", num(p.N)},
                     {"T", num(p.T)},
                     {"nodes", p.nodes},
                     {"excluded_nodes", p.excluded},
                     {"quality", p.quality()}});
    return a;
}

json trend_json(const TrendReport& r) {
    json j;
    j["check"] = r.check;
    j["label"] = "trend check: desk-scale substitute for an asymptotic statement";
    j["criterion"] = r.criterion;
    j["pass"] = r.pass;
    j["excluded_radii"] = r.excluded;
    j["total_radii"] = r.total;
    j["excluded_fraction"] = r.total ? static_cast<double>(r.excluded) / r.total : 0.0;
    if (!r.note.empty()) j["note"] = r.note;
    json a = json::array();
    for (const auto& s : r.series) {
        json pts = json::array();
        for (std::size_t i = 0; i < s.radii.size(); ++i) {
            double v = num(s.values[i]);
            pts.push_back({{"r", num(s.radii[i])}, {"value", std::isfinite(v) ? json(v) : json("inf")},
                           {"excluded", static_cast<bool>(s.excluded[i])}});
        }
        a.push_back({{"label", s.label},
                     {"pass", s.pass},
                     {"decreasing_steps", s.decreasing},
                     {"steps", s.steps},
                     {"vacuous", s.vacuous},
                     {"within_tolerance", s.converged},
                     {"points", pts}});
    }
    j["series"] = a;
    return j;
}

std::vector<Warning> curve_warnings(const CharacteristicCurve& c) {
    std::vector<Warning> w;
    for (const auto& p : c.points) {
        if (p.nudged) w.push_back({"NV-1", "radius " + std::to_string(num(p.r)) + " lies on a zero/pole modulus; nudged by 1e-12"});
        if (!p.converged)
            w.push_back({"NV-2", "quadrature at r = " + std::to_string(num(p.r)) + " hit the node cap before converging"});
    }
    return w;
}

}  // namespace

extern "C" {

const char* dcl_version(void) {
    return DCLUNIE_VERSION;
}

void dcl_options_init(dcl_options* o) {
    if (!o) return;
    o->max_order = 3;
    o->tol = 1e-6;
    o->precision = 128;
    o->steps = 200;
    o->radii = nullptr;
    o->n_radii = 0;
}

void dcl_orbit_options_init(dcl_orbit_options* o) {
    if (!o) return;
    *o = dcl_orbit_options{};
}

void dcl_nevan_options_init(dcl_nevan_options* o) {
    if (!o) return;
    *o = dcl_nevan_options{};
    o->s = 1;
    o->delta = 0.5;
    o->rmax = 1024;
}

dcl_session* dcl_session_new(void) {
    try {
        return new dcl_session();
    } catch (...) {
        return nullptr;
    }
}

void dcl_session_free(dcl_session* s) {
    delete s;
}

const char* dcl_last_error(const dcl_session* s) {
    return s ? s->error.c_str() : "no session";
}

dcl_status dcl_declare_symbol(dcl_session* s, const char* spec) {
    return guard(s, [&] {
        if (!spec) throw std::invalid_argument("null symbol spec");
        s->symbols.declare_spec(spec);
    });
}

dcl_status dcl_equation_parse(dcl_session* s, const char* text, dcl_equation** out) {
    return guard(s, [&] {
        if (!text || !out) throw std::invalid_argument("null argument");
        *out = nullptr;
        auto e = std::make_unique<dcl_equation>();
        e->text = text;
        RawEquation raw = parse_equation(text, s->symbols);
        e->symbols = raw.symbols;
        e->eq = normalize(raw);
        *out = e.release();
    });
}

void dcl_equation_free(dcl_equation* e) {
    delete e;
}

dcl_status dcl_equation_canonical(dcl_session* s, const dcl_equation* e, char** out) {
    return guard(s, [&] {
        if (!e || !out) throw std::invalid_argument("null argument");
        *out = dup(print_canonical(e->eq));
    });
}

dcl_status dcl_analyze(dcl_session* s, const dcl_equation* e, const dcl_options* o, char** out) {
    return guard(s, [&] {
        if (!e || !out) throw std::invalid_argument("null argument");
        dcl_options op = options_or_default(o);
        std::string canon = print_canonical(e->eq);
        json j = header("analyze", canon + '\0' + "max_order=" + std::to_string(op.max_order));
        j["equation"] = canon;
        j["verdict"] = verdict_json(full_report(e->eq));
        j["singularities"] = enumeration_json(e->eq, op.max_order);
        j["warnings"] = warnings_json(e->eq.warnings);
        *out = dup(j.dump(2) + "\n");
    });
}

dcl_status dcl_singular(dcl_session* s, const dcl_equation* e, const dcl_options* o, char** out) {
    return guard(s, [&] {
        if (!e || !out) throw std::invalid_argument("null argument");
        dcl_options op = options_or_default(o);
        std::string canon = print_canonical(e->eq);
        json j = header("singular", canon + '\0' + "max_order=" + std::to_string(op.max_order));
        j["equation"] = canon;
        json en = enumeration_json(e->eq, op.max_order);
        for (auto it = en.begin(); it != en.end(); ++it) j[it.key()] = it.value();
        j["warnings"] = warnings_json(e->eq.warnings);
        *out = dup(j.dump(2) + "\n");
    });
}

dcl_status dcl_riccati(dcl_session* s, const dcl_equation* e, const dcl_options* o, char** out) {
    return guard(s, [&] {
        if (!e || !out) throw std::invalid_argument("null argument");
        dcl_options op = options_or_default(o);
        RiccatiEquation rq = riccati_from_text(e->text, e->symbols);
        json j = header("riccati", symbols_text(e->symbols) + rq.to_string() + '\0' + std::to_string(op.max_order));
        j["equation"] = rq.to_string();
        j["a"] = rq.a.to_string();
        j["b"] = rq.b.to_string();
        j["c"] = rq.c.to_string();
        j["discriminant"] = rq.discriminant().to_string();
        rq.require_nondegenerate();
        json ex = json::array();
        for (int k = 1; k <= op.max_order; ++k) {
            RiccatiExpansion x = local_expansion_check(rq, k);
            ex.push_back({{"k", k},
                          {"pre_value", x.pre_value.to_string()},
                          {"post_value", x.post_value.to_string()},
                          {"pre_gap", x.pre_gap},
                          {"post_gap", x.post_gap},
                          {"alpha", x.alpha.to_string()},
                          {"gamma", x.gamma.to_string()},
                          {"residual_zero", x.residual_zero},
                          {"template_match", x.template_match}});
        }
        j["expansions"] = ex;
        AuxiliaryG g = auxiliary_g(rq);
        j["auxiliary_g"] = {{"g", g.g.to_string()},
                            {"valuation_at_pole_of_w", g.valuation_at_pole_of_w},
                            {"valuation_at_pole_of_shift", g.valuation_at_pole_of_shift},
                            {"finite", g.finite()}};
        LinearPair lp = linearize(rq);
        j["linearization"] = {{"M", {{lp.M[0][0].to_string(), lp.M[0][1].to_string()},
                                     {lp.M[1][0].to_string(), lp.M[1][1].to_string()}}},
                              {"det", lp.det.to_string()}};
        *out = dup(j.dump(2) + "\n");
    });
}

dcl_status dcl_orbit(dcl_session* s, const dcl_equation* e, const dcl_options* o, const dcl_orbit_options* oo,
                     char** out, char** csv) {
    return guard(s, [&] {
        if (!e || !out) throw std::invalid_argument("null argument");
        dcl_options op = options_or_default(o);
        dcl_orbit_options orb;
        dcl_orbit_options_init(&orb);
        if (oo) orb = *oo;
        int prec = op.precision;
        std::uint64_t seed = experiment_seed();

        NumericBindings bind;
        json bj = json::object();
        for (std::size_t i = 0; i < orb.n_bindings; ++i) {
            std::string b = orb.bindings[i];
            auto eqpos = b.find('=');
            if (eqpos == std::string::npos) throw std::invalid_argument("binding '" + b + "' is not name=value");
            std::string name = b.substr(0, eqpos);
            if (!e->symbols.find(name)) throw std::invalid_argument("binding for undeclared symbol '" + name + "'");
            bind[name] = parse_complex(b.substr(eqpos + 1), prec);
        }
        int idx = 16;
        for (const auto& en : e->symbols.entries()) {
            if (!bind.count(en.name)) bind.emplace(en.name, sample_point(seed, idx, prec));
            ++idx;
        }
        for (const auto& [k, v] : bind) bj[k] = v.to_string();

        Complex z0 = orb.z0 ? parse_complex(orb.z0, prec) : Complex::from_rationals(Rational(1, 3), 0, prec);
        OrbitOptions opt;
        opt.steps = op.steps;
        opt.precision = prec;
        Orbit orbit;
        std::vector<PolePattern> patterns;
        json seeds;
        std::string hashed = e->text + '\0' + opt_text(op) + "seed=" + std::to_string(seed);
        if (orb.riccati) {
            RiccatiEquation rq = riccati_from_text(e->text, e->symbols);
            rq.require_nondegenerate();
            Complex w0 = orb.w0 ? parse_complex(orb.w0, prec) : evaluate_numeric(rq.c, z0, bind, prec);
            seeds["w0"] = w0.to_string();
            orbit = iterate(rq, bind, w0, z0, opt);
            patterns.push_back(riccati_template(rq));
        } else {
            Complex w0 = orb.w0 ? parse_complex(orb.w0, prec) : sample_point(seed, 0, prec);
            Complex w1 = orb.w1 ? parse_complex(orb.w1, prec) : sample_point(seed, 1, prec);
            seeds["w0"] = w0.to_string();
            seeds["w1"] = w1.to_string();
            orbit = iterate(e->eq, bind, w0, w1, z0, opt);
            SingularOptions so;
            so.max_order = op.max_order;
            patterns = enumerate_pole_patterns(e->eq, so).families;
        }
        for (auto it = seeds.begin(); it != seeds.end(); ++it) hashed += it.key() + "=" + it.value().get<std::string>();
        for (const auto& [k, v] : bj.items()) hashed += k + "=" + v.get<std::string>();
        std::vector<PoleEvent> events = classify_poles(orbit, patterns, bind, op.tol);
        OrbitSummary sum = summarize(events);

        json j = header("orbit", hashed);
        j["equation"] = orbit.provenance;
        j["mode"] = orb.riccati ? "riccati" : "second-order";
        j["seed"] = seed;
        j["z0"] = z0.to_string();
        j["seeds"] = seeds;
        j["bindings"] = bj;
        j["steps"] = opt.steps;
        j["precision"] = prec;
        j["tolerance"] = op.tol;
        json pj = json::array();
        for (const auto& p : patterns)
            pj.push_back({{"id", p.id}, {"triple", {p.pre_text(), "inf^" + p.pole_order_text(), p.post_text()}}});
        j["families"] = pj;
        json ev = json::array();
        for (const auto& x : events) {
            json v = {{"n", x.n},
                      {"order", x.order},
                      {"order_estimate", x.order_estimate},
                      {"pre", x.pre_pole ? "inf" : x.pre.to_string(20)},
                      {"post", x.post_pole ? "inf" : x.post.to_string(20)},
                      {"family", x.family},
                      {"residual", std::isfinite(x.residual) ? json(x.residual) : json("inf")}};
            if (!x.note.empty()) v["note"] = x.note;
            ev.push_back(v);
        }
        j["events"] = ev;
        j["summary"] = {{"verdict", to_string(sum.verdict)},
                        {"statement", sum.statement},
                        {"families", sum.families},
                        {"events", sum.events},
                        {"unclassified", sum.unclassified}};
        j["warnings"] = warnings_json(orbit.warnings);
        *out = dup(j.dump(2) + "\n");
        if (csv) *csv = dup(orbit_csv(orbit, events));
    });
}

dcl_status dcl_nevan(dcl_session* s, const char* function, const dcl_options* o, const dcl_nevan_options* no,
                     char** out, char** csv) {
    return guard(s, [&] {
        if (!function || !out) throw std::invalid_argument("null argument");
        dcl_options op = options_or_default(o);
        dcl_nevan_options nv;
        dcl_nevan_options_init(&nv);
        if (no) nv = *no;
        std::string check = nv.check ? nv.check : "curve";
        std::vector<long double> radii;
        for (std::size_t i = 0; i < op.n_radii; ++i) radii.push_back(op.radii[i]);
        if (radii.empty())
            for (long double r = 8; r <= nv.rmax; r *= 2) radii.push_back(r);
        if (radii.empty()) throw std::invalid_argument("no radii: rmax must be at least 8");
        for (long double r : radii)
            if (!(r >= 1)) throw std::invalid_argument("radii must be at least 1");

        DivisorFunction f = parse_divisor_function(function);
        std::string hashed = std::string(function) + '\0' + check + '\0' + opt_text(op) +
                             (nv.shift ? nv.shift : "1") + '\0' + std::to_string(nv.s) + '\0' +
                             std::to_string(nv.delta) + '\0' + (nv.R ? nv.R : "") + '\0' + std::to_string(nv.rmax);
        json j = header("nevan", hashed);
        j["function"] = function;
        j["factors"] = f.to_string();
        j["check"] = check;
        CharacteristicCurve curve;
        if (check == "curve") {
            curve = characteristic_curve(f, radii);
        } else if (check == "order") {
            OrderEstimate est = order_estimate(f, nv.rmax);
            curve = est.curve;
            json used = json::array();
            for (long double r : est.radii) used.push_back(num(r));
            j["order"] = {{"estimate", est.order}, {"std_error", est.std_error}, {"ci_low", est.ci_low},
                          {"ci_high", est.ci_high}, {"fit_radii", used}};
        } else if (check == "logdiff") {
            Rational c = parse_rational(nv.shift ? nv.shift : "1");
            j["shift"] = rational_to_string(c);
            curve = characteristic_curve(f, radii);
            j["trend"] = trend_json(check_logdiff_lemma(f, c, radii));
        } else if (check == "technical") {
            curve = technical_lemma_curve(f, radii, nv.s);
            j["s"] = nv.s;
            j["delta"] = nv.delta;
            j["trend"] = trend_json(check_technical_lemma(curve, nv.s, nv.delta));
        } else if (check == "valiron") {
            if (!f.is_rational()) throw UnsupportedError("Valiron-Mohon'ko check needs a rational function f");
            if (!nv.R) throw std::invalid_argument("valiron check needs R");
            RawEquation raw = parse_equation("w = " + std::string(function));
            FieldElem fz = evaluate_expr(*raw.rhs, raw.symbols);
            RawEquation rr = parse_equation(std::string("w(z+1) = ") + nv.R);
            FieldElem n(1), d(1);
            if (rr.rhs->kind == Expr::Kind::div) {
                n = evaluate_expr(*rr.rhs->lhs, rr.symbols);
                d = evaluate_expr(*rr.rhs->rhs, rr.symbols);
            } else {
                n = evaluate_expr(*rr.rhs, rr.symbols);
            }
            Poly qn = n.num() * d.den();
            Poly qd = n.den() * d.num();
            j["R"] = nv.R;
            curve = characteristic_curve(f, radii);
            j["trend"] = trend_json(check_valiron_mohonko(fz, qn, qd, w_atom(Shift()), radii));
        } else {
            throw std::invalid_argument("unknown check '" + check + "'");
        }
        j["curve"] = curve_json(curve);
        j["warnings"] = warnings_json(curve_warnings(curve));
        *out = dup(j.dump(2) + "\n");
        if (csv) *csv = dup(curve_csv(curve));
    });
}

void dcl_string_free(char* p) {
    std::free(p);
}

}  // extern "C"
