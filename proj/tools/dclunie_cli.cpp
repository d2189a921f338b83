// dclunie command line front end; talks to the library through the C API only.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "dclunie/dclunie.h"

namespace {

const char* kDefaultRiccati = "w(z+1) = (z*w + 1)/(w - (2*z + 1))";

struct Owned {
    char* p = nullptr;
    ~Owned() { dcl_string_free(p); }
};

struct Common {
    std::string input;  // file, "-" for stdin
    std::string equation;
    std::vector<std::string> symbols;
    int max_order = 3;
    double tol = 1e-6;
    int precision = 128;
    int steps = 200;
    std::vector<double> radii;
    std::string format = "json";
};

std::string read_input(const Common& c) {
    if (!c.equation.empty()) return c.equation;
    if (c.input.empty() || c.input == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream f(c.input);
    if (!f) throw CLI::ValidationError("input", "cannot open '" + c.input + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int fail(dcl_session* s, dcl_status st) {
    std::cerr << "dclunie: " << dcl_last_error(s) << "\n";
    return static_cast<int>(st);
}

dcl_options to_options(const Common& c) {
    dcl_options o;
    dcl_options_init(&o);
    o.max_order = c.max_order;
    o.tol = c.tol;
    o.precision = c.precision;
    o.steps = c.steps;
    o.radii = c.radii.empty() ? nullptr : c.radii.data();
    o.n_radii = c.radii.size();
    return o;
}

void add_common(CLI::App* app, Common& c, bool takes_equation) {
    if (takes_equation) {
        app->add_option("input", c.input, "equation file, '-' or empty for stdin");
        app->add_option("-e,--equation", c.equation, "equation text instead of a file");
        app->add_option("--symbol", c.symbols, "declare a symbol: name[:period=k][:constant]")->take_all();
    }
    app->add_option("--max-order", c.max_order, "largest pole order k")->check(CLI::Range(1, 12));
    app->add_option("--tol", c.tol, "classification tolerance")->check(CLI::PositiveNumber);
    app->add_option("--precision", c.precision, "working precision in bits")->check(CLI::Range(2, 100000));
    app->add_option("--steps", c.steps, "orbit steps")->check(CLI::Range(1, 10000000));
    app->add_option("--radii", c.radii, "radii r1,r2,...")->delimiter(',');
    app->add_option("--format", c.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"dclunie: Clunie-type pole density, singularity patterns and Riccati admissibility for "
                 "complex difference equations"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(dcl_version()));

    Common analyze, singular, riccati, orbit, nevan;
    auto* a = app.add_subcommand("analyze", "invariants, theorem verdicts, pole families and Riccati verdict");
    add_common(a, analyze, true);
    auto* s = app.add_subcommand("singular", "pole pattern families by Laurent propagation");
    add_common(s, singular, true);
    auto* r = app.add_subcommand("riccati", "local expansion, auxiliary g and linearization of a Riccati equation");
    add_common(r, riccati, true);
    auto* o = app.add_subcommand("orbit", "numeric orbit with pole classification");
    add_common(o, orbit, true);
    bool use_riccati = false;
    std::string z0, w0, w1;
    std::vector<std::string> bindings;
    o->add_flag("--riccati", use_riccati, "iterate as a Riccati equation (default equation when none is given)");
    o->add_option("--z0", z0, "starting point, e.g. 1/3 or 0.5+2i");
    o->add_option("--w0", w0, "seed w(z0)");
    o->add_option("--w1", w1, "seed w(z0+1), second-order equations");
    o->add_option("--bind", bindings, "numeric symbol value name=value")->take_all();
    auto* n = app.add_subcommand("nevan", "Nevanlinna functions of a divisor-explicit test function");
    add_common(n, nevan, false);
    std::string function, check = "curve", shift = "1", R;
    double step = 1, delta = 0.5, rmax = 1024;
    n->add_option("--function", function, "e.g. gamma(z), (z^2+1)/(z-1), exp(z)")->required();
    n->add_option("--check", check, "curve, order, logdiff, technical or valiron")
        ->check(CLI::IsMember({"curve", "order", "logdiff", "technical", "valiron"}));
    n->add_option("--shift", shift, "logdiff shift c");
    n->add_option("--s", step, "technical lemma step s");
    n->add_option("--delta", delta, "technical lemma exponent");
    n->add_option("--R", R, "valiron: rational function of w");
    n->add_option("--rmax", rmax, "largest radius 2^j for the default radii and the order fit")->check(CLI::Range(8.0, 1e7));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return DCL_ERR_PARSE;
    }

    std::unique_ptr<dcl_session, void (*)(dcl_session*)> session(dcl_session_new(), dcl_session_free);
    if (!session) return DCL_ERR_INTERNAL;
    dcl_session* ses = session.get();

    try {
        Common* c = a->parsed() ? &analyze : s->parsed() ? &singular : r->parsed() ? &riccati : o->parsed() ? &orbit : &nevan;
        dcl_options opt = to_options(*c);
        Owned json, csv;
        dcl_status st = DCL_OK;

        if (n->parsed()) {
            dcl_nevan_options nv;
            dcl_nevan_options_init(&nv);
            nv.check = check.c_str();
            nv.shift = shift.c_str();
            nv.s = step;
            nv.delta = delta;
            nv.R = R.empty() ? nullptr : R.c_str();
            nv.rmax = rmax;
            st = dcl_nevan(ses, function.c_str(), &opt, &nv, &json.p, &csv.p);
        } else {
            if (c->format == "csv" && !o->parsed()) {
                std::cerr << "dclunie: --format csv is only available for orbit and nevan\n";
                return DCL_ERR_PARSE;
            }
            for (const auto& sym : c->symbols)
                if ((st = dcl_declare_symbol(ses, sym.c_str())) != DCL_OK) return fail(ses, st);
            std::string text;
            if (o->parsed() && use_riccati && c->equation.empty() && c->input.empty()) text = kDefaultRiccati;
            else text = read_input(*c);
            dcl_equation* eq = nullptr;
            if ((st = dcl_equation_parse(ses, text.c_str(), &eq)) != DCL_OK) return fail(ses, st);
            std::unique_ptr<dcl_equation, void (*)(dcl_equation*)> eq_owner(eq, dcl_equation_free);
            if (a->parsed()) {
                st = dcl_analyze(ses, eq, &opt, &json.p);
            } else if (s->parsed()) {
                st = dcl_singular(ses, eq, &opt, &json.p);
            } else if (r->parsed()) {
                st = dcl_riccati(ses, eq, &opt, &json.p);
            } else {
                dcl_orbit_options oo;
                dcl_orbit_options_init(&oo);
                oo.riccati = use_riccati ? 1 : 0;
                oo.z0 = z0.empty() ? nullptr : z0.c_str();
                oo.w0 = w0.empty() ? nullptr : w0.c_str();
                oo.w1 = w1.empty() ? nullptr : w1.c_str();
                std::vector<const char*> bp;
                for (const auto& b : bindings) bp.push_back(b.c_str());
                oo.bindings = bp.data();
                oo.n_bindings = bp.size();
                st = dcl_orbit(ses, eq, &opt, &oo, &json.p, &csv.p);
            }
        }
        if (st != DCL_OK) return fail(ses, st);
        const char* out = c->format == "csv" ? csv.p : json.p;
        std::fputs(out, stdout);
        return std::fflush(stdout) == 0 ? 0 : DCL_ERR_INTERNAL;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "dclunie: " << e.what() << "\n";
        return DCL_ERR_PARSE;
    } catch (const std::exception& e) {
        std::cerr << "dclunie: internal error: " << e.what() << "\n";
        return DCL_ERR_INTERNAL;
    }
}
