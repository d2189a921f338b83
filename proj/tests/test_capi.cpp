#include <doctest.h>
#include <json.hpp>

#include <string>

#include "dclunie/dclunie.h"

using nlohmann::json;

namespace {

struct Session {
    dcl_session* s = dcl_session_new();
    ~Session() { dcl_session_free(s); }
};

struct Text {
    char* p = nullptr;
    ~Text() { dcl_string_free(p); }
    std::string str() const { return p ? p : ""; }
};

const char* kDPIV = "w(z+1)*w(z-1) + w(z+1)*w + w*w(z-1) = (a3*w^3 + a2*w^2 + a1*w + a0)/((w-b)*(w-c))";

dcl_equation* parse(Session& s, const char* text) {
    dcl_equation* e = nullptr;
    REQUIRE(dcl_equation_parse(s.s, text, &e) == DCL_OK);
    return e;
}

}  // namespace

TEST_CASE("version and defaults") {
    CHECK(std::string(dcl_version()).size() > 0);
    dcl_options o;
    dcl_options_init(&o);
    CHECK(o.max_order == 3);
    CHECK(o.precision == 128);
    CHECK(o.steps == 200);
    CHECK(o.radii == nullptr);
}

TEST_CASE("status codes") {
    Session s;
    dcl_equation* e = nullptr;
    CHECK(dcl_equation_parse(s.s, "w(z+1) = (w + ", &e) == DCL_ERR_PARSE);
    CHECK(e == nullptr);
    CHECK(std::string(dcl_last_error(s.s)).find("column") != std::string::npos);
    CHECK(dcl_equation_parse(s.s, nullptr, &e) == DCL_ERR_PARSE);
    CHECK(dcl_declare_symbol(s.s, "g:period=2") == DCL_OK);
    CHECK(std::string(dcl_last_error(s.s)).empty());
    CHECK(dcl_declare_symbol(s.s, "g") == DCL_ERR_PARSE);

    dcl_equation* d = parse(s, "w(z+1) = w/w");
    Text out;
    CHECK(dcl_riccati(s.s, d, nullptr, &out.p) == DCL_ERR_UNSUPPORTED);
    dcl_equation_free(d);

    dcl_equation* two = parse(s, "w(z+2) + w(z-2) = 1/w");
    Text o2;
    CHECK(dcl_singular(s.s, two, nullptr, &o2.p) == DCL_ERR_UNSUPPORTED);
    dcl_equation_free(two);

    // a c + b = z - 1 vanishes at z0 = 1 and w0 = c: the first step is 0/0
    dcl_equation* inv = parse(s, "w(z+1) = (z*w - 1)/(w - 1)");
    dcl_orbit_options oo;
    dcl_orbit_options_init(&oo);
    oo.riccati = 1;
    oo.z0 = "1";
    oo.w0 = "1";
    dcl_options op;
    dcl_options_init(&op);
    op.steps = 3;
    Text o3;
    CHECK(dcl_orbit(s.s, inv, &op, &oo, &o3.p, nullptr) == DCL_ERR_NUMERIC);
    CHECK(std::string(dcl_last_error(s.s)).find("at n = 1") != std::string::npos);
    dcl_equation_free(inv);

    Text o4;
    CHECK(dcl_nevan(s.s, "sin(z)", nullptr, nullptr, &o4.p, nullptr) == DCL_ERR_PARSE);
}

TEST_CASE("analyze report") {
    Session s;
    for (const char* n : {"a0", "a1", "a2", "a3", "b", "c"}) REQUIRE(dcl_declare_symbol(s.s, n) == DCL_OK);
    dcl_equation* e = parse(s, kDPIV);
    Text canon, out, again;
    REQUIRE(dcl_equation_canonical(s.s, e, &canon.p) == DCL_OK);
    CHECK(canon.str().find("#symbol a3") != std::string::npos);
    REQUIRE(dcl_analyze(s.s, e, nullptr, &out.p) == DCL_OK);
    REQUIRE(dcl_analyze(s.s, e, nullptr, &again.p) == DCL_OK);
    CHECK(out.str() == again.str());
    json j = json::parse(out.str());
    CHECK(j["schema"] == DCL_SCHEMA_VERSION);
    CHECK(j["command"] == "analyze");
    CHECK(j["verdict"]["invariants"]["kappa_P"] == 2);
    CHECK(j["verdict"]["invariants"]["d_w"] == 4);
    CHECK(j["verdict"]["pole_density"]["applies"] == true);
    CHECK(j["singularities"]["families"].size() == 5);
    dcl_equation_free(e);
}

TEST_CASE("riccati report") {
    Session s;
    dcl_equation* e = parse(s, "w(z+1) = (z*w + 1)/(w - (2*z + 1))");
    dcl_options o;
    dcl_options_init(&o);
    o.max_order = 2;
    Text out;
    REQUIRE(dcl_riccati(s.s, e, &o, &out.p) == DCL_OK);
    json j = json::parse(out.str());
    CHECK(j["a"] == "z");
    CHECK(j["expansions"].size() == 2);
    dcl_equation_free(e);
}

TEST_CASE("orbit report and csv") {
    Session s;
    dcl_equation* e = parse(s, "w(z+1) = (z*w + 1)/(w - (2*z + 1))");
    dcl_orbit_options oo;
    dcl_orbit_options_init(&oo);
    oo.riccati = 1;
    dcl_options o;
    dcl_options_init(&o);
    o.steps = 30;
    Text js, csv, js2;
    REQUIRE(dcl_orbit(s.s, e, &o, &oo, &js.p, &csv.p) == DCL_OK);
    REQUIRE(dcl_orbit(s.s, e, &o, &oo, &js2.p, nullptr) == DCL_OK);
    CHECK(js.str() == js2.str());
    CHECK(csv.str().rfind("n,Re(z),Im(z),Re(w),Im(w),is_pole,family_id\n", 0) == 0);
    json j = json::parse(js.str());
    CHECK(j["mode"] == "riccati");
    REQUIRE(j["events"].size() >= 1);
    for (const auto& ev : j["events"]) CHECK(ev["family"] == 1);
    dcl_equation_free(e);
}

TEST_CASE("nevan report") {
    Session s;
    double radii[] = {10, 100, 1000};
    dcl_options o;
    dcl_options_init(&o);
    o.radii = radii;
    o.n_radii = 3;
    Text js, csv;
    REQUIRE(dcl_nevan(s.s, "(z^2+1)/(z-1)", &o, nullptr, &js.p, &csv.p) == DCL_OK);
    CHECK(csv.str().rfind("r,m,N,T,quality\n", 0) == 0);
    json j = json::parse(js.str());
    CHECK(j["check"] == "curve");

    dcl_nevan_options nv;
    dcl_nevan_options_init(&nv);
    nv.check = "valiron";
    nv.R = "(w^2-1)/(w-1)";
    Text bad;
    CHECK(dcl_nevan(s.s, "z", &o, &nv, &bad.p, nullptr) == DCL_ERR_UNSUPPORTED);
    nv.R = "w^2";
    Text good;
    REQUIRE(dcl_nevan(s.s, "z", &o, &nv, &good.p, nullptr) == DCL_OK);
    CHECK(json::parse(good.str())["trend"]["pass"] == true);
}
