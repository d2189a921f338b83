#include <doctest.h>

#include "properties.hpp"

using namespace dcltest;

TEST_CASE("field axioms and shift action, 500 random cases") {
    SuiteResult r = field_suite(0x5eed0001);
    INFO(r.first_failure);
    CHECK(r.total == 500);
    CHECK(r.ok());
}

TEST_CASE("gcd and resultant recover planted factors, 200 cases") {
    SuiteResult r = gcd_suite(0x5eed0002);
    INFO(r.first_failure);
    CHECK(r.total == 200);
    CHECK(r.ok());
}

TEST_CASE("canonical text is a parse/print fixed point, 100 equations") {
    SuiteResult r = roundtrip_suite(0x5eed0003);
    INFO(r.first_failure);
    CHECK(r.total == 100);
    CHECK(r.ok());
}

TEST_CASE("truncated Laurent ring axioms and division, 200 cases") {
    SuiteResult r = laurent_suite(0x5eed0004);
    INFO(r.first_failure);
    CHECK(r.total == 200);
    CHECK(r.ok());
}

TEST_CASE("suites are deterministic in the seed") {
    CHECK(field_suite(7, 20).passed == field_suite(7, 20).passed);
    dcltest::Gen a(11), b(11);
    for (int i = 0; i < 10; ++i) CHECK(a.equation_text() == b.equation_text());
}
