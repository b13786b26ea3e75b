#include "gso/algebra.hpp"
#include "gso/error.hpp"
#include "gso/scenario.hpp"

#include <doctest.h>

#include <cmath>
#include <string>

using namespace gso;

namespace {
const std::string kDir = GSO_SCENARIO_DIR;
}

TEST_CASE("minimal stationary document") {
    const Scenario s = load_scenario(R"({"m": "1", "omega": "1", "b": "0", "c": 2})", true);
    CHECK(s.mass(3.0) == 1.0);
    CHECK(s.freq(3.0) == 1.0);
    CHECK(s.squeeze(3.0) == 0.0);
    CHECK(s.g(0.0) == 1.0);
    CHECK(kappa_from_c(s.c).kappa == doctest::Approx(1.25).epsilon(1e-15));
    // b defaults to zero, numbers accepted for expressions
    const Scenario t = load_scenario(R"({"m": 1, "omega": 2, "c": 0})");
    CHECK(t.freq(0.0) == 2.0);
    CHECK(t.squeeze(1.0) == 0.0);
}

TEST_CASE("validation gates") {
    CHECK_THROWS_WITH_AS(load_scenario(R"({"m": "1", "omega": "1", "c": -0.5})"), doctest::Contains("collapse"),
                         ValidationError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"m": "1", "omega": "1", "b": "0.1", "c": 2})"),
                         doctest::Contains("canonical start requires b"), ValidationError);
    CHECK_NOTHROW(load_scenario(R"({"m": "1", "omega": "1", "b": "0.1", "c": 2, "canonical_start": false})"));
    CHECK_THROWS_WITH_AS(load_scenario(R"({"m": "1 - 0.2*t", "omega": "1", "c": 2})"),
                         doctest::Contains("mass must stay positive"), ValidationError);
    CHECK_THROWS_WITH_AS(load_scenario(R"({"m": "1", "omega": "1", "c": 2, "extra": 1})", true),
                         doctest::Contains("unknown key"), ValidationError);
    CHECK_NOTHROW(load_scenario(R"({"m": "1", "omega": "1", "c": 2, "extra": 1})", false));
    CHECK_THROWS_AS(load_scenario(R"({"m": "1", "c": 2})"), ValidationError);
    CHECK_THROWS_AS(load_scenario(R"({"omega": "1", "c": 2})"), ValidationError);
    CHECK_THROWS_AS(load_scenario(R"({"m": "1", "omega": "1"})"), ValidationError);
    CHECK_THROWS_AS(load_scenario(R"({"m": "1", "omega": "1+", "c": 2})"), SyntaxError);
    CHECK_THROWS_AS(load_scenario(R"({"m": "1", "omega": "1", "c": 2)"), ValidationError);
    CHECK_THROWS_AS(load_scenario(R"({"m": "1", "omega": "1", "c": 2, "grid": {"npoints": 3}})"), ValidationError);
}

TEST_CASE("tabulated mass is a natural cubic spline") {
    const Scenario s = load_scenario(R"({"m_table": {"t": [0, 1, 2, 3], "m": [1, 2, 1, 2]},
                                         "omega": "1", "c": 0, "t1": 3, "canonical_start": false})");
    CHECK(s.mass(1.0) == doctest::Approx(2.0));
    CHECK(s.mass(2.0) == doctest::Approx(1.0));
    // natural end conditions
    CHECK(std::abs(s.mass_ddot(0.0)) <= 1e-12);
    CHECK(std::abs(s.mass_ddot(3.0)) <= 1e-12);
    // continuity of the first derivative across a knot
    CHECK(s.mass_dot(1.0 - 1e-9) == doctest::Approx(s.mass_dot(1.0 + 1e-9)).epsilon(1e-6));
}

TEST_CASE("reference scenario files load strictly") {
    for (const char* name : {"stationary", "omega_ramp", "omega_sinusoidal", "b_pulse", "m_table", "mass_modulated"}) {
        CAPTURE(name);
        const Scenario s = load_scenario_file(kDir + "/" + name + ".json", true);
        CHECK(s.t1 == 10.0);
    }
    CHECK_THROWS_AS(load_scenario_file(kDir + "/does_not_exist.json"), ValidationError);
}

TEST_CASE("scenario hash is deterministic and content sensitive") {
    const Scenario a = load_scenario(R"({"m": "1", "omega": "1", "c": 2})");
    const Scenario b = load_scenario(R"({"c": 2, "omega": "1", "m": "1"})");
    const Scenario c = load_scenario(R"({"m": "1", "omega": "1", "c": 2.5})");
    CHECK(scenario_hash(a) == scenario_hash(b));
    CHECK(scenario_hash(a) != scenario_hash(c));
    CHECK(scenario_hash(a).size() == 16);
}
