#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "support/sample_building.hpp"
#include "vesim/csv.hpp"
#include "vesim/errors.hpp"
#include "vesim/rng.hpp"
#include "vesim/svg.hpp"
#include "vesim/units.hpp"

using namespace vesim;
namespace ex = sample::expected;

TEST_CASE("fahrenheit to kelvin conversions hit the frozen values") {
    CHECK(Temperature::from_fahrenheit(55.0).kelvin() == doctest::Approx(ex::kTsaK).epsilon(1e-15));
    CHECK(Temperature::from_fahrenheit(70.0).kelvin() == doctest::Approx(ex::kTlK).epsilon(1e-15));
    CHECK(Temperature::from_fahrenheit(72.0).kelvin() == doctest::Approx(ex::kTbK).epsilon(1e-15));
    CHECK(Temperature::from_fahrenheit(74.0).kelvin() == doctest::Approx(ex::kThK).epsilon(1e-15));
    CHECK(Temperature::from_fahrenheit(80.0).kelvin() == doctest::Approx(ex::kToaK).epsilon(1e-15));
    CHECK(Temperature::from_celsius(0.0).kelvin() == 273.15);
    CHECK(Temperature::from_fahrenheit(32.0).celsius() == doctest::Approx(0.0));
}

TEST_CASE("temperature conversions round-trip") {
    for (double f : {-40.0, 0.0, 55.0, 72.0, 80.0, 120.0}) {
        const Temperature t = Temperature::from_fahrenheit(f);
        CHECK(t.fahrenheit() == doctest::Approx(f).epsilon(1e-13));
        CHECK(Temperature::from_kelvin(t.kelvin()).celsius() ==
              doctest::Approx(t.celsius()).epsilon(1e-13));
    }
    CHECK(Temperature::from_fahrenheit(-40.0).celsius() == doctest::Approx(-40.0));
}

TEST_CASE("temperature constructors reject junk") {
    CHECK_THROWS_AS(Temperature::from_kelvin(-1.0), ModelError);
    CHECK_THROWS_AS(Temperature::from_kelvin(std::numeric_limits<double>::quiet_NaN()), ModelError);
    CHECK_THROWS_AS(Temperature::from_celsius(std::numeric_limits<double>::infinity()), ModelError);
    CHECK_THROWS_AS(Temperature::from_fahrenheit(-1000.0), ModelError);
}

TEST_CASE("temperature-difference conversion is exact for definitional ratios") {
    CHECK(delta_f_to_delta_k(0.0) == 0.0);
    CHECK(delta_f_to_delta_k(9.0) == 5.0);  // bit-exact: multiply happens first
    CHECK(delta_f_to_delta_k(17.0) == ex::kDelta17F);
    CHECK(delta_k_to_delta_f(5.0) == 9.0);
    CHECK(delta_k_to_delta_f(delta_f_to_delta_k(17.0)) == doctest::Approx(17.0).epsilon(1e-15));
}

TEST_CASE("state of charge is affine-decreasing over the comfort band") {
    const auto b = sample::building();
    CHECK(soc_from_temperature(b.comfort_low, b).value() == 1.0);
    CHECK(soc_from_temperature(b.comfort_high, b).value() == 0.0);
    CHECK(soc_from_temperature(sample::setpoint(), b).value() == doctest::Approx(0.5).epsilon(1e-12));

    // Affinity: midpoint of any two SoC values equals SoC of the midpoint.
    const double t1 = b.comfort_low.kelvin() + 0.3, t2 = b.comfort_high.kelvin() - 0.2;
    const double s1 = soc_value_unchecked(Temperature::from_kelvin(t1), b);
    const double s2 = soc_value_unchecked(Temperature::from_kelvin(t2), b);
    const double sm = soc_value_unchecked(Temperature::from_kelvin(0.5 * (t1 + t2)), b);
    CHECK(0.5 * (s1 + s2) == doctest::Approx(sm).epsilon(1e-12));
    CHECK(s1 > s2);  // decreasing in temperature
}

TEST_CASE("out-of-band state of charge is an error, not a clamp") {
    const auto b = sample::building();
    CHECK_THROWS_AS(soc_from_temperature(Temperature::from_kelvin(b.comfort_high.kelvin() + 0.5), b),
                    ComfortViolation);
    CHECK_THROWS_AS(StateOfCharge::from_value(1.0001), ComfortViolation);
    CHECK_THROWS_AS(StateOfCharge::from_value(-0.0001), ComfortViolation);
    // The unchecked accessor reports the excursion instead.
    CHECK(soc_value_unchecked(Temperature::from_kelvin(b.comfort_high.kelvin() + 1.111), b) < 0.0);
}

TEST_CASE("parameter validation rejects bad values") {
    PhysicalConstants k;
    CHECK_NOTHROW(k.validate());
    k.c_pa = -1.0;
    CHECK_THROWS_AS(k.validate(), ConfigError);

    auto b = sample::building();
    b.comfort_low = b.comfort_high;
    CHECK_THROWS_AS(b.validate(), ConfigError);
    b = sample::building();
    b.r_th = 0.0;
    CHECK_THROWS_AS(b.validate(), ConfigError);

    auto h = sample::hvac();
    h.m_a_min = 0.0;  // fan curve dips negative below 576/662
    CHECK_THROWS_AS(h.validate(), ConfigError);
    h = sample::hvac();
    h.r_oa = 1.5;
    CHECK_THROWS_AS(h.validate(), ConfigError);
    h = sample::hvac();
    h.cop = 0.0;
    CHECK_THROWS_AS(h.validate(), ConfigError);
    CHECK_NOTHROW(sample::hvac().validate());
}

TEST_CASE("float serialization round-trips every double bit for bit") {
    const double cases[] = {0.0,       -0.0,   1.0 / 3.0,
                            0.1,       1e300,  5e-324,
                            ex::kPHvacB, ex::kAlpha, -ex::kTcSs,
                            ex::kDownUpCrossing};
    for (double v : cases) {
        const std::string s = format_double(v);
        const double back = std::strtod(s.c_str(), nullptr);
        CHECK(std::memcmp(&back, &v, sizeof v) == 0);
    }
}

TEST_CASE("csv writer emits a header and fixed-width rows") {
    const std::string path = "core_test_out.csv";
    {
        CsvWriter csv(path, {"x", "y"});
        csv.row({1.0, ex::kAlpha});
        CHECK_THROWS_AS(csv.row({1.0, 2.0, 3.0}), ConfigError);
    }
    std::ifstream in(path);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    CHECK(header == "x,y");
    CHECK(row == "1," + format_double(ex::kAlpha));
    std::remove(path.c_str());
}

TEST_CASE("rng streams are deterministic and land in range") {
    Rng a(42), b(42), c(43);
    bool same = true, differ = false;
    for (int i = 0; i < 1000; ++i) {
        const double ua = a.uniform01(), ub = b.uniform01(), uc = c.uniform01();
        same = same && (ua == ub);
        differ = differ || (ua != uc);
        CHECK(ua >= 0.0);
        CHECK(ua < 1.0);
    }
    CHECK(same);
    CHECK(differ);

    Rng r(7);
    for (int i = 0; i < 200; ++i) {
        const double v = r.uniform(2.0, 5.0);
        CHECK(v >= 2.0);
        CHECK(v < 5.0);
        const double lg = r.log_uniform(1e-3, 1e3);
        CHECK(lg >= 1e-3);
        CHECK(lg <= 1e3);
    }
}

TEST_CASE("svg chart output is deterministic and structurally sane") {
    auto render = [](const std::string& path) {
        SvgChart chart("demo", "x [s]", "y", false);
        chart.add_series("curve", {1.0, 2.0, 3.0}, {0.5, 1.5, 1.0});
        chart.add_reference_line(1.0);
        chart.write(path);
        std::ifstream in(path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    };
    const std::string one = render("core_test_a.svg");
    const std::string two = render("core_test_b.svg");
    CHECK(one == two);
    CHECK(one.find("<svg") != std::string::npos);
    CHECK(one.find("polyline") != std::string::npos);
    CHECK(one.find("stroke-dasharray") != std::string::npos);  // the reference line
    CHECK(one.find("x [s]") != std::string::npos);
    std::remove("core_test_a.svg");
    std::remove("core_test_b.svg");

    SvgChart empty("t", "x", "y");
    CHECK_THROWS_AS(empty.write("core_test_c.svg"), ConfigError);
    SvgChart logbad("t", "x", "y", true);
    logbad.add_series("s", {-1.0, 1.0}, {0.0, 1.0});
    CHECK_THROWS_AS(logbad.write("core_test_c.svg"), ConfigError);
}
