#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "support/sample_building.hpp"
#include "vesim/scenario.hpp"

using namespace vesim;
namespace ex = sample::expected;

namespace {

// The sample zone as a scenario file; sections can be replaced or appended.
const char* kBase = R"(model = "analytic"

[building]
r_th_k_per_w = 1.3e-3
c_th_j_per_k = 3.4e7
comfort_low_f = 70
comfort_high_f = 74

[hvac]
alpha_1f = 662
alpha_2f = -576
cop = 3.5
t_sa_f = 55
m_a_min_kg_s = 0.9

[ambient]
t_oa_f = 80
w_oa = 0.010

[baseline]
t_b_f = 72
m_a_b_kg_s = 2.27
)";

ScenarioConfig parse(const std::string& extra) {
    return ScenarioConfig::from_string(std::string(kBase) + extra, "test.toml");
}

const char* kSchedule = R"(
[schedule]
delta_p_fraction = 0.2
t_p_s = 1800
n_cycles = 2
phase = "down_up"
)";

}  // namespace

TEST_CASE("config text parsing: values, tables, comments, diagnostics") {
    const TomlTable t = TomlTable::parse_string(
        "top = 1 # trailing comment\n"
        "name = \"say \\\"hi\\\" \\\\ there\"  # escapes\n"
        "flag = true\n"
        "grid = [1, 2.5, 3e1]\n"
        "empty = []\n"
        "\r\n"
        "[table]\n"
        "inner = -4\n"
        "count = 7\n",
        "cfg.toml");
    CHECK(t.number("top") == 1.0);
    CHECK(t.text("name") == "say \"hi\" \\ there");
    CHECK(t.flag_or("flag", false));
    CHECK(t.numbers("grid") == std::vector<double>{1.0, 2.5, 30.0});
    CHECK(t.numbers("empty").empty());
    CHECK(t.has_table("table"));
    CHECK_FALSE(t.has_table("other"));
    CHECK(t.number("table.inner") == -4.0);
    CHECK(t.integer("table.count") == 7);
    CHECK(t.integer_or("table.missing", 9) == 9);
    CHECK(t.number_or("table.missing", 0.5) == 0.5);
    CHECK(t.text_or("missing", "dflt") == "dflt");
    CHECK_NOTHROW(t.require_all_used());
}

TEST_CASE("config text parsing: malformed input is rejected with positions") {
    auto reject = [](const std::string& text, const std::string& needle) {
        CHECK_THROWS_WITH_AS(TomlTable::parse_string(text, "bad.toml"),
                             doctest::Contains(needle.c_str()), ConfigError);
    };
    reject("x 1\n", "bad.toml:1");
    reject("= 1\n", "bad key");
    reject("a.b = 1\n", "bad key");
    reject("x =\n", "missing value");
    reject("x = 1\nx = 2\n", "first set on line 1");
    reject("[t]\n[t]\n", "duplicate table");
    reject("[t\n", "unterminated table header");
    reject("[]\n", "bad table name");
    reject("s = \"abc\n", "unterminated string");
    reject("s = \"a\\q\"\n", "unsupported escape");
    reject("s = \"a\"b\"\n", "stray quote");
    reject("a = [1, 2\n", "arrays must close");
    reject("a = [1, two]\n", "bad array element");
    reject("a = [1, 2,]\n", "trailing comma in array");
    reject("x = 1.2.3\n", "bad value");

    const TomlTable t = TomlTable::parse_string("known = 1\nstray = 2\n", "cfg.toml");
    t.number("known");
    CHECK_THROWS_WITH_AS(t.require_all_used(), doctest::Contains("unknown key \"stray\""),
                         ConfigError);
    CHECK_THROWS_WITH_AS(t.number("known2"), doctest::Contains("missing required key"),
                         ConfigError);
    CHECK_THROWS_WITH_AS(t.text("known"), doctest::Contains("must be a string"), ConfigError);

    const TomlTable frac = TomlTable::parse_string("n = 2.5\nbig = 1e16\n", "cfg.toml");
    CHECK_THROWS_WITH_AS(frac.integer("n"), doctest::Contains("must be an integer"), ConfigError);
    CHECK_THROWS_WITH_AS(frac.integer("big"), doctest::Contains("must be an integer"), ConfigError);

    CHECK_THROWS_WITH_AS(TomlTable::parse_file("no_such_config.toml"),
                         doctest::Contains("cannot open"), ConfigError);
}

TEST_CASE("scenario defaults and derived quantities") {
    const ScenarioConfig c = parse(kSchedule);
    CHECK(c.model == ScenarioConfig::Model::analytic);
    CHECK(c.hvac.r_oa == 1.0);       // not set: all outside air
    CHECK(c.dt_s == 10.0);
    CHECK(c.kp == 40.0);
    CHECK(c.ki == 0.1);
    CHECK(c.n_cycles == 2);
    CHECK(c.phase == Phase::down_up);

    const BaselinePoint bp = c.baseline();
    CHECK(bp.m_a_b == 2.27);
    CHECK(bp.q_x == doctest::Approx(ex::kQx).epsilon(1e-12));
    CHECK(bp.p_hvac_b == doctest::Approx(ex::kPHvacB).epsilon(1e-12));

    const VesCoefficients v = c.coefficients(bp);
    CHECK(v.a == doctest::Approx(ex::kA).epsilon(1e-12));
    CHECK(v.b == 0.0);

    const ScheduleSpec s = c.schedule(bp);
    CHECK(s.delta_p == doctest::Approx(ex::kDeltaP02).epsilon(1e-12));
    CHECK(s.t_p == 1800.0);

    const ExtendedRunConfig run = c.extended_run(bp);
    CHECK(run.gains.m_ff == 2.27);
    CHECK(run.gains.m_max == doctest::Approx(4.0 * 2.27).epsilon(1e-12));
    CHECK(run.setpoint_k == doctest::Approx(ex::kTbK).epsilon(1e-12));
    CHECK(run.comfort_low_k == doctest::Approx(ex::kTlK).epsilon(1e-12));

    // Extended envelope defaults split the lumped building values.
    const ExtendedModel m = c.extended_model(bp);
    CHECK(m.bld.c_z == doctest::Approx(0.3 * 3.4e7).epsilon(1e-12));
    CHECK(m.bld.c_w == doctest::Approx(0.7 * 3.4e7).epsilon(1e-12));
    CHECK(m.bld.r_z == doctest::Approx(0.5 * 1.3e-3).epsilon(1e-12));
    CHECK_FALSE(m.bld.pin_wall);
    CHECK(m.loads.q_x == doctest::Approx(ex::kQx).epsilon(1e-12));
}

TEST_CASE("schedule amplitude forms") {
    const ScenarioConfig abs = parse("\n[schedule]\ndelta_p_w = 1500\nt_p_s = 600\n");
    CHECK(abs.schedule(abs.baseline()).delta_p == 1500.0);
    CHECK(abs.schedule(abs.baseline()).n_cycles == 1);  // default

    CHECK_THROWS_WITH_AS(
        parse("\n[schedule]\ndelta_p_w = 1500\ndelta_p_fraction = 0.2\nt_p_s = 600\n"),
        doctest::Contains("exactly one of schedule.delta_p_w"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("\n[schedule]\nt_p_s = 600\n"),
                         doctest::Contains("exactly one of schedule.delta_p_w"), ConfigError);
    CHECK_THROWS_AS(parse("\n[schedule]\ndelta_p_w = 1500\n"), ConfigError);  // t_p_s required
    CHECK_THROWS_WITH_AS(parse("\n[schedule]\ndelta_p_w = 1500\nt_p_s = 600\nphase = \"x\"\n"),
                         doctest::Contains("schedule.phase"), ConfigError);

    const ScenarioConfig none = parse("");
    CHECK_FALSE(none.has_schedule);
    CHECK_THROWS_AS(none.schedule(none.baseline()), ConfigError);
}

TEST_CASE("exactly one of the load and the baseline airflow") {
    std::string with_q(kBase);
    const auto pos = with_q.find("m_a_b_kg_s = 2.27");
    REQUIRE(pos != std::string::npos);
    with_q.replace(pos, std::string("m_a_b_kg_s = 2.27").size(), "");
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_string(with_q, "t.toml"),
                         doctest::Contains("exactly one of ambient.q_x_w"), ConfigError);

    std::string q_only = with_q;
    const auto amb = q_only.find("w_oa = 0.010");
    q_only.insert(amb, "q_x_w = 18148.718803418804\n");
    const ScenarioConfig c = ScenarioConfig::from_string(q_only, "t.toml");
    CHECK(c.baseline().m_a_b == doctest::Approx(2.27).epsilon(1e-9));

    std::string over(kBase);
    const auto amb2 = over.find("w_oa = 0.010");
    over.insert(amb2, "q_x_w = 18148.718803418804\n");
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_string(over, "t.toml"),
                         doctest::Contains("exactly one of ambient.q_x_w"), ConfigError);
}

TEST_CASE("scenario rejections: models, typos, ranges") {
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_string("model = \"quantum\"\n", "t.toml"),
                         doctest::Contains("model must be"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("\ntypo_key = 1\n"), doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("\n[integrator]\ndt_s = 0\n"),
                         doctest::Contains("integrator.dt_s"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("\n[extended]\nw_sa = -0.001\n"),
                         doctest::Contains("extended.w_sa"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("\n[extended]\nrecovery_tol_k = 0\n"),
                         doctest::Contains("recovery/warmup"), ConfigError);

    std::string neg_w(kBase);
    const auto p = neg_w.find("w_oa = 0.010");
    neg_w.replace(p, std::string("w_oa = 0.010").size(), "w_oa = -0.01");
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_string(neg_w, "t.toml"),
                         doctest::Contains("ambient.w_oa"), ConfigError);

    // Model-level validation surfaces through parsing too.
    std::string bad_band(kBase);
    const auto lo = bad_band.find("comfort_low_f = 70");
    bad_band.replace(lo, std::string("comfort_low_f = 70").size(), "comfort_low_f = 78");
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_string(bad_band, "t.toml"),
                         doctest::Contains("comfort band"), ConfigError);
}

TEST_CASE("weather block variants") {
    const ScenarioConfig c = parse(kSchedule);  // no [weather]: constant ambient
    CHECK(c.weather.kind == WeatherSpec::Kind::constant);
    CHECK(c.weather_series().at(12345.0).t_oa_k == doctest::Approx(ex::kToaK).epsilon(1e-12));

    const ScenarioConfig syn = parse(std::string(kSchedule) +
                                     "\n[weather]\nkind = \"synthetic\"\nt_mean_f = 80\n"
                                     "t_amp_f = 10\nw_amp = 0.002\nperiod_s = 86400\n");
    CHECK(syn.weather.kind == WeatherSpec::Kind::synthetic);
    CHECK(syn.weather.w_mean == 0.010);  // defaults to the ambient humidity
    CHECK(syn.weather_series().at(21600.0).t_oa_k ==
          doctest::Approx(Temperature::from_fahrenheit(90.0).kelvin()).epsilon(1e-9));

    CHECK_THROWS_WITH_AS(parse("\n[weather]\nkind = \"synthetic\"\n"),
                         doctest::Contains("missing required key \"weather.t_mean_f\""),
                         ConfigError);
    CHECK_THROWS_WITH_AS(
        parse("\n[weather]\nkind = \"synthetic\"\nt_mean_f = 80\nt_amp_f = 10\nperiod_s = 0\n"),
        doctest::Contains("weather.period_s"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("\n[weather]\nkind = \"martian\"\n"),
                         doctest::Contains("weather.kind"), ConfigError);

    const ScenarioConfig file = parse("\n[weather]\nkind = \"file\"\npath = \"w.csv\"\n");
    CHECK(file.weather.kind == WeatherSpec::Kind::file);
    CHECK(file.weather.path == "w.csv");
    CHECK_THROWS_WITH_AS(parse("\n[weather]\nkind = \"file\"\n"),
                         doctest::Contains("weather.path"), ConfigError);
}

TEST_CASE("sweep grids: explicit, linear, log, cycle counts") {
    const ScenarioConfig g = parse(std::string(kSchedule).replace(
                                       std::string(kSchedule).find("t_p_s = 1800\n"), 13, "") +
                                   "\n[sweep]\nvariable = \"t_p\"\ngrid = [60, 600, 6000]\n");
    REQUIRE(g.sweep.has_value());
    CHECK(g.sweep->variable == SweepSpec::Variable::t_p);
    CHECK(g.sweep->grid == std::vector<double>{60.0, 600.0, 6000.0});
    CHECK_FALSE(g.sweep->log_spaced);

    // A swept amplitude drops the schedule amplitude keys entirely.
    const ScenarioConfig lin =
        parse("\n[schedule]\nt_p_s = 600\n"
              "\n[sweep]\nvariable = \"delta_p\"\nmin = 100\nmax = 300\npoints = 3\n");
    REQUIRE(lin.sweep.has_value());
    CHECK(lin.sweep->grid == std::vector<double>{100.0, 200.0, 300.0});
    CHECK_THROWS_WITH_AS(
        parse("\n[schedule]\nt_p_s = 600\n"
              "\n[sweep]\nvariable = \"delta_p\"\nmin = 100\nmax = 300\npoints = 3\n"
              "dummy = 1\n"),
        doctest::Contains("unknown key"), ConfigError);

    const ScenarioConfig log = parse(
        "\n[schedule]\ndelta_p_fraction = 0.2\n"
        "\n[sweep]\nvariable = \"t_p\"\nmin = 60\nmax = 18000\npoints = 60\nspacing = \"log\"\n");
    REQUIRE(log.sweep.has_value());
    CHECK(log.sweep->log_spaced);
    const auto want = default_tp_grid();
    REQUIRE(log.sweep->grid.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i)
        CHECK(log.sweep->grid[i] == doctest::Approx(want[i]).epsilon(1e-12));

    const ScenarioConfig n = parse(std::string("\n[schedule]\ndelta_p_fraction = 0.2\nt_p_s = 1800\n") +
                                   "\n[sweep]\nvariable = \"n\"\nn_max = 5\n");
    REQUIRE(n.sweep.has_value());
    CHECK(n.sweep->grid == std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});

    auto sweep_cfg = [](const std::string& body) {
        return std::string("\n[schedule]\ndelta_p_fraction = 0.2\nt_p_s = 600\n[sweep]\n") + body;
    };
    CHECK_THROWS_WITH_AS(parse(sweep_cfg("variable = \"n\"\nn_max = 0\n")),
                         doctest::Contains("sweep.n_max"), ConfigError);
    CHECK_THROWS_WITH_AS(parse(sweep_cfg("variable = \"n\"\nn_max = 2.5\n")),
                         doctest::Contains("must be an integer"), ConfigError);
    CHECK_THROWS_WITH_AS(parse(sweep_cfg("variable = \"phase\"\nn_max = 3\n")),
                         doctest::Contains("sweep.variable"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse(sweep_cfg("variable = \"delta_p\"\nmin = 100\nmax = 300\npoints = 1\n")),
        doctest::Contains("sweep.points"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse(sweep_cfg("variable = \"delta_p\"\nmin = 300\nmax = 100\npoints = 3\n")),
        doctest::Contains("sweep.max"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse(sweep_cfg("variable = \"delta_p\"\nmin = 0\nmax = 100\npoints = 3\nspacing = \"log\"\n")),
        doctest::Contains("log spacing"), ConfigError);
    CHECK_THROWS_WITH_AS(
        parse(sweep_cfg("variable = \"delta_p\"\nmin = 1\nmax = 100\npoints = 3\nspacing = \"cubic\"\n")),
        doctest::Contains("sweep.spacing"), ConfigError);
    CHECK_THROWS_WITH_AS(parse(sweep_cfg("variable = \"delta_p\"\ngrid = []\n")),
                         doctest::Contains("sweep grid is empty"), ConfigError);
    // An overflowing literal is rejected by the value parser before the
    // sweep-level finiteness check can see it.
    CHECK_THROWS_WITH_AS(parse(sweep_cfg("variable = \"delta_p\"\ngrid = [1e999]\n")),
                         doctest::Contains("bad array element"), ConfigError);
}

TEST_CASE("sweeps exclude the swept field from the schedule") {
    CHECK_THROWS_WITH_AS(parse(std::string(kSchedule) +
                               "\n[sweep]\nvariable = \"t_p\"\ngrid = [60, 600]\n"),
                         doctest::Contains("schedule.t_p_s conflicts"), ConfigError);
    CHECK_THROWS_WITH_AS(parse(std::string(kSchedule) +
                               "\n[sweep]\nvariable = \"delta_p\"\ngrid = [100, 200]\n"),
                         doctest::Contains("schedule amplitude conflicts"), ConfigError);
    CHECK_THROWS_WITH_AS(parse(std::string(kSchedule) +
                               "\n[sweep]\nvariable = \"n\"\nn_max = 4\n"),
                         doctest::Contains("schedule.n_cycles conflicts"), ConfigError);
    CHECK_THROWS_WITH_AS(parse("\n[sweep]\nvariable = \"t_p\"\ngrid = [60, 600]\n"),
                         doctest::Contains("needs a [schedule]"), ConfigError);

    // Sweeping the outside-air fraction forbids pinning it in [hvac].
    std::string no_roa(kBase);
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_string(
            no_roa + "\n[schedule]\ndelta_p_fraction = 0.2\nt_p_s = 600\n"
                     "\n[sweep]\nvariable = \"r_oa\"\nmin = 0.2\nmax = 1\npoints = 5\n" +
                "r_oa_conflict = 1\n",
            "t.toml"),
        doctest::Contains("unknown key"), ConfigError);
    std::string pinned(kBase);
    const auto hv = pinned.find("m_a_min_kg_s");
    pinned.insert(hv, "r_oa = 0.5\n");
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_string(
            pinned + "\n[schedule]\ndelta_p_fraction = 0.2\nt_p_s = 600\n"
                     "\n[sweep]\nvariable = \"r_oa\"\nmin = 0.2\nmax = 1\npoints = 5\n",
            "t.toml"),
        doctest::Contains("hvac.r_oa conflicts"), ConfigError);

    const ScenarioConfig ok = parse(
        "\n[schedule]\ndelta_p_fraction = 0.2\nt_p_s = 600\n"
        "\n[sweep]\nvariable = \"r_oa\"\nmin = 0.2\nmax = 1\npoints = 5\n");
    REQUIRE(ok.sweep.has_value());
    CHECK(ok.sweep->grid.front() == 0.2);
    CHECK(ok.sweep->grid.back() == 1.0);
}

TEST_CASE("sweep schedules substitute the grid value") {
    const ScenarioConfig tp = parse(
        "\n[schedule]\ndelta_p_fraction = 0.2\nn_cycles = 3\n"
        "\n[sweep]\nvariable = \"t_p\"\ngrid = [60, 600]\n");
    const BaselinePoint bp = tp.baseline();
    const ScheduleSpec s1 = tp.sweep_schedule(bp, 1234.0);
    CHECK(s1.t_p == 1234.0);
    CHECK(s1.delta_p == doctest::Approx(ex::kDeltaP02).epsilon(1e-12));
    CHECK(s1.n_cycles == 3);

    const ScenarioConfig dp = parse(
        "\n[schedule]\nt_p_s = 600\n"
        "\n[sweep]\nvariable = \"delta_p\"\ngrid = [100, 200]\n");
    const ScheduleSpec s2 = dp.sweep_schedule(dp.baseline(), 150.0);
    CHECK(s2.delta_p == 150.0);
    CHECK(s2.t_p == 600.0);

    const ScenarioConfig n = parse(
        "\n[schedule]\ndelta_p_fraction = 0.2\nt_p_s = 1800\n"
        "\n[sweep]\nvariable = \"n\"\nn_max = 5\n");
    CHECK(n.sweep_schedule(n.baseline(), 4.0).n_cycles == 4);

    const ScenarioConfig plain = parse(kSchedule);
    CHECK_THROWS_AS(plain.sweep_schedule(plain.baseline(), 60.0), ConfigError);
}

TEST_CASE("the extended model only sweeps over the cycle count") {
    std::string ext(kBase);
    const auto m = ext.find("model = \"analytic\"");
    ext.replace(m, std::string("model = \"analytic\"").size(), "model = \"extended\"");
    CHECK_THROWS_WITH_AS(
        ScenarioConfig::from_string(ext + "\n[schedule]\ndelta_p_fraction = 0.2\n"
                                          "\n[sweep]\nvariable = \"t_p\"\ngrid = [60, 600]\n",
                                    "t.toml"),
        doctest::Contains("only sweeps over n"), ConfigError);
    const ScenarioConfig ok = ScenarioConfig::from_string(
        ext + "\n[schedule]\ndelta_p_fraction = 0.2\nt_p_s = 1800\n"
              "\n[sweep]\nvariable = \"n\"\nn_max = 3\n",
        "t.toml");
    CHECK(ok.model == ScenarioConfig::Model::extended);
}

TEST_CASE("scenario files round-trip through the filesystem") {
    const std::string path = "scenario_roundtrip.toml";
    {
        std::ofstream out(path);
        out << kBase << kSchedule;
    }
    const ScenarioConfig c = ScenarioConfig::from_file(path);
    CHECK(c.schedule(c.baseline()).t_p == 1800.0);
    std::remove(path.c_str());
    CHECK_THROWS_WITH_AS(ScenarioConfig::from_file(path), doctest::Contains("cannot open"),
                         ConfigError);
}
