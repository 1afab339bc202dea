#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vesim/extended_sim.hpp"
#include "vesim/hvac_model.hpp"
#include "vesim/rte_engine.hpp"
#include "vesim/units.hpp"
#include "vesim/ves_analytic.hpp"

namespace vesim {

// Key/value configuration text with nested [table] headers — the subset of
// TOML this project needs: bare keys, strings, numbers, booleans, and flat
// numeric arrays on a single line. Errors carry file:line positions.
class TomlTable {
  public:
    static TomlTable parse_file(const std::string& path);
    static TomlTable parse_string(const std::string& text, const std::string& source_name);

    bool has(const std::string& key) const;
    bool has_table(const std::string& name) const;

    double number(const std::string& key) const;
    double number_or(const std::string& key, double fallback) const;
    long long integer(const std::string& key) const;
    long long integer_or(const std::string& key, long long fallback) const;
    std::string text(const std::string& key) const;
    std::string text_or(const std::string& key, const std::string& fallback) const;
    bool flag_or(const std::string& key, bool fallback) const;
    std::vector<double> numbers(const std::string& key) const;

    // Every key must be consumed by one of the accessors above; leftovers are
    // almost always typos, so surface them with their line numbers.
    void require_all_used() const;

    const std::string& source() const { return source_; }

  private:
    struct Value {
        enum class Kind { text, number, boolean, array };
        Kind kind = Kind::number;
        std::string str;
        double num = 0.0;
        bool b = false;
        std::vector<double> arr;
        int line = 0;
        mutable bool used = false;
    };

    const Value& fetch(const std::string& key, Value::Kind kind) const;
    [[noreturn]] void fail(int line, const std::string& msg) const;

    std::string source_;
    std::map<std::string, Value> values_;
    std::set<std::string> tables_;
};

struct SweepSpec {
    enum class Variable { t_p, n, delta_p, r_oa };
    Variable variable = Variable::t_p;
    std::vector<double> grid;
    bool log_spaced = false;  // grid was generated log-spaced (drives chart axis)
};

std::string to_string(SweepSpec::Variable v);

struct WeatherSpec {
    enum class Kind { constant, synthetic, file };
    Kind kind = Kind::constant;
    double t_mean_f = 0.0, t_amp_f = 0.0, w_mean = 0.0, w_amp = 0.0, period_s = 86400.0;
    std::string path;
};

// A fully validated scenario file. Parsing resolves defaults and checks
// cross-field rules; the accessor methods materialize model objects.
struct ScenarioConfig {
    enum class Model { analytic, extended };

    static ScenarioConfig from_file(const std::string& path);
    static ScenarioConfig from_string(const std::string& text, const std::string& source_name);

    Model model = Model::analytic;
    PhysicalConstants consts;
    BuildingParams building{};
    HvacParams hvac{};
    Temperature t_oa = Temperature::from_kelvin(300.0);
    double w_oa = 0.0;
    double q_x_w = std::numeric_limits<double>::quiet_NaN();      // exactly one of these
    double m_a_b_kg_s = std::numeric_limits<double>::quiet_NaN(); // two is present
    Temperature t_b = Temperature::from_kelvin(295.0);

    bool has_schedule = false;
    double delta_p_w = std::numeric_limits<double>::quiet_NaN();
    double delta_p_fraction = std::numeric_limits<double>::quiet_NaN();
    double t_p_s = 0.0;
    int n_cycles = 1;
    Phase phase = Phase::down_up;

    std::optional<SweepSpec> sweep;

    double dt_s = 10.0;

    double kp = 40.0, ki = 0.1;
    double m_max_kg_s = std::numeric_limits<double>::quiet_NaN();  // NaN: 4x baseline airflow

    ExtendedBuildingParams ext_building{};
    double omega_x_kg_s = 5.0e-4;
    double w_sa = 0.008;
    bool use_cop_curve = true;
    double warmup_s = 86400.0;
    double recovery_tol_k = 0.005;
    double recovery_hold_s = 600.0;
    double recovery_cap_s = 172800.0;

    WeatherSpec weather;

    BaselinePoint baseline() const;
    VesCoefficients coefficients(const BaselinePoint& bp) const;
    ScheduleSpec schedule(const BaselinePoint& bp) const;
    // Schedule for one sweep grid point: the swept variable fills the field
    // the config left out (delta_p in watts, t_p in seconds, n in cycles).
    ScheduleSpec sweep_schedule(const BaselinePoint& bp, double x) const;
    AmbientConditions ambient() const;
    ExtendedModel extended_model(const BaselinePoint& bp) const;
    ExtendedRunConfig extended_run(const BaselinePoint& bp) const;
    WeatherSeries weather_series() const;
};

}  // namespace vesim
