#include "vesim/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace vesim {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

bool valid_key(const std::string& k) {
    if (k.empty()) return false;
    for (char c : k)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.'))
            return false;
    return true;
}

// Strip a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
    bool in_str = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) in_str = !in_str;
        if (line[i] == '#' && !in_str) return line.substr(0, i);
    }
    return line;
}

double parse_number(const std::string& cell, bool& ok) {
    try {
        std::size_t used = 0;
        const double v = std::stod(cell, &used);
        ok = used == cell.size();
        return v;
    } catch (const std::exception&) {
        ok = false;
        return 0.0;
    }
}

}  // namespace

void TomlTable::fail(int line, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg);
}

TomlTable TomlTable::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str(), path);
}

TomlTable TomlTable::parse_string(const std::string& text, const std::string& source_name) {
    TomlTable t;
    t.source_ = source_name;
    std::istringstream in(text);
    std::string raw;
    std::string prefix;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') t.fail(line_no, "unterminated table header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (!valid_key(name)) t.fail(line_no, "bad table name \"" + name + "\"");
            if (!t.tables_.insert(name).second) t.fail(line_no, "duplicate table [" + name + "]");
            prefix = name + ".";
            continue;
        }

        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) t.fail(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (!valid_key(key) || key.find('.') != std::string::npos)
            t.fail(line_no, "bad key \"" + key + "\"");
        if (val.empty()) t.fail(line_no, "missing value for \"" + key + "\"");

        Value v;
        v.line = line_no;
        if (val.front() == '"') {
            if (val.size() < 2 || val.back() != '"') t.fail(line_no, "unterminated string");
            std::string s;
            for (std::size_t i = 1; i + 1 < val.size(); ++i) {
                if (val[i] == '\\') {
                    if (i + 2 >= val.size()) t.fail(line_no, "dangling escape in string");
                    const char c = val[++i];
                    if (c == '"' || c == '\\') s.push_back(c);
                    else t.fail(line_no, std::string("unsupported escape \\") + c);
                } else if (val[i] == '"') {
                    t.fail(line_no, "stray quote inside string");
                } else {
                    s.push_back(val[i]);
                }
            }
            v.kind = Value::Kind::text;
            v.str = s;
        } else if (val == "true" || val == "false") {
            v.kind = Value::Kind::boolean;
            v.b = val == "true";
        } else if (val.front() == '[') {
            if (val.back() != ']') t.fail(line_no, "arrays must close on the same line");
            v.kind = Value::Kind::array;
            std::string body = trim(val.substr(1, val.size() - 2));
            if (!body.empty()) {
                std::istringstream cells(body);
                std::string cell;
                while (std::getline(cells, cell, ',')) {
                    cell = trim(cell);
                    bool ok = false;
                    const double num = parse_number(cell, ok);
                    if (!ok) t.fail(line_no, "bad array element \"" + cell + "\"");
                    v.arr.push_back(num);
                }
                if (!body.empty() && body.back() == ',') t.fail(line_no, "trailing comma in array");
            }
        } else {
            bool ok = false;
            v.kind = Value::Kind::number;
            v.num = parse_number(val, ok);
            if (!ok) t.fail(line_no, "bad value \"" + val + "\"");
        }

        const std::string full = prefix + key;
        const auto [it, inserted] = t.values_.emplace(full, std::move(v));
        if (!inserted)
            t.fail(line_no, "duplicate key \"" + full + "\" (first set on line " +
                                std::to_string(it->second.line) + ")");
    }
    return t;
}

bool TomlTable::has(const std::string& key) const { return values_.count(key) != 0; }

bool TomlTable::has_table(const std::string& name) const {
    if (tables_.count(name)) return true;
    const std::string prefix = name + ".";
    auto it = values_.lower_bound(prefix);
    return it != values_.end() && it->first.compare(0, prefix.size(), prefix) == 0;
}

const TomlTable::Value& TomlTable::fetch(const std::string& key, Value::Kind kind) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError(source_ + ": missing required key \"" + key + "\"");
    static const char* kNames[] = {"string", "number", "boolean", "array"};
    if (it->second.kind != kind)
        fail(it->second.line, "\"" + key + "\" must be a " + kNames[static_cast<int>(kind)]);
    it->second.used = true;
    return it->second;
}

double TomlTable::number(const std::string& key) const { return fetch(key, Value::Kind::number).num; }

double TomlTable::number_or(const std::string& key, double fallback) const {
    return has(key) ? number(key) : fallback;
}

long long TomlTable::integer(const std::string& key) const {
    const Value& v = fetch(key, Value::Kind::number);
    if (std::floor(v.num) != v.num || std::fabs(v.num) > 9.0e15)
        fail(v.line, "\"" + key + "\" must be an integer");
    return static_cast<long long>(v.num);
}

long long TomlTable::integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
}

std::string TomlTable::text(const std::string& key) const { return fetch(key, Value::Kind::text).str; }

std::string TomlTable::text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
}

bool TomlTable::flag_or(const std::string& key, bool fallback) const {
    return has(key) ? fetch(key, Value::Kind::boolean).b : fallback;
}

std::vector<double> TomlTable::numbers(const std::string& key) const {
    return fetch(key, Value::Kind::array).arr;
}

void TomlTable::require_all_used() const {
    for (const auto& [key, v] : values_)
        if (!v.used) fail(v.line, "unknown key \"" + key + "\"");
}

std::string to_string(SweepSpec::Variable v) {
    switch (v) {
        case SweepSpec::Variable::t_p: return "t_p";
        case SweepSpec::Variable::n: return "n";
        case SweepSpec::Variable::delta_p: return "delta_p";
        case SweepSpec::Variable::r_oa: return "r_oa";
    }
    return "?";
}

namespace {

Temperature temp_f(const TomlTable& t, const std::string& key) {
    return Temperature::from_fahrenheit(t.number(key));
}

SweepSpec parse_sweep(const TomlTable& t) {
    SweepSpec s;
    const std::string var = t.text("sweep.variable");
    if (var == "t_p") s.variable = SweepSpec::Variable::t_p;
    else if (var == "n") s.variable = SweepSpec::Variable::n;
    else if (var == "delta_p") s.variable = SweepSpec::Variable::delta_p;
    else if (var == "r_oa") s.variable = SweepSpec::Variable::r_oa;
    else throw ConfigError(t.source() + ": sweep.variable must be one of t_p, n, delta_p, r_oa");

    if (s.variable == SweepSpec::Variable::n) {
        const long long n_max = t.integer("sweep.n_max");
        if (n_max < 1) throw ConfigError(t.source() + ": sweep.n_max must be >= 1");
        for (long long n = 1; n <= n_max; ++n) s.grid.push_back(static_cast<double>(n));
        return s;
    }
    if (t.has("sweep.grid")) {
        s.grid = t.numbers("sweep.grid");
    } else {
        const double lo = t.number("sweep.min");
        const double hi = t.number("sweep.max");
        const long long pts = t.integer("sweep.points");
        const std::string spacing = t.text_or("sweep.spacing", "linear");
        if (pts < 2) throw ConfigError(t.source() + ": sweep.points must be >= 2");
        if (!(hi > lo)) throw ConfigError(t.source() + ": sweep.max must exceed sweep.min");
        if (spacing == "log") {
            if (!(lo > 0.0)) throw ConfigError(t.source() + ": log spacing needs sweep.min > 0");
            s.log_spaced = true;
            for (long long i = 0; i < pts; ++i)
                s.grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) /
                                                            static_cast<double>(pts - 1)));
        } else if (spacing == "linear") {
            for (long long i = 0; i < pts; ++i)
                s.grid.push_back(lo + (hi - lo) * static_cast<double>(i) /
                                          static_cast<double>(pts - 1));
        } else {
            throw ConfigError(t.source() + ": sweep.spacing must be \"linear\" or \"log\"");
        }
    }
    if (s.grid.empty()) throw ConfigError(t.source() + ": sweep grid is empty");
    for (double g : s.grid)
        if (!std::isfinite(g)) throw ConfigError(t.source() + ": sweep grid has non-finite entry");
    return s;
}

}  // namespace

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
    return from_string([&] {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file: " + path);
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }(), path);
}

ScenarioConfig ScenarioConfig::from_string(const std::string& text, const std::string& source_name) {
    const TomlTable t = TomlTable::parse_string(text, source_name);
    ScenarioConfig c;

    const std::string model = t.text_or("model", "analytic");
    if (model == "analytic") c.model = Model::analytic;
    else if (model == "extended") c.model = Model::extended;
    else throw ConfigError(source_name + ": model must be \"analytic\" or \"extended\"");

    c.consts.c_pa = t.number_or("constants.c_pa", c.consts.c_pa);
    c.consts.c_pw = t.number_or("constants.c_pw", c.consts.c_pw);
    c.consts.g_h2o = t.number_or("constants.g_h2o", c.consts.g_h2o);
    c.consts.r_g = t.number_or("constants.r_g", c.consts.r_g);
    c.consts.validate();

    c.building.r_th = t.number("building.r_th_k_per_w");
    c.building.c_th = t.number("building.c_th_j_per_k");
    c.building.comfort_low = temp_f(t, "building.comfort_low_f");
    c.building.comfort_high = temp_f(t, "building.comfort_high_f");
    c.building.validate();

    if (t.has_table("sweep")) c.sweep = parse_sweep(t);
    const auto swept = c.sweep ? std::optional<SweepSpec::Variable>(c.sweep->variable)
                               : std::optional<SweepSpec::Variable>();

    c.hvac.alpha_1f = t.number("hvac.alpha_1f");
    c.hvac.alpha_2f = t.number("hvac.alpha_2f");
    c.hvac.cop = t.number("hvac.cop");
    c.hvac.t_sa = temp_f(t, "hvac.t_sa_f");
    if (swept == SweepSpec::Variable::r_oa && t.has("hvac.r_oa"))
        throw ConfigError(source_name + ": hvac.r_oa conflicts with sweep.variable = \"r_oa\"");
    c.hvac.r_oa = t.number_or("hvac.r_oa", 1.0);
    c.hvac.m_a_min = t.number_or("hvac.m_a_min_kg_s", 0.0);
    c.hvac.validate();

    c.t_oa = temp_f(t, "ambient.t_oa_f");
    c.w_oa = t.number_or("ambient.w_oa", 0.0);
    if (c.w_oa < 0.0) throw ConfigError(source_name + ": ambient.w_oa must be >= 0");
    if (t.has("ambient.q_x_w")) c.q_x_w = t.number("ambient.q_x_w");

    c.t_b = temp_f(t, "baseline.t_b_f");
    if (t.has("baseline.m_a_b_kg_s")) c.m_a_b_kg_s = t.number("baseline.m_a_b_kg_s");
    const bool has_q = std::isfinite(c.q_x_w), has_m = std::isfinite(c.m_a_b_kg_s);
    if (has_q == has_m)
        throw ConfigError(source_name +
                          ": provide exactly one of ambient.q_x_w and baseline.m_a_b_kg_s");

    c.has_schedule = t.has_table("schedule");
    if (c.sweep && !c.has_schedule)
        throw ConfigError(source_name + ": [sweep] needs a [schedule] block for the fixed fields");
    if (c.has_schedule) {
        const bool abs_p = t.has("schedule.delta_p_w");
        const bool frac_p = t.has("schedule.delta_p_fraction");
        if (swept == SweepSpec::Variable::delta_p) {
            if (abs_p || frac_p)
                throw ConfigError(source_name +
                                  ": schedule amplitude conflicts with sweep.variable = "
                                  "\"delta_p\" (the grid supplies it, in watts)");
        } else {
            if (abs_p == frac_p)
                throw ConfigError(source_name +
                                  ": provide exactly one of schedule.delta_p_w and "
                                  "schedule.delta_p_fraction");
            if (abs_p) c.delta_p_w = t.number("schedule.delta_p_w");
            else c.delta_p_fraction = t.number("schedule.delta_p_fraction");
        }
        if (swept == SweepSpec::Variable::t_p) {
            if (t.has("schedule.t_p_s"))
                throw ConfigError(source_name +
                                  ": schedule.t_p_s conflicts with sweep.variable = \"t_p\"");
        } else {
            c.t_p_s = t.number("schedule.t_p_s");
        }
        if (swept == SweepSpec::Variable::n) {
            if (t.has("schedule.n_cycles"))
                throw ConfigError(source_name +
                                  ": schedule.n_cycles conflicts with sweep.variable = \"n\"");
        } else {
            c.n_cycles = static_cast<int>(t.integer_or("schedule.n_cycles", 1));
        }
        const std::string phase = t.text_or("schedule.phase", "down_up");
        if (phase == "up_down") c.phase = Phase::up_down;
        else if (phase == "down_up") c.phase = Phase::down_up;
        else throw ConfigError(source_name + ": schedule.phase must be \"up_down\" or \"down_up\"");
    }

    c.dt_s = t.number_or("integrator.dt_s", 10.0);
    if (!(c.dt_s > 0.0)) throw ConfigError(source_name + ": integrator.dt_s must be > 0");

    c.kp = t.number_or("controller.kp", 40.0);
    c.ki = t.number_or("controller.ki", 0.1);
    if (t.has("controller.m_max_kg_s")) c.m_max_kg_s = t.number("controller.m_max_kg_s");

    c.ext_building.c_z = t.number_or("extended.c_z_j_per_k", 0.3 * c.building.c_th);
    c.ext_building.c_w = t.number_or("extended.c_w_j_per_k", 0.7 * c.building.c_th);
    c.ext_building.r_z = t.number_or("extended.r_z_k_per_w", 0.5 * c.building.r_th);
    c.ext_building.r_w = t.number_or("extended.r_w_k_per_w", 0.5 * c.building.r_th);
    c.ext_building.volume = t.number_or("extended.volume_m3", 2790.0);
    c.ext_building.p_da = t.number_or("extended.p_da_pa", 1.0e5);
    c.ext_building.pin_wall = t.flag_or("extended.pin_wall", false);
    c.ext_building.freeze_humidity = t.flag_or("extended.freeze_humidity", false);
    c.ext_building.validate();
    c.omega_x_kg_s = t.number_or("extended.omega_x_kg_s", 5.0e-4);
    c.w_sa = t.number_or("extended.w_sa", 0.008);
    if (c.w_sa < 0.0) throw ConfigError(source_name + ": extended.w_sa must be >= 0");
    c.use_cop_curve = t.flag_or("extended.use_cop_curve", true);
    c.warmup_s = t.number_or("extended.warmup_s", 86400.0);
    c.recovery_tol_k = t.number_or("extended.recovery_tol_k", 0.005);
    c.recovery_hold_s = t.number_or("extended.recovery_hold_s", 600.0);
    c.recovery_cap_s = t.number_or("extended.recovery_cap_s", 172800.0);
    if (!(c.recovery_tol_k > 0.0) || !(c.recovery_hold_s >= 0.0) || !(c.recovery_cap_s > 0.0) ||
        c.warmup_s < 0.0)
        throw ConfigError(source_name + ": extended recovery/warmup settings must be positive");

    const std::string kind = t.text_or("weather.kind", "constant");
    if (kind == "constant") {
        c.weather.kind = WeatherSpec::Kind::constant;
    } else if (kind == "synthetic") {
        c.weather.kind = WeatherSpec::Kind::synthetic;
        c.weather.t_mean_f = t.number("weather.t_mean_f");
        c.weather.t_amp_f = t.number("weather.t_amp_f");
        c.weather.w_mean = t.number_or("weather.w_mean", c.w_oa);
        c.weather.w_amp = t.number_or("weather.w_amp", 0.0);
        c.weather.period_s = t.number_or("weather.period_s", 86400.0);
        if (!(c.weather.period_s > 0.0))
            throw ConfigError(source_name + ": weather.period_s must be > 0");
    } else if (kind == "file") {
        c.weather.kind = WeatherSpec::Kind::file;
        c.weather.path = t.text("weather.path");
    } else {
        throw ConfigError(source_name +
                          ": weather.kind must be \"constant\", \"synthetic\", or \"file\"");
    }

    if (c.model == Model::extended && c.sweep && c.sweep->variable != SweepSpec::Variable::n)
        throw ConfigError(source_name + ": the extended model only sweeps over n");

    t.require_all_used();
    return c;
}

BaselinePoint ScenarioConfig::baseline() const {
    return solve_baseline(t_b, m_a_b_kg_s, q_x_w, building, hvac, ambient(), consts);
}

AmbientConditions ScenarioConfig::ambient() const { return {t_oa, q_x_w, w_oa}; }

VesCoefficients ScenarioConfig::coefficients(const BaselinePoint& bp) const {
    return ves_coefficients(bp, building, hvac, ambient(), consts);
}

ScheduleSpec ScenarioConfig::schedule(const BaselinePoint& bp) const {
    if (!has_schedule) throw ConfigError("scenario has no [schedule] block");
    ScheduleSpec s;
    s.delta_p = std::isfinite(delta_p_w) ? delta_p_w : delta_p_fraction * bp.p_hvac_b;
    s.t_p = t_p_s;
    s.n_cycles = n_cycles;
    s.phase = phase;
    s.validate();
    return s;
}

ScheduleSpec ScenarioConfig::sweep_schedule(const BaselinePoint& bp, double x) const {
    if (!sweep) throw ConfigError("scenario has no [sweep] block");
    if (!has_schedule) throw ConfigError("scenario has no [schedule] block");
    ScheduleSpec s;
    s.delta_p = std::isfinite(delta_p_w) ? delta_p_w : delta_p_fraction * bp.p_hvac_b;
    s.t_p = t_p_s;
    s.n_cycles = n_cycles;
    s.phase = phase;
    switch (sweep->variable) {
        case SweepSpec::Variable::t_p: s.t_p = x; break;
        case SweepSpec::Variable::delta_p: s.delta_p = x; break;
        case SweepSpec::Variable::n: s.n_cycles = static_cast<int>(std::llround(x)); break;
        case SweepSpec::Variable::r_oa: break;  // swept field lives in HvacParams
    }
    s.validate();
    return s;
}

ExtendedModel ScenarioConfig::extended_model(const BaselinePoint& bp) const {
    ExtendedModel m;
    m.bld = ext_building;
    m.hvac = hvac;
    m.consts = consts;
    m.loads = {bp.q_x, omega_x_kg_s, w_sa};
    m.use_cop_curve = use_cop_curve;
    return m;
}

ExtendedRunConfig ScenarioConfig::extended_run(const BaselinePoint& bp) const {
    ExtendedRunConfig r;
    r.dt = dt_s;
    r.warmup = warmup_s;
    r.recovery_tol = recovery_tol_k;
    r.recovery_hold = recovery_hold_s;
    r.recovery_cap = recovery_cap_s;
    r.gains.kp = kp;
    r.gains.ki = ki;
    r.gains.m_ff = bp.m_a_b;
    r.gains.m_max = std::isfinite(m_max_kg_s) ? m_max_kg_s : 4.0 * bp.m_a_b;
    r.setpoint_k = t_b.kelvin();
    r.comfort_low_k = building.comfort_low.kelvin();
    r.comfort_high_k = building.comfort_high.kelvin();
    return r;
}

WeatherSeries ScenarioConfig::weather_series() const {
    switch (weather.kind) {
        case WeatherSpec::Kind::constant:
            return WeatherSeries::constant(t_oa, w_oa);
        case WeatherSpec::Kind::synthetic:
            return WeatherSeries::synthetic_diurnal(weather.t_mean_f, weather.t_amp_f,
                                                    weather.w_mean, weather.w_amp,
                                                    weather.period_s);
        case WeatherSpec::Kind::file:
            return WeatherSeries::from_csv_file(weather.path);
    }
    return WeatherSeries::constant(t_oa, w_oa);
}

}  // namespace vesim
