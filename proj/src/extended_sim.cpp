#include "vesim/extended_sim.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace vesim {

double cop_model(Temperature t_oa) {
    return std::clamp(5.5 - 0.025 * t_oa.fahrenheit(), 3.0, 4.0);
}

WeatherSeries WeatherSeries::constant(Temperature t_oa, double w_oa) {
    WeatherSeries w;
    w.kind_ = Kind::constant;
    w.t_oa_k_ = t_oa.kelvin();
    w.w_oa_ = w_oa;
    return w;
}

WeatherSeries WeatherSeries::synthetic_diurnal(double t_oa_mean_f, double t_oa_amplitude_f,
                                               double w_oa_mean, double w_oa_amplitude,
                                               double period_s) {
    if (!(period_s > 0.0)) throw ConfigError("weather period must be > 0");
    WeatherSeries w;
    w.kind_ = Kind::synthetic;
    w.t_mean_f_ = t_oa_mean_f;
    w.t_amp_f_ = t_oa_amplitude_f;
    w.w_mean_ = w_oa_mean;
    w.w_amp_ = w_oa_amplitude;
    w.period_s_ = period_s;
    return w;
}

WeatherSeries WeatherSeries::from_samples(std::vector<WeatherSample> samples) {
    if (samples.empty()) throw ConfigError("weather series needs at least one sample");
    for (std::size_t i = 1; i < samples.size(); ++i)
        if (!(samples[i].t_s > samples[i - 1].t_s))
            throw ConfigError("weather sample times must be strictly increasing (sample " +
                              std::to_string(i + 1) + ")");
    WeatherSeries w;
    w.kind_ = Kind::sampled;
    w.samples_ = std::move(samples);
    return w;
}

WeatherSeries WeatherSeries::from_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open weather file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("empty weather file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != "time_s,t_oa_f,w_oa")
        throw ConfigError("weather file must start with header \"time_s,t_oa_f,w_oa\", got \"" +
                          line + "\"");
    std::vector<WeatherSample> samples;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        double vals[3];
        for (int i = 0; i < 3; ++i) {
            if (!std::getline(row, cell, ','))
                throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
            try {
                std::size_t used = 0;
                vals[i] = std::stod(cell, &used);
                if (used != cell.size()) throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                throw ConfigError(path + ":" + std::to_string(line_no) + ": bad number \"" + cell + "\"");
            }
        }
        if (std::getline(row, cell, ','))
            throw ConfigError(path + ":" + std::to_string(line_no) + ": expected 3 columns");
        samples.push_back({vals[0], Temperature::from_fahrenheit(vals[1]).kelvin(), vals[2]});
    }
    try {
        return from_samples(std::move(samples));
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

WeatherPoint WeatherSeries::at(double t) const {
    switch (kind_) {
        case Kind::constant:
            return {t_oa_k_, w_oa_};
        case Kind::synthetic: {
            const double s = std::sin(2.0 * std::numbers::pi * t / period_s_);
            return {Temperature::from_fahrenheit(t_mean_f_ + t_amp_f_ * s).kelvin(),
                    w_mean_ + w_amp_ * s};
        }
        case Kind::sampled: {
            if (t <= samples_.front().t_s) return {samples_.front().t_oa_k, samples_.front().w_oa};
            if (t >= samples_.back().t_s) return {samples_.back().t_oa_k, samples_.back().w_oa};
            auto hi = std::upper_bound(samples_.begin(), samples_.end(), t,
                                       [](double x, const WeatherSample& s) { return x < s.t_s; });
            auto lo = hi - 1;
            const double u = (t - lo->t_s) / (hi->t_s - lo->t_s);
            return {lo->t_oa_k + u * (hi->t_oa_k - lo->t_oa_k), lo->w_oa + u * (hi->w_oa - lo->w_oa)};
        }
    }
    return {t_oa_k_, w_oa_};
}

double extended_hvac_power(const ExtendedModel& m, double m_a, const ExtendedState& st,
                           const WeatherPoint& w) {
    const AirState oa{Temperature::from_kelvin(w.t_oa_k), w.w_oa};
    const AirState zone{Temperature::from_kelvin(st.t_zone_k), st.w_zone};
    const AirState supply{m.hvac.t_sa, m.loads.w_sa};
    const double h_ma = mixed_air_enthalpy(moist_air_enthalpy(oa, m.consts),
                                           moist_air_enthalpy(zone, m.consts), m.hvac.r_oa);
    const double h_sa = moist_air_enthalpy(supply, m.consts);
    return fan_power(m_a, m.hvac) + chiller_power(m_a, h_ma, h_sa, m.cop_at(w.t_oa_k));
}

double pinned_wall_temperature(const ExtendedBuildingParams& b, double t_zone_k, double t_oa_k) {
    return (t_oa_k / b.r_z + t_zone_k / b.r_w) / (1.0 / b.r_z + 1.0 / b.r_w);
}

std::array<double, 3> extended_derivatives(const ExtendedModel& m, const ExtendedState& st,
                                           double m_a, const WeatherPoint& w) {
    const double t_wall = m.bld.pin_wall ? pinned_wall_temperature(m.bld, st.t_zone_k, w.t_oa_k)
                                         : st.t_wall_k;
    const double q_hvac = m_a * m.consts.c_pa * (m.hvac.t_sa.kelvin() - st.t_zone_k);
    const double d_t_zone = ((t_wall - st.t_zone_k) / m.bld.r_w + m.loads.q_x + q_hvac) / m.bld.c_z;
    const double d_t_wall = m.bld.pin_wall
        ? 0.0
        : ((w.t_oa_k - st.t_wall_k) / m.bld.r_z + (st.t_zone_k - st.t_wall_k) / m.bld.r_w) / m.bld.c_w;
    const double d_w = m.bld.freeze_humidity
        ? 0.0
        : (m.consts.r_g * st.t_zone_k / (m.bld.volume * m.bld.p_da)) *
              (m.loads.omega_x + m_a * (m.loads.w_sa - st.w_zone) / (1.0 + m.loads.w_sa));
    return {d_t_zone, d_t_wall, d_w};
}

namespace {

ExtendedState rk4_step(const ExtendedModel& m, const WeatherSeries& weather,
                       const ExtendedState& st, double m_a, double t, double h) {
    const auto add = [](const ExtendedState& s, const std::array<double, 3>& k, double f) {
        return ExtendedState{s.t_zone_k + f * k[0], s.t_wall_k + f * k[1], s.w_zone + f * k[2]};
    };
    const auto k1 = extended_derivatives(m, st, m_a, weather.at(t));
    const auto k2 = extended_derivatives(m, add(st, k1, h / 2.0), m_a, weather.at(t + h / 2.0));
    const auto k3 = extended_derivatives(m, add(st, k2, h / 2.0), m_a, weather.at(t + h / 2.0));
    const auto k4 = extended_derivatives(m, add(st, k3, h), m_a, weather.at(t + h));
    ExtendedState out{
        st.t_zone_k + (h / 6.0) * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
        st.t_wall_k + (h / 6.0) * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        st.w_zone + (h / 6.0) * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]),
    };
    if (out.w_zone < 0.0) out.w_zone = 0.0;  // humidity cannot go negative
    if (m.bld.pin_wall) out.t_wall_k = pinned_wall_temperature(m.bld, out.t_zone_k, weather.at(t + h).t_oa_k);
    if (!(std::isfinite(out.t_zone_k) && std::isfinite(out.t_wall_k) && std::isfinite(out.w_zone)))
        throw NonFiniteState("state became non-finite at t = " + std::to_string(t + h) + " s");
    return out;
}

}  // namespace

VesCommand ves_airflow_for_power(const ExtendedModel& m, double p_cmd, const ExtendedState& st,
                                 const WeatherPoint& w, double m_max) {
    const AirState oa{Temperature::from_kelvin(w.t_oa_k), w.w_oa};
    const AirState zone{Temperature::from_kelvin(st.t_zone_k), st.w_zone};
    const AirState supply{m.hvac.t_sa, m.loads.w_sa};
    const double h_ma = mixed_air_enthalpy(moist_air_enthalpy(oa, m.consts),
                                           moist_air_enthalpy(zone, m.consts), m.hvac.r_oa);
    const double h_sa = moist_air_enthalpy(supply, m.consts);
    // Power is A m^2 + B m with A = alpha_1f > 0; pick the branch through the
    // baseline operating point (the "+sqrt" root).
    const double A = m.hvac.alpha_1f;
    const double B = m.hvac.alpha_2f + (h_ma - h_sa) / m.cop_at(w.t_oa_k);
    const double disc = B * B + 4.0 * A * p_cmd;
    VesCommand cmd;
    if (disc < 0.0) {  // below the curve's minimum: saturate at the vertex
        cmd.m_a = std::clamp(-B / (2.0 * A), 0.0, m_max);
        cmd.saturated = true;
        return cmd;
    }
    const double root = B >= 0.0 ? (p_cmd == 0.0 ? 0.0 : 2.0 * p_cmd / (B + std::sqrt(disc)))
                                 : (-B + std::sqrt(disc)) / (2.0 * A);
    if (root < 0.0) {
        cmd.m_a = 0.0;
        cmd.saturated = true;
        return cmd;
    }
    cmd.m_a = root;
    if (cmd.m_a > m_max) {
        cmd.m_a = m_max;
        cmd.saturated = true;
    }
    return cmd;
}

SimTrace integrate(const ExtendedModel& m, const WeatherSeries& weather,
                   const AirflowCommand& controller, ExtendedState init, double t0,
                   double horizon, double dt, const DeviationFrame& frame,
                   const std::vector<double>* baseline_power) {
    if (!(dt > 0.0)) throw ConfigError("integration step must be > 0");
    if (!(horizon >= dt)) throw ConfigError("integration horizon must cover at least one step");
    m.bld.validate();
    m.hvac.validate();
    m.consts.validate();

    const auto steps = static_cast<std::size_t>(std::llround(horizon / dt));
    SimTrace trace;
    trace.rows.reserve(steps + 1);
    ExtendedState st = init;
    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = t0 + static_cast<double>(k) * dt;
        const double m_a = controller(t, st);
        if (!(m_a >= 0.0)) throw NegativeAirflow("controller commanded airflow " + std::to_string(m_a));
        const double p = extended_hvac_power(m, m_a, st, weather.at(t));
        SimTraceRow row;
        row.t_s = t;
        row.t_zone_k = st.t_zone_k;
        row.t_wall_k = st.t_wall_k;
        row.w_zone = st.w_zone;
        row.m_a_kg_s = m_a;
        row.p_hvac_w = p;
        row.p_tilde_w = baseline_power ? p - (*baseline_power)[k] : 0.0;
        row.soc = frame.soc(st.t_zone_k - frame.t_b_k);
        trace.rows.push_back(row);
        if (k < steps) st = rk4_step(m, weather, st, m_a, t, dt);
    }
    return trace;
}

namespace {

struct RecoveryOutcome {
    double duration = 0.0;
    double e_charge = 0.0;
    double e_discharge = 0.0;
    double t_c = 0.0;
    double t_d = 0.0;
};

// Climate-controlled return to the setpoint, accumulating the power deviation
// against the recorded baseline; stops once |T - setpoint| < tol has held for
// hold seconds, appending rows to trace when given.
RecoveryOutcome run_recovery(const ExtendedModel& m, const WeatherSeries& weather,
                             const ExtendedRunConfig& cfg, ExtendedState& st, double t_begin,
                             const std::vector<double>& p_base, std::size_t k_begin,
                             const DeviationFrame& frame, SimTrace* trace) {
    PiController pi(cfg.gains, cfg.setpoint_k);
    RecoveryOutcome out;
    // The caller's trace may already end with a row at t_begin recording the
    // previous regime's action; from t_begin on the recovery controller acts,
    // so that row is superseded to keep one row per instant.
    if (trace && !trace->rows.empty() &&
        std::fabs(trace->rows.back().t_s - t_begin) < 0.5 * cfg.dt)
        trace->rows.pop_back();
    double held = 0.0;
    std::size_t k = k_begin;
    while (true) {
        const double t = t_begin + out.duration;
        const double m_a = pi.command(st.t_zone_k, cfg.dt);
        const double p = extended_hvac_power(m, m_a, st, weather.at(t));
        if (k >= p_base.size())
            throw NoConvergence("recovery ran past the recorded baseline horizon");
        const double p_tilde = p - p_base[k];
        if (trace)
            trace->rows.push_back({t, st.t_zone_k, st.t_wall_k, st.w_zone, m_a, p, p_tilde,
                                   frame.soc(st.t_zone_k - frame.t_b_k)});
        if (p_tilde > 0.0) {
            out.e_charge += p_tilde * cfg.dt;
            out.t_c += cfg.dt;
        } else if (p_tilde < 0.0) {
            out.e_discharge += -p_tilde * cfg.dt;
            out.t_d += cfg.dt;
        }
        st = rk4_step(m, weather, st, m_a, t, cfg.dt);
        out.duration += cfg.dt;
        ++k;
        held = std::fabs(st.t_zone_k - cfg.setpoint_k) < cfg.recovery_tol ? held + cfg.dt : 0.0;
        if (held >= cfg.recovery_hold) break;
        if (out.duration > cfg.recovery_cap)
            throw NoConvergence("zone did not re-settle at the setpoint within the recovery cap");
    }
    if (trace) {
        const double t = t_begin + out.duration;
        const double m_a = pi.command(st.t_zone_k, cfg.dt);
        const double p = extended_hvac_power(m, m_a, st, weather.at(t));
        const double p_tilde = k < p_base.size() ? p - p_base[k] : 0.0;
        trace->rows.push_back({t, st.t_zone_k, st.t_wall_k, st.w_zone, m_a, p, p_tilde,
                               frame.soc(st.t_zone_k - frame.t_b_k)});
    }
    return out;
}

struct SharedPasses {
    ExtendedState settled;           // state after warmup, shared t = 0 start
    std::vector<double> p_base;      // baseline power per step over the full horizon
    SimTrace flex_trace;             // pass-2 trace over the schedule
    std::vector<ExtendedState> period_end_states;  // index n-1 -> state at n*2tp
    std::vector<double> ec_at_period, ed_at_period, tc_at_period, td_at_period;
    int saturation_events = 0;
};

SharedPasses run_shared_passes(const ExtendedModel& m, const WeatherSeries& weather,
                               const ScheduleSpec& schedule, int n_max,
                               const ExtendedRunConfig& cfg, const DeviationFrame& frame) {
    SharedPasses sp;
    const double sched_end = 2.0 * schedule.t_p * n_max;
    const double horizon = sched_end + cfg.recovery_cap + cfg.recovery_hold + cfg.dt;

    // Warmup: settle the climate controller before t = 0.
    ExtendedState st{cfg.setpoint_k,
                     pinned_wall_temperature(m.bld, cfg.setpoint_k, weather.at(-cfg.warmup).t_oa_k),
                     m.loads.w_sa};
    if (cfg.warmup > 0.0) {
        PiController pi(cfg.gains, cfg.setpoint_k);
        DeviationFrame f = frame;
        const AirflowCommand cmd = [&](double, const ExtendedState& s) {
            return pi.command(s.t_zone_k, cfg.dt);
        };
        SimTrace warm = integrate(m, weather, cmd, st, -cfg.warmup, cfg.warmup, cfg.dt, f);
        const SimTraceRow& last = warm.rows.back();
        st = {last.t_zone_k, last.t_wall_k, last.w_zone};
    }
    sp.settled = st;

    // Pass 1: climate-controlled baseline over the full horizon.
    {
        PiController pi(cfg.gains, cfg.setpoint_k);
        const AirflowCommand cmd = [&](double, const ExtendedState& s) {
            return pi.command(s.t_zone_k, cfg.dt);
        };
        SimTrace base = integrate(m, weather, cmd, st, 0.0, horizon, cfg.dt, frame);
        sp.p_base.reserve(base.rows.size());
        for (const auto& row : base.rows) sp.p_base.push_back(row.p_hvac_w);
    }

    // Pass 2: track baseline + square wave from the same initial state.
    {
        const auto sq = [&](double t) {
            if (t >= sched_end) return 0.0;
            const auto half = static_cast<long long>(std::floor(t / schedule.t_p));
            const bool first_half = half % 2 == 0;
            const bool up_first = schedule.phase == Phase::up_down;
            return (first_half == up_first) ? schedule.delta_p : -schedule.delta_p;
        };
        const AirflowCommand cmd = [&](double t, const ExtendedState& s) {
            const auto k = static_cast<std::size_t>(std::llround(t / cfg.dt));
            const VesCommand c = ves_airflow_for_power(m, sp.p_base[k] + sq(t), s, weather.at(t),
                                                       cfg.gains.m_max);
            sp.saturation_events += c.saturated ? 1 : 0;
            return c.m_a;
        };
        sp.flex_trace = integrate(m, weather, cmd, st, 0.0, sched_end, cfg.dt, frame, &sp.p_base);
    }

    // Cumulative energies and period-end states off the pass-2 trace.
    const auto period_steps = static_cast<std::size_t>(std::llround(2.0 * schedule.t_p / cfg.dt));
    double ec = 0.0, ed = 0.0, tc = 0.0, td = 0.0;
    for (std::size_t k = 0; k + 1 < sp.flex_trace.rows.size(); ++k) {
        const double p_tilde = sp.flex_trace.rows[k].p_tilde_w;
        if (p_tilde > 0.0) {
            ec += p_tilde * cfg.dt;
            tc += cfg.dt;
        } else if (p_tilde < 0.0) {
            ed += -p_tilde * cfg.dt;
            td += cfg.dt;
        }
        if ((k + 1) % period_steps == 0) {
            const SimTraceRow& r = sp.flex_trace.rows[k + 1];
            sp.period_end_states.push_back({r.t_zone_k, r.t_wall_k, r.w_zone});
            sp.ec_at_period.push_back(ec);
            sp.ed_at_period.push_back(ed);
            sp.tc_at_period.push_back(tc);
            sp.td_at_period.push_back(td);
        }
    }
    return sp;
}

}  // namespace

ExtendedRteOutcome run_extended_rte(const ExtendedModel& m, const WeatherSeries& weather,
                                    const ScheduleSpec& schedule, const ExtendedRunConfig& cfg) {
    schedule.validate();
    const DeviationFrame frame{cfg.setpoint_k, cfg.comfort_low_k, cfg.comfort_high_k};
    ExtendedRteOutcome out;

    if (schedule.delta_p == 0.0) {
        out.result.zero_energy = true;
        PiController pi(cfg.gains, cfg.setpoint_k);
        const AirflowCommand cmd = [&](double, const ExtendedState& s) {
            return pi.command(s.t_zone_k, cfg.dt);
        };
        ExtendedState st{cfg.setpoint_k,
                         pinned_wall_temperature(m.bld, cfg.setpoint_k, weather.at(0.0).t_oa_k),
                         m.loads.w_sa};
        out.trace = integrate(m, weather, cmd, st, 0.0, 2.0 * schedule.t_p * schedule.n_cycles,
                              cfg.dt, frame);
        return out;
    }

    SharedPasses sp = run_shared_passes(m, weather, schedule, schedule.n_cycles, cfg, frame);
    out.trace = std::move(sp.flex_trace);
    out.saturation_events = sp.saturation_events;

    const std::size_t n = static_cast<std::size_t>(schedule.n_cycles);
    ExtendedState st = sp.period_end_states[n - 1];
    const double sched_end = 2.0 * schedule.t_p * schedule.n_cycles;
    out.result.t_tilde_end = st.t_zone_k - cfg.setpoint_k;
    out.result.recovery_mode = std::fabs(out.result.t_tilde_end) <= cfg.recovery_tol
        ? RecoveryMode::none
        : (out.result.t_tilde_end > 0.0 ? RecoveryMode::charge : RecoveryMode::discharge);

    const auto k_begin = static_cast<std::size_t>(std::llround(sched_end / cfg.dt));
    const RecoveryOutcome rec = run_recovery(m, weather, cfg, st, sched_end, sp.p_base, k_begin,
                                             frame, &out.trace);
    out.result.t_recov = rec.duration;
    out.result.e_charge = sp.ec_at_period[n - 1] + rec.e_charge;
    out.result.e_discharge = sp.ed_at_period[n - 1] + rec.e_discharge;
    out.result.t_c = sp.tc_at_period[n - 1] + rec.t_c;
    out.result.t_d = sp.td_at_period[n - 1] + rec.t_d;
    out.result.eta_rt = out.result.e_discharge / out.result.e_charge;
    out.result.eta_energy = out.result.eta_rt;
    for (const auto& row : out.trace.rows)
        if (row.t_zone_k < cfg.comfort_low_k - 1e-12 || row.t_zone_k > cfg.comfort_high_k + 1e-12)
            out.result.comfort_ok = false;
    return out;
}

std::vector<RtePoint> extended_rte_vs_n(const ExtendedModel& m, const WeatherSeries& weather,
                                        const ScheduleSpec& schedule, int n_max,
                                        const ExtendedRunConfig& cfg) {
    schedule.validate();
    if (n_max < 1) throw ConfigError("cycle sweep needs n_max >= 1");
    std::vector<RtePoint> out;
    out.reserve(static_cast<std::size_t>(n_max));
    if (schedule.delta_p == 0.0) {
        for (int n = 1; n <= n_max; ++n)
            out.push_back({static_cast<double>(n), 1.0, 0.0, RecoveryMode::none});
        return out;
    }
    const DeviationFrame frame{cfg.setpoint_k, cfg.comfort_low_k, cfg.comfort_high_k};
    SharedPasses sp = run_shared_passes(m, weather, schedule, n_max, cfg, frame);
    for (int n = 1; n <= n_max; ++n) {
        ExtendedState st = sp.period_end_states[static_cast<std::size_t>(n - 1)];
        const double dev = st.t_zone_k - cfg.setpoint_k;
        const double sched_end = 2.0 * schedule.t_p * n;
        const auto k_begin = static_cast<std::size_t>(std::llround(sched_end / cfg.dt));
        const RecoveryOutcome rec = run_recovery(m, weather, cfg, st, sched_end, sp.p_base,
                                                 k_begin, frame, nullptr);
        const double ec = sp.ec_at_period[static_cast<std::size_t>(n - 1)] + rec.e_charge;
        const double ed = sp.ed_at_period[static_cast<std::size_t>(n - 1)] + rec.e_discharge;
        const RecoveryMode mode = std::fabs(dev) <= cfg.recovery_tol
            ? RecoveryMode::none
            : (dev > 0.0 ? RecoveryMode::charge : RecoveryMode::discharge);
        out.push_back({static_cast<double>(n), ed / ec, rec.duration, mode});
    }
    return out;
}

}  // namespace vesim
