#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "vesim/rte_engine.hpp"

namespace vesim {

// Chiller efficiency versus outdoor temperature: linear between 60 F (4.0)
// and 100 F (3.0), clamped outside.
double cop_model(Temperature t_oa);

// Two-node envelope (zone air + wall mass) with a moist-air zone balance.
struct ExtendedBuildingParams {
    double c_z;      // zone air capacitance [J/K]
    double c_w;      // wall capacitance [J/K]
    double r_z;      // outdoor-to-wall resistance [K/W]
    double r_w;      // wall-to-zone resistance [K/W]
    double volume;   // zone volume [m^3]
    double p_da;     // dry-air partial pressure [Pa]
    bool pin_wall = false;         // wall node held at its static relation
    bool freeze_humidity = false;  // humidity state held constant

    void validate() const {
        if (!(c_z > 0.0 && c_w > 0.0)) throw ConfigError("extended capacitances must be > 0");
        if (!(r_z > 0.0 && r_w > 0.0)) throw ConfigError("extended resistances must be > 0");
        if (!(volume > 0.0)) throw ConfigError("zone volume must be > 0");
        if (!(p_da > 0.0)) throw ConfigError("dry-air pressure must be > 0");
    }
};

// Exogenous zone loads (sensible heat, vapor generation) and the supply-air
// humidity the coil delivers.
struct ZoneLoads {
    double q_x = 0.0;      // [W]
    double omega_x = 0.0;  // internal vapor generation [kg/s]
    double w_sa = 0.008;   // supply-air humidity ratio
};

struct ExtendedState {
    double t_zone_k;
    double t_wall_k;
    double w_zone;
};

struct WeatherPoint {
    double t_oa_k;
    double w_oa;
};

struct WeatherSample {
    double t_s;
    double t_oa_k;
    double w_oa;
};

// Outdoor boundary conditions over time: constant, synthetic diurnal
// sinusoid, or sampled records with linear interpolation (clamped to the
// first/last sample outside the covered range).
class WeatherSeries {
  public:
    static WeatherSeries constant(Temperature t_oa, double w_oa);
    static WeatherSeries synthetic_diurnal(double t_oa_mean_f, double t_oa_amplitude_f,
                                           double w_oa_mean, double w_oa_amplitude,
                                           double period_s);
    static WeatherSeries from_samples(std::vector<WeatherSample> samples);
    // CSV with header "time_s,t_oa_f,w_oa" and strictly increasing time.
    static WeatherSeries from_csv_file(const std::string& path);

    WeatherPoint at(double t) const;

  private:
    enum class Kind { constant, synthetic, sampled };
    Kind kind_ = Kind::constant;
    double t_oa_k_ = 299.81666666666666;
    double w_oa_ = 0.010;
    double t_mean_f_ = 80.0, t_amp_f_ = 10.0, w_mean_ = 0.010, w_amp_ = 0.002, period_s_ = 86400.0;
    std::vector<WeatherSample> samples_;
};

// Everything needed to evaluate the extended model at a state.
struct ExtendedModel {
    ExtendedBuildingParams bld;
    HvacParams hvac;           // fan fit, t_sa, r_oa; hvac.cop used only when !use_cop_curve
    PhysicalConstants consts;
    ZoneLoads loads;
    bool use_cop_curve = true;

    double cop_at(double t_oa_k) const {
        return use_cop_curve ? cop_model(Temperature::from_kelvin(t_oa_k)) : hvac.cop;
    }
};

// Moist-air electric power at airflow m_a: fan quadratic plus coil enthalpy
// drop over the outdoor/return mix, divided by the (weather-dependent) COP.
double extended_hvac_power(const ExtendedModel& m, double m_a, const ExtendedState& st,
                           const WeatherPoint& w);

// Right-hand side of the three state equations (d/dt of zone temperature,
// wall temperature, zone humidity ratio).
std::array<double, 3> extended_derivatives(const ExtendedModel& m, const ExtendedState& st,
                                           double m_a, const WeatherPoint& w);

// Static wall temperature implied by zero wall-node flux.
double pinned_wall_temperature(const ExtendedBuildingParams& b, double t_zone_k, double t_oa_k);

struct PiGains {
    double kp = 40.0;   // [(kg/s)/K]
    double ki = 0.1;    // [(kg/s)/(K s)]
    double m_ff = 0.0;  // feedforward airflow [kg/s]
    double m_max = 10.0;
};

// Proportional-integral climate controller with conditional integration:
// the integrator freezes while the command is clamped to [0, m_max].
class PiController {
  public:
    PiController(const PiGains& g, double setpoint_k) : g_(g), setpoint_k_(setpoint_k) {}

    double command(double t_zone_k, double dt) {
        const double e = t_zone_k - setpoint_k_;
        const double raw = g_.m_ff + g_.kp * e + g_.ki * integral_;
        if (raw >= 0.0 && raw <= g_.m_max) integral_ += e * dt;
        return std::clamp(raw, 0.0, g_.m_max);
    }

    double integral() const { return integral_; }

  private:
    PiGains g_;
    double setpoint_k_;
    double integral_ = 0.0;
};

struct VesCommand {
    double m_a = 0.0;
    bool saturated = false;  // no feasible root; clamped to the nearest bound
};

// Airflow that makes the moist-air power equal p_cmd at the current state,
// choosing the branch continuous with the baseline airflow; infeasible
// commands saturate and are flagged.
VesCommand ves_airflow_for_power(const ExtendedModel& m, double p_cmd, const ExtendedState& st,
                                 const WeatherPoint& w, double m_max);

struct SimTraceRow {
    double t_s;
    double t_zone_k;
    double t_wall_k;
    double w_zone;
    double m_a_kg_s;
    double p_hvac_w;
    double p_tilde_w;
    double soc;
};

struct SimTrace {
    std::vector<SimTraceRow> rows;
};

using AirflowCommand = std::function<double(double t, const ExtendedState&)>;

// Fixed-step RK4 over [t0, t0 + horizon] with the commanded airflow held
// constant within each step and weather interpolated at stage times. Rows are
// emitted at every step boundary; baseline_power (if given, one entry per
// row) turns the p_tilde column into p_hvac - baseline.
SimTrace integrate(const ExtendedModel& m, const WeatherSeries& weather,
                   const AirflowCommand& controller, ExtendedState init, double t0,
                   double horizon, double dt, const DeviationFrame& frame,
                   const std::vector<double>* baseline_power = nullptr);

struct ExtendedRunConfig {
    double dt = 10.0;
    double warmup = 86400.0;         // [s] climate-controlled settling before t = 0
    double recovery_tol = 0.005;     // [K]
    double recovery_hold = 600.0;    // [s] tolerance must hold this long
    double recovery_cap = 172800.0;  // [s] NoConvergence beyond this
    PiGains gains;                   // m_ff should be the baseline airflow
    double setpoint_k = 295.37222222222221;
    double comfort_low_k = 294.26111111111112;
    double comfort_high_k = 296.48333333333335;
};

struct ExtendedRteOutcome {
    SimTrace trace;  // flexibility pass + recovery
    RteResult result;
    int saturation_events = 0;
};

// Three-pass efficiency measurement: (1) climate-controlled baseline power
// trajectory, (2) power-tracking pass following baseline + square wave from
// the same initial state, (3) climate-controlled recovery until the zone
// holds the setpoint. Efficiency is the ratio of discharged to charged
// energy of p_tilde = p_hvac - p_baseline over the whole interval.
ExtendedRteOutcome run_extended_rte(const ExtendedModel& m, const WeatherSeries& weather,
                                    const ScheduleSpec& schedule, const ExtendedRunConfig& cfg);

// Efficiency versus cycle count n = 1..n_max, sharing the baseline and
// flexibility passes and re-running only the recovery per n.
std::vector<RtePoint> extended_rte_vs_n(const ExtendedModel& m, const WeatherSeries& weather,
                                        const ScheduleSpec& schedule, int n_max,
                                        const ExtendedRunConfig& cfg);

}  // namespace vesim
