#pragma once

#include <utility>
#include <vector>

#include "vesim/ves_analytic.hpp"

namespace vesim {

// Square-wave flexibility schedule: n_cycles periods of 2 t_p, each period
// split into a +delta_p and a -delta_p half in the order given by phase.
// delta_p = 0 is the degenerate zero-energy schedule.
struct ScheduleSpec {
    double delta_p = 0.0;  // amplitude [W], >= 0
    double t_p = 1800.0;   // half-period [s], > 0
    int n_cycles = 1;      // >= 1
    Phase phase = Phase::down_up;

    void validate() const {
        if (!(std::isfinite(delta_p) && delta_p >= 0.0))
            throw ConfigError("schedule amplitude must be >= 0");
        if (!(std::isfinite(t_p) && t_p > 0.0)) throw ConfigError("schedule half-period must be > 0");
        if (n_cycles < 1) throw ConfigError("schedule must contain at least one cycle");
    }
};

enum class RecoveryMode { none, charge, discharge };

const char* to_string(RecoveryMode m);
const char* to_string(Phase p);

// Outcome of a complete service interval (schedule + recovery to T~ = 0).
struct RteResult {
    double t_c = 0.0;        // total charging time [s]
    double t_d = 0.0;        // total discharging time [s]
    double t_recov = 0.0;    // recovery duration [s]
    RecoveryMode recovery_mode = RecoveryMode::none;
    double eta_rt = 1.0;     // round-trip efficiency
    double t_tilde_end = 0.0;    // zone deviation at schedule end, pre-recovery [K]
    double e_charge = 0.0;       // energy drawn above baseline [J]
    double e_discharge = 0.0;    // energy returned below baseline [J]
    double eta_energy = 1.0;     // efficiency recomputed from the energy integrals
    bool zero_energy = false;    // degenerate delta_p = 0 schedule
    bool comfort_ok = true;      // zone stayed inside the comfort band
};

// Sampled deviation-coordinate trajectory.
struct TracePoint {
    double t;        // [s]
    double t_tilde;  // zone deviation [K]
    double m_tilde;  // airflow deviation [kg/s]
    double p_tilde;  // power deviation [W]
    double soc;      // state of charge (may leave [0,1] when comfort is violated)
};

struct AnalyticTrace {
    std::vector<TracePoint> points;
};

// Absolute-temperature frame for SoC emission and comfort checks.
struct DeviationFrame {
    double t_b_k;  // baseline zone temperature [K]
    double t_l_k;  // comfort band low edge [K]
    double t_h_k;  // comfort band high edge [K]

    double soc(double t_tilde) const { return (t_h_k - (t_b_k + t_tilde)) / (t_h_k - t_l_k); }
    double lo() const { return t_l_k - t_b_k; }  // comfort band in deviation coordinates
    double hi() const { return t_h_k - t_b_k; }
};

struct RunOptions {
    double dt = 10.0;            // trace sampling / integration step [s]
    bool strict_comfort = false; // throw ComfortViolation instead of flagging
    bool with_trace = true;
};

struct RecoveryResult {
    double t = 0.0;
    RecoveryMode mode = RecoveryMode::none;
};

// Half-period at which the first-order end-of-period deviation of a
// discharge-first square wave changes sign: ln(delta_m_d/delta_m_c) / rate_c.
double critical_half_period(const VesCoefficients& v, const ChargeDischargeFlows& f);

// Time to steer the zone deviation back to zero at amplitude delta_p, in the
// mode implied by the sign of t_end (warm zone -> charge, cool -> discharge).
// |t_end| <= 1e-12 K short-circuits to (0, none).
RecoveryResult recovery_time(double t_end, const VesCoefficients& v,
                             const ChargeDischargeFlows& f);

// Recovery time evaluated at the worst deviation any schedule can reach
// (the temperature_bound), both signs; used as the 1/n convergence envelope.
double max_recovery_time(const VesCoefficients& v, const ChargeDischargeFlows& f);

// Closed-form run of a square-wave schedule (requires r_oa = 1 coefficients).
std::pair<AnalyticTrace, RteResult> run_square_wave(const ScheduleSpec& s,
                                                    const VesCoefficients& v,
                                                    const DeviationFrame& frame,
                                                    const RunOptions& opts = {});

// Numeric run of the same schedule on the single-zone deviation model with
// the airflow re-solved from (p~, T~) at every integrator stage. Works for
// any outside-air fraction; recovery integrates at +-delta_p until the
// deviation crosses zero.
std::pair<AnalyticTrace, RteResult> run_square_wave_numeric(const ScheduleSpec& s,
                                                            const VesCoefficients& v,
                                                            const DeviationFrame& frame,
                                                            const RunOptions& opts = {});

struct RtePoint {
    double x;        // swept value (t_p, n, delta_p, or r_oa)
    double eta_rt;
    double t_recov;
    RecoveryMode recovery_mode;
};

// Efficiency as a function of the number of cycles, n = 1..n_max, sharing one
// incremental pass over the period map.
std::vector<RtePoint> rte_vs_n(const ScheduleSpec& s, int n_max, const VesCoefficients& v,
                               const DeviationFrame& frame);

// Efficiency of an n_cycles run as a function of the half-period.
std::vector<RtePoint> rte_vs_tp(const ScheduleSpec& s, const std::vector<double>& tp_grid,
                                const VesCoefficients& v, const DeviationFrame& frame,
                                bool numeric = false, double dt = 10.0);

// 60 log-spaced half-periods spanning [60 s, 18000 s].
std::vector<double> default_tp_grid();

}  // namespace vesim
