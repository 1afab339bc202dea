#pragma once

#include "vesim/hvac_model.hpp"

namespace vesim {

// Coefficients of the deviation model around the baseline operating point:
//   power:  p~ = a m~ + b T~ + c m~ T~ + d m~^2
//   zone:   dT~/dt = -alpha T~ - beta m~ - gamma T~ m~
// For r_oa = 1 the power deviation is temperature-free (b = c = 0 exactly).
struct VesCoefficients {
    double a;       // [W/(kg/s)]
    double b;       // [W/K]
    double c;       // [W/((kg/s) K)]
    double d;       // [W/(kg/s)^2]
    double alpha;   // [1/s]
    double beta;    // [K/s per kg/s]
    double gamma;   // [1/s per kg/s]
    double m_a_b;      // baseline airflow [kg/s]
    double p_hvac_b;   // baseline electric power [W]
    double r_oa;       // outside-air fraction the coefficients were built at
};

VesCoefficients ves_coefficients(const BaselinePoint& base, const BuildingParams& b,
                                 const HvacParams& h, const AmbientConditions& amb,
                                 const PhysicalConstants& k);

// Airflow deviation m~ that realizes power deviation p_tilde at zone
// deviation t_tilde: the root of d m~^2 + (a + c T~) m~ + (b T~ - p~) = 0
// continuous with m~ = 0 at p~ = 0. Discharging is capped strictly below the
// baseline power; the chosen root must keep total airflow positive.
double airflow_for_power(double p_tilde, double t_tilde, const VesCoefficients& v);

enum class Mode { charge, discharge };

// Square-wave amplitude solved into the two half-cycle airflow deviations and
// their steady-state temperature deviations. Valid for r_oa = 1.
struct ChargeDischargeFlows {
    double delta_p;    // amplitude [W]
    double delta_m_c;  // charging airflow increase [kg/s]
    double delta_m_d;  // discharging airflow decrease (positive) [kg/s]
    double t_c_ss;     // charging steady-state deviation  (< 0) [K]
    double t_d_ss;     // discharging steady-state deviation (> 0) [K]

    double rate(Mode m, const VesCoefficients& v) const {
        return m == Mode::charge ? v.alpha + v.gamma * delta_m_c
                                 : v.alpha - v.gamma * delta_m_d;
    }
    double steady_state(Mode m) const { return m == Mode::charge ? t_c_ss : t_d_ss; }
};

ChargeDischargeFlows charge_discharge_flows(double delta_p, const VesCoefficients& v);

// Exact one-mode step of the deviation dynamics:
//   T~(t0 + dur) = T_ss + (T~(t0) - T_ss) exp(-lambda dur).
double lti_step(double t_tilde0, double duration, Mode mode,
                const VesCoefficients& v, const ChargeDischargeFlows& f);

enum class Phase { up_down, down_up };

// Zone deviation after one full square-wave period (two half-cycles of t_p),
// starting from T~ = 0: composition of the two exact mode steps.
double t_tilde_after_one_period(Phase phase, double t_p, const VesCoefficients& v,
                                const ChargeDischargeFlows& f);

// Same quantity through the expanded closed form (independent arithmetic
// path; used to cross-check the composition).
double t_tilde_after_one_period_closed(Phase phase, double t_p, const VesCoefficients& v,
                                       const ChargeDischargeFlows& f);

// Sign of the end-of-period deviation predicted by the first-order (small
// rate-times-duration) expansion: +1, 0, or -1.
int taylor_sign_prediction(Phase phase, double t_p, const VesCoefficients& v,
                           const ChargeDischargeFlows& f);

// Largest |T~| reachable by any square-wave schedule started at T~ = 0:
// max(|t_c_ss|, t_d_ss) = t_d_ss.
double temperature_bound(const ChargeDischargeFlows& f);

}  // namespace vesim
