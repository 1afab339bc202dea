#include "vesim/ves_analytic.hpp"

#include <cmath>
#include <string>

namespace vesim {

VesCoefficients ves_coefficients(const BaselinePoint& base, const BuildingParams& b,
                                 const HvacParams& h, const AmbientConditions& amb,
                                 const PhysicalConstants& k) {
    VesCoefficients v;
    v.a = 2.0 * h.alpha_1f * base.m_a_b + h.alpha_2f +
          k.c_pa * (h.r_oa * amb.t_oa.kelvin() + (1.0 - h.r_oa) * base.t_b.kelvin() -
                    h.t_sa.kelvin()) / h.cop;
    v.b = k.c_pa * base.m_a_b * (1.0 - h.r_oa) / h.cop;
    v.c = k.c_pa * (1.0 - h.r_oa) / h.cop;
    v.d = h.alpha_1f;
    v.alpha = (b.r_th * k.c_pa * base.m_a_b + 1.0) / (b.r_th * b.c_th);
    v.beta = k.c_pa * (base.t_b.kelvin() - h.t_sa.kelvin()) / b.c_th;
    v.gamma = k.c_pa / b.c_th;
    v.m_a_b = base.m_a_b;
    v.p_hvac_b = base.p_hvac_b;
    v.r_oa = h.r_oa;

    if (!(v.a > 0.0))
        throw ModelError("power-curve slope a must be > 0 at the baseline, got " + std::to_string(v.a));
    if (!(v.d > 0.0 && v.alpha > 0.0 && v.beta > 0.0 && v.gamma > 0.0))
        throw ModelError("deviation-model coefficients d, alpha, beta, gamma must be > 0");
    return v;
}

double airflow_for_power(double p_tilde, double t_tilde, const VesCoefficients& v) {
    if (p_tilde < 0.0 && !(-p_tilde < v.p_hvac_b))
        throw InfeasiblePower("discharge amplitude " + std::to_string(-p_tilde) +
                              " W must stay strictly below baseline power " +
                              std::to_string(v.p_hvac_b) + " W");
    const double slope = v.a + v.c * t_tilde;           // linear coefficient at this T~
    const double q = p_tilde - v.b * t_tilde;           // effective power target
    const double disc = slope * slope + 4.0 * v.d * q;
    if (disc < 0.0)
        throw DiscriminantNegative("no real airflow deviation for power deviation " +
                                   std::to_string(p_tilde) + " W");
    // Root continuous with m~ = 0 at q = 0, written in the cancellation-free
    // form 2q / (slope + sqrt(disc)); exact zero at q = 0.
    const double m_tilde = 2.0 * q / (slope + std::sqrt(disc));
    if (!(v.m_a_b + m_tilde > 0.0))
        throw InfeasiblePower("requested power deviation drives total airflow to " +
                              std::to_string(v.m_a_b + m_tilde) + " kg/s");
    return m_tilde;
}

ChargeDischargeFlows charge_discharge_flows(double delta_p, const VesCoefficients& v) {
    if (!(std::isfinite(delta_p) && delta_p >= 0.0))
        throw ModelError("square-wave amplitude must be >= 0");
    if (v.r_oa != 1.0)
        throw ModelError("half-cycle flow algebra requires a 100% outside-air configuration");

    ChargeDischargeFlows f;
    f.delta_p = delta_p;
    if (delta_p == 0.0) {  // degenerate zero-amplitude schedule
        f.delta_m_c = f.delta_m_d = f.t_c_ss = f.t_d_ss = 0.0;
        return f;
    }
    if (!(delta_p < v.p_hvac_b))
        throw InfeasiblePower("amplitude must stay strictly below baseline power");

    f.delta_m_c = airflow_for_power(+delta_p, 0.0, v);
    f.delta_m_d = -airflow_for_power(-delta_p, 0.0, v);
    if (!(f.delta_m_d > f.delta_m_c && f.delta_m_c > 0.0))
        throw ModelError("half-cycle airflow ordering delta_m_d > delta_m_c > 0 violated");

    const double rate_c = v.alpha + v.gamma * f.delta_m_c;
    const double rate_d = v.alpha - v.gamma * f.delta_m_d;
    if (!(rate_d > 0.0))
        throw UnstableDischarge("discharging dynamics unstable: alpha <= gamma * delta_m_d");
    f.t_c_ss = -v.beta * f.delta_m_c / rate_c;
    f.t_d_ss = v.beta * f.delta_m_d / rate_d;
    return f;
}

double lti_step(double t_tilde0, double duration, Mode mode,
                const VesCoefficients& v, const ChargeDischargeFlows& f) {
    if (!(duration >= 0.0)) throw ModelError("step duration must be >= 0");
    if (duration == 0.0) return t_tilde0;
    const double t_ss = f.steady_state(mode);
    const double rate = f.rate(mode, v);
    return t_ss + (t_tilde0 - t_ss) * std::exp(-rate * duration);
}

double t_tilde_after_one_period(Phase phase, double t_p, const VesCoefficients& v,
                                const ChargeDischargeFlows& f) {
    const Mode first = phase == Phase::up_down ? Mode::charge : Mode::discharge;
    const Mode second = phase == Phase::up_down ? Mode::discharge : Mode::charge;
    return lti_step(lti_step(0.0, t_p, first, v, f), t_p, second, v, f);
}

double t_tilde_after_one_period_closed(Phase phase, double t_p, const VesCoefficients& v,
                                       const ChargeDischargeFlows& f) {
    const double rate_c = f.rate(Mode::charge, v);
    const double rate_d = f.rate(Mode::discharge, v);
    const double ec = std::exp(-rate_c * t_p);
    const double ed = std::exp(-rate_d * t_p);
    if (phase == Phase::up_down)
        return -v.beta * f.delta_m_c * ed * (1.0 - ec) / rate_c +
               v.beta * f.delta_m_d * (1.0 - ed) / rate_d;
    return v.beta * f.delta_m_d * ec * (1.0 - ed) / rate_d -
           v.beta * f.delta_m_c * (1.0 - ec) / rate_c;
}

int taylor_sign_prediction(Phase phase, double t_p, const VesCoefficients& v,
                           const ChargeDischargeFlows& f) {
    const double rate_c = f.rate(Mode::charge, v);
    const double rate_d = f.rate(Mode::discharge, v);
    const double value = phase == Phase::up_down
        ? t_p * v.beta * (f.delta_m_d - f.delta_m_c * std::exp(-rate_d * t_p))
        : t_p * v.beta * (f.delta_m_d * std::exp(-rate_c * t_p) - f.delta_m_c);
    return value > 0.0 ? 1 : (value < 0.0 ? -1 : 0);
}

double temperature_bound(const ChargeDischargeFlows& f) {
    return std::fmax(std::fabs(f.t_c_ss), std::fabs(f.t_d_ss));
}

}  // namespace vesim
