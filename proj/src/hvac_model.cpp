#include "vesim/hvac_model.hpp"

#include <cmath>
#include <string>

namespace vesim {

double fan_power(double m_a, const HvacParams& h) {
    if (!(m_a >= 0.0))
        throw NegativeAirflow("fan airflow must be >= 0, got " + std::to_string(m_a));
    return h.alpha_1f * m_a * m_a + h.alpha_2f * m_a;
}

double moist_air_enthalpy(const AirState& a, const PhysicalConstants& k) {
    a.validate();
    const double t_c = a.temperature.celsius();
    return k.c_pa * t_c + a.humidity_ratio * (k.g_h2o + k.c_pw * t_c);
}

double mixed_air_enthalpy(double h_oa, double h_zone, double r_oa) {
    if (!(r_oa >= 0.0 && r_oa <= 1.0))
        throw RatioOutOfRange("outside-air fraction must lie in [0, 1], got " + std::to_string(r_oa));
    return r_oa * h_oa + (1.0 - r_oa) * h_zone;
}

double chiller_power(double m_a, double h_ma, double h_sa, double cop, bool require_cooling) {
    if (!(m_a >= 0.0))
        throw NegativeAirflow("chiller airflow must be >= 0, got " + std::to_string(m_a));
    if (require_cooling && h_ma < h_sa)
        throw NegativeCooling("mixed-air enthalpy below supply-air enthalpy: coil would heat");
    return m_a * (h_ma - h_sa) / cop;
}

double hvac_power(double m_a, Temperature t_zone, const HvacParams& h,
                  const AmbientConditions& amb, const PhysicalConstants& k,
                  bool validate_cooling) {
    // Dry-air form: the coil enthalpy drop collapses to a temperature mix.
    const double t_mix_minus_sa = h.r_oa * amb.t_oa.kelvin() +
                                  (1.0 - h.r_oa) * t_zone.kelvin() - h.t_sa.kelvin();
    if (validate_cooling && t_mix_minus_sa < 0.0)
        throw NegativeCooling("mixed-air temperature below supply-air temperature");
    return fan_power(m_a, h) + m_a * k.c_pa * t_mix_minus_sa / h.cop;
}

BaselinePoint solve_baseline(Temperature t_b, double m_a_b, double q_x,
                             const BuildingParams& b, const HvacParams& h,
                             const AmbientConditions& amb, const PhysicalConstants& k) {
    b.validate();
    h.validate();
    k.validate();
    const bool have_m = std::isfinite(m_a_b);
    const bool have_q = std::isfinite(q_x);
    if (have_m == have_q)
        throw InfeasibleBaseline("provide exactly one of baseline airflow / exogenous load");
    if (!(t_b.kelvin() > h.t_sa.kelvin()))
        throw InfeasibleBaseline("baseline temperature must exceed supply-air temperature");

    const double dt_env = amb.t_oa.kelvin() - t_b.kelvin();  // envelope gain per 1/r_th
    const double dt_sup = t_b.kelvin() - h.t_sa.kelvin();    // cooling per kg/s per c_pa
    if (have_m) {
        if (!(m_a_b > 0.0)) throw InfeasibleBaseline("baseline airflow must be > 0");
        q_x = m_a_b * k.c_pa * dt_sup - dt_env / b.r_th;
    } else {
        m_a_b = (dt_env / b.r_th + q_x) / (k.c_pa * dt_sup);
        if (!(m_a_b > 0.0))
            throw InfeasibleBaseline("static heat balance needs nonpositive airflow: no cooling baseline");
    }

    BaselinePoint p;
    p.t_b = t_b;
    p.m_a_b = m_a_b;
    p.q_x = q_x;
    p.p_hvac_b = hvac_power(m_a_b, t_b, h, amb, k, /*validate_cooling=*/true);
    if (!(p.p_hvac_b > 0.0))
        throw InfeasibleBaseline("baseline electric power must be > 0, got " + std::to_string(p.p_hvac_b));

    const double resid = baseline_residual(p, b, h, amb, k);
    if (!(std::fabs(resid) < 1e-6))
        throw InfeasibleBaseline("baseline residual " + std::to_string(resid) + " W exceeds 1e-6 W");
    return p;
}

double baseline_residual(const BaselinePoint& p, const BuildingParams& b,
                         const HvacParams& h, const AmbientConditions& amb,
                         const PhysicalConstants& k) {
    return (amb.t_oa.kelvin() - p.t_b.kelvin()) / b.r_th + p.q_x +
           p.m_a_b * k.c_pa * (h.t_sa.kelvin() - p.t_b.kelvin());
}

}  // namespace vesim
