#pragma once

#include "vesim/units.hpp"

namespace vesim {

// Moist-air state of a zone or stream.
struct AirState {
    Temperature temperature;
    double humidity_ratio = 0.0;  // kg water / kg dry air

    void validate() const {
        if (!(std::isfinite(humidity_ratio) && humidity_ratio >= 0.0))
            throw ModelError("humidity ratio must be >= 0");
    }
};

// Boundary conditions seen by the zone.
struct AmbientConditions {
    Temperature t_oa;     // outside-air temperature
    double q_x = 0.0;     // exogenous heat load on the zone [W]
    double w_oa = 0.0;    // outside-air humidity ratio
};

// Operating point the flexibility service deviates around: zone temperature
// held at t_b by constant airflow m_a_b against exogenous load q_x.
struct BaselinePoint {
    Temperature t_b;
    double m_a_b;       // [kg/s]
    double q_x;         // [W]
    double p_hvac_b;    // electric power at the operating point [W]
};

// Supply-fan electric power, quadratic in airflow. m_a < 0 is rejected.
double fan_power(double m_a, const HvacParams& h);

// Specific enthalpy of moist air [J/kg dry air]. The psychrometric convention
// puts the zero at 0 degC dry air, so this formula works in Celsius.
double moist_air_enthalpy(const AirState& a, const PhysicalConstants& k);

// Enthalpy of the outside-air / return-air mix entering the cooling coil.
double mixed_air_enthalpy(double h_oa, double h_zone, double r_oa);

// Chiller electric power for cooling m_a kg/s from h_ma to h_sa.
// require_cooling enforces the cooling-only regime (h_ma >= h_sa).
double chiller_power(double m_a, double h_ma, double h_sa, double cop,
                     bool require_cooling = false);

// Total electric power (fan + chiller) in the dry-air approximation, where
// the coil enthalpy drop reduces to c_pa times a mixed-air temperature
// difference. validate_cooling rejects operating points outside the
// cooling-only regime.
double hvac_power(double m_a, Temperature t_zone, const HvacParams& h,
                  const AmbientConditions& amb, const PhysicalConstants& k,
                  bool validate_cooling = false);

// Solve the static zone heat balance
//   0 = (t_oa - t_b)/r_th + q_x + m_a_b c_pa (t_sa - t_b)
// for whichever of {m_a_b, q_x} is not given, then evaluate p_hvac_b.
// Exactly one of m_a_b/q_x must be provided (the other NaN).
BaselinePoint solve_baseline(Temperature t_b, double m_a_b, double q_x,
                             const BuildingParams& b, const HvacParams& h,
                             const AmbientConditions& amb, const PhysicalConstants& k);

// Residual of the static heat balance at a candidate operating point [W].
double baseline_residual(const BaselinePoint& p, const BuildingParams& b,
                         const HvacParams& h, const AmbientConditions& amb,
                         const PhysicalConstants& k);

}  // namespace vesim
