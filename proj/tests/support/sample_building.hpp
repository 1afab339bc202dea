#pragma once

// Shared fixture: the auditorium-scale demonstration zone used across the
// test suites (100% outside air unless a test overrides r_oa), plus expected
// values frozen from an independent arbitrary-precision evaluation of the
// defining formulas (mpmath, 50 digits, rounded to nearest double).

#include <limits>

#include "vesim/hvac_model.hpp"
#include "vesim/rte_engine.hpp"
#include "vesim/units.hpp"
#include "vesim/ves_analytic.hpp"

namespace sample {

inline vesim::PhysicalConstants constants() { return {}; }  // stock psychrometric values

inline vesim::BuildingParams building() {
    vesim::BuildingParams b;
    b.r_th = 1.3e-3;
    b.c_th = 3.4e7;
    b.comfort_low = vesim::Temperature::from_fahrenheit(70.0);
    b.comfort_high = vesim::Temperature::from_fahrenheit(74.0);
    b.validate();
    return b;
}

inline vesim::HvacParams hvac(double r_oa = 1.0) {
    vesim::HvacParams h;
    h.alpha_1f = 662.0;
    h.alpha_2f = -576.0;
    h.cop = 3.5;
    h.t_sa = vesim::Temperature::from_fahrenheit(55.0);
    h.r_oa = r_oa;
    h.m_a_min = 0.9;  // above the fan-curve dip at 576/662
    h.validate();
    return h;
}

inline vesim::Temperature setpoint() { return vesim::Temperature::from_fahrenheit(72.0); }

inline vesim::AmbientConditions ambient() {
    return {vesim::Temperature::from_fahrenheit(80.0), 18148.718803418804, 0.010};
}

inline vesim::BaselinePoint baseline(double r_oa = 1.0) {
    return vesim::solve_baseline(setpoint(), 2.27, std::numeric_limits<double>::quiet_NaN(),
                                 building(), hvac(r_oa), ambient(), constants());
}

inline vesim::VesCoefficients coefficients(double r_oa = 1.0) {
    return vesim::ves_coefficients(baseline(r_oa), building(), hvac(r_oa), ambient(), constants());
}

inline vesim::DeviationFrame frame() {
    return {setpoint().kelvin(), building().comfort_low.kelvin(),
            building().comfort_high.kelvin()};
}

// Frozen expected values. Sources: direct evaluation of the defining
// formulas at 50-digit precision; root finds by bisection at the same
// precision. Comments give the defining expression.
namespace expected {

inline constexpr double kTsaK = 285.9277777777778;     // 55 F
inline constexpr double kTlK = 294.2611111111111;      // 70 F
inline constexpr double kTbK = 295.3722222222222;      // 72 F
inline constexpr double kThK = 296.48333333333335;     // 74 F
inline constexpr double kToaK = 299.81666666666666;    // 80 F
inline constexpr double kDelta17F = 9.444444444444445; // 17 F difference = 85/9 K

inline constexpr double kFanAtBase = 2103.6998;            // 662*2.27^2 - 576*2.27
inline constexpr double kChillerAtBase = 9061.984126984127;  // 2.27*1006*(25 F)/3.5
inline constexpr double kPHvacB = 11165.683926984128;      // fan + chiller
inline constexpr double kQx = 18148.718803418804;          // back-solved envelope load
inline constexpr double kDeltaP02 = 2233.1367853968254;    // 0.2 * kPHvacB

inline constexpr double kA = 6421.543492063492;            // 2*662*2.27 - 576 + 1006*(25F)/3.5
inline constexpr double kD = 662.0;
inline constexpr double kAlpha = 8.978972850678733e-05;    // (R*c_pa*m_ab + 1)/(R*C)
inline constexpr double kBeta = 0.00027944444444444447;    // c_pa*(T_b - T_sa)/C
inline constexpr double kGamma = 2.9588235294117647e-05;   // c_pa/C

// Flows and rates at delta_p = 0.2 * kPHvacB.
inline constexpr double kDmC = 0.3361108311635544;
inline constexpr double kDmD = 0.36120730188136363;
inline constexpr double kLambdaC = 9.973465486415603e-05;  // alpha + gamma*dm_c
inline constexpr double kLambdaD = 7.910224186876815e-05;  // alpha - gamma*dm_d
inline constexpr double kTcSs = -0.9417419112162155;       // -beta*dm_c/lambda_c
inline constexpr double kTdSs = 1.276036828020261;         // +beta*dm_d/lambda_d

inline constexpr double kTpStar = 722.0266298451598;       // -ln(dm_c/dm_d)/lambda_c [s]
inline constexpr double kDownUpCrossing = 804.2149190235785;  // exact eta = 1 half-period [s]

// End-of-period deviations T(2 t_p) from 0, by phase (sign fixes the
// recovery mode and hence whether eta is below or above 1).
inline constexpr double kUpDownEndTp60 = 0.00044986652300167196;
inline constexpr double kDownUpEndAtStar = 0.0004839094539208659;
inline constexpr double kDownUpEndHalfStar = 0.0013491341941512642;
inline constexpr double kDownUpEndTwiceStar = -0.0070505463827767335;

// Recovery times from the worst reachable deviation (the trace bound).
inline constexpr double kTrecFromPlusBound = 8588.089564081492;   // charge back from +bound
inline constexpr double kTrecFromMinusBound = 8762.674283111814;  // discharge back from -bound
inline constexpr double kMaxRecovery = 8762.674283111814;

// Unit-log recovery construction: t_end = -t_c_ss*(e - 1) makes the charge
// log argument exactly e, so t_recov = 1/lambda_c.
inline constexpr double kUnitLogTEnd = 1.6181780131411148;
inline constexpr double kInvLambdaC = 10026.605108946873;

// 200-cycle efficiencies at t_p = 1800 s, delta_p = 0.2 * kPHvacB.
inline constexpr double kEta200UpDown = 0.996472842700179;
inline constexpr double kEta200DownUp = 1.001299536786571;

// Mixed outside-air variant (r_oa = 0.5), same zone and airflow.
inline constexpr double kA05 = 5782.8133333333335;
inline constexpr double kB05 = 326.2314285714286;
inline constexpr double kC05 = 143.71428571428572;
inline constexpr double kPHvacB05 = 9715.766466666666;

}  // namespace expected

}  // namespace sample
