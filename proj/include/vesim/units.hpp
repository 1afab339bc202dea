#pragma once

#include <cmath>
#include <string>

#include "vesim/errors.hpp"

namespace vesim {

// Absolute temperature, stored in kelvin. Constructors reject non-finite
// input; differences are plain doubles in kelvin.
class Temperature {
  public:
    Temperature() = default;

    static Temperature from_kelvin(double k) {
        require_finite(k, "kelvin");
        if (k < 0.0) throw ModelError("temperature below absolute zero: " + std::to_string(k) + " K");
        Temperature t;
        t.kelvin_ = k;
        return t;
    }

    static Temperature from_celsius(double c) {
        require_finite(c, "celsius");
        return from_kelvin(c + 273.15);
    }

    static Temperature from_fahrenheit(double f) {
        require_finite(f, "fahrenheit");
        return from_kelvin((f - 32.0) * 5.0 / 9.0 + 273.15);
    }

    double kelvin() const { return kelvin_; }
    double celsius() const { return kelvin_ - 273.15; }
    double fahrenheit() const { return (kelvin_ - 273.15) * 9.0 / 5.0 + 32.0; }

  private:
    static void require_finite(double v, const char* unit) {
        if (!std::isfinite(v)) throw ModelError(std::string("non-finite temperature (") + unit + ")");
    }

    double kelvin_ = 273.15;
};

// Temperature *difference* conversion. Multiplying before dividing keeps
// definitional ratios exact in binary (9 F -> 5 K, 17 F -> 85/9 K).
inline double delta_f_to_delta_k(double df) { return df * 5.0 / 9.0; }

inline double delta_k_to_delta_f(double dk) { return dk * 9.0 / 5.0; }

// Moist-air property constants. Defaults are the usual psychrometric values;
// all overridable through the scenario config.
struct PhysicalConstants {
    double c_pa = 1006.0;    // specific heat of dry air [J/(kg K)]
    double c_pw = 1860.0;    // specific heat of water vapor [J/(kg K)]
    double g_h2o = 2.501e6;  // latent heat of vaporization at 0 C [J/kg]
    double r_g = 287.055;    // dry-air gas constant [J/(kg K)]

    void validate() const {
        if (!(c_pa > 0.0) || !(c_pw > 0.0) || !(g_h2o > 0.0) || !(r_g > 0.0))
            throw ConfigError("physical constants must all be positive");
    }
};

// Thermal envelope plus the comfort band the zone must stay inside.
struct BuildingParams {
    double r_th;              // envelope resistance [K/W]
    double c_th;              // zone thermal capacitance [J/K]
    Temperature comfort_low;  // T_L
    Temperature comfort_high; // T_H

    void validate() const {
        if (!(std::isfinite(r_th) && r_th > 0.0)) throw ConfigError("building.r_th must be > 0");
        if (!(std::isfinite(c_th) && c_th > 0.0)) throw ConfigError("building.c_th must be > 0");
        if (!(comfort_low.kelvin() < comfort_high.kelvin()))
            throw ConfigError("comfort band is empty (low >= high)");
    }
};

// Fan/chiller parameters. The fan fit alpha_1f m^2 + alpha_2f m may dip
// negative at low airflow when alpha_2f < 0; m_a_min declares the lower edge
// of the operating range and validation requires the fan curve to be
// nonnegative from there up.
struct HvacParams {
    double alpha_1f;     // fan quadratic coefficient [W/(kg/s)^2]
    double alpha_2f;     // fan linear coefficient [W/(kg/s)]
    double cop;          // chiller coefficient of performance [-]
    Temperature t_sa;    // supply-air temperature
    double r_oa = 1.0;   // outside-air fraction [0, 1]
    double m_a_min = 0.0;  // validated lower edge of operating airflow [kg/s]

    void validate() const {
        if (!(std::isfinite(alpha_1f) && alpha_1f > 0.0)) throw ConfigError("hvac.alpha_1f must be > 0");
        if (!std::isfinite(alpha_2f)) throw ConfigError("hvac.alpha_2f must be finite");
        if (!(std::isfinite(cop) && cop > 0.0)) throw ConfigError("hvac.cop must be > 0");
        if (!(r_oa >= 0.0 && r_oa <= 1.0)) throw ConfigError("hvac.r_oa must lie in [0, 1]");
        if (!(std::isfinite(m_a_min) && m_a_min >= 0.0)) throw ConfigError("hvac.m_a_min must be >= 0");
        // Fan power nonnegative on [m_a_min, inf): with alpha_1f > 0 the only
        // negative stretch is (0, -alpha_2f/alpha_1f) when alpha_2f < 0.
        if (alpha_2f < 0.0 && m_a_min < -alpha_2f / alpha_1f)
            throw ConfigError("fan curve negative inside declared operating range; "
                              "raise hvac.m_a_min above " + std::to_string(-alpha_2f / alpha_1f));
    }
};

// Normalized state of charge: 1 at the cold edge of the comfort band, 0 at
// the warm edge. Out-of-band temperatures are an error, not a clamp.
class StateOfCharge {
  public:
    static StateOfCharge from_value(double v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw ComfortViolation("state of charge outside [0, 1]: " + std::to_string(v));
        StateOfCharge s;
        s.value_ = v;
        return s;
    }

    double value() const { return value_; }

  private:
    double value_ = 0.0;
};

// Raw SoC ratio without the [0, 1] gate (used by trace emission, where
// excursions are reported rather than fatal).
inline double soc_value_unchecked(Temperature t, const BuildingParams& b) {
    return (b.comfort_high.kelvin() - t.kelvin()) /
           (b.comfort_high.kelvin() - b.comfort_low.kelvin());
}

inline StateOfCharge soc_from_temperature(Temperature t, const BuildingParams& b) {
    return StateOfCharge::from_value(soc_value_unchecked(t, b));
}

}  // namespace vesim
