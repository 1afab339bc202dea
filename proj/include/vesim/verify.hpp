#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vesim/extended_sim.hpp"
#include "vesim/rng.hpp"
#include "vesim/rte_engine.hpp"

namespace vesim {

// One universally-quantified claim checked over randomized draws (or a fixed
// reference scenario), with a one-line diagnostic.
struct ClaimResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct VerifyOptions {
    std::uint64_t seed = 20260815;
    bool force_violation = false;  // self-test hook: negates the power slope
    int draws_inequalities = 10000;
    int draws_sign = 1000;
    int draws_schedules = 100;
    int draws_misc = 300;
    bool include_extended = true;  // the slower simulation-backed claims
};

// A random valid r_oa = 1 (or mixed outside-air) building + equipment set
// with its baseline and deviation-model coefficients.
struct DrawnScenario {
    PhysicalConstants consts;
    BuildingParams building;
    HvacParams hvac;
    AmbientConditions amb;
    BaselinePoint base;
    VesCoefficients coeff;

    DeviationFrame frame() const {
        return {base.t_b.kelvin(), building.comfort_low.kelvin(),
                building.comfort_high.kelvin()};
    }
};

DrawnScenario draw_scenario(Rng& rng, bool full_outside_air = true);

// The standard demonstration building (auditorium-scale zone, 100% outside
// air) used by the fixed-parameter claims and the sample configs.
DrawnScenario reference_scenario();

namespace claims {

ClaimResult soc_affine_decreasing(Rng& rng);
ClaimResult constructors_reject_invalid();
ClaimResult fan_power_nonnegative_in_range(Rng& rng, int draws);
ClaimResult power_monotonic_in_airflow(Rng& rng, int draws);
ClaimResult power_temperature_free_full_outside_air(Rng& rng, int draws);
ClaimResult baseline_residual_small(Rng& rng, int draws);
ClaimResult power_slope_positive(Rng& rng, int draws, bool sabotage = false);
ClaimResult discriminant_feasible(Rng& rng, int draws);
ClaimResult slope_curvature_ratio_exceeds_airflow(Rng& rng, int draws);
ClaimResult airflow_root_bound_at_amplitude(Rng& rng, int draws);
ClaimResult flow_asymmetry_round_trip(Rng& rng, int draws);
ClaimResult rate_ordering(Rng& rng, int draws);
ClaimResult steady_state_signs(Rng& rng, int draws);
ClaimResult integrator_matches_closed_form(Rng& rng, int draws);
ClaimResult deviation_bound_on_traces(Rng& rng, int schedules);
ClaimResult single_cycle_efficiency_signs(Rng& rng, int draws);
ClaimResult efficiency_convergence_envelope();
ClaimResult efficiency_identities(Rng& rng, int draws);
ClaimResult energy_time_consistency(Rng& rng, int draws);
ClaimResult soc_closure(Rng& rng, int draws);
ClaimResult recovery_round_trip(Rng& rng, int draws);
ClaimResult critical_period_increasing_in_amplitude();
ClaimResult humidity_nonnegative(Rng& rng, int draws);
ClaimResult extended_deviation_bounded();
ClaimResult extended_energy_bookkeeping();
ClaimResult extended_degenerate_equivalence();

}  // namespace claims

std::vector<ClaimResult> run_verification(const VerifyOptions& opts);
bool all_passed(const std::vector<ClaimResult>& results);

}  // namespace vesim
