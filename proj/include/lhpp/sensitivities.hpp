#pragma once

#include "lhpp/instruments.hpp"
#include "lhpp/merton.hpp"
#include "lhpp/scenario.hpp"

namespace lhpp {

/// One fully calibrated pricing state: the direct-RE hazard plus the
/// Merton-recalibrated bank parameters after absorbing the RE loan.
struct CalibratedState {
    double lambda_re = 0.0;          // direct RE loan hazard in this state
    double sigma_bank = 0.0;         // implied pre-enlargement bank asset vol
    double sigma_re = 0.0;           // implied RE firm asset vol
    EnlargedMoments enlarged{};      // post-issuance vol and correlations
    double bank_pd = 0.0;            // enlarged bank PD at the horizon
    double lambda_bank = 0.0;        // matching constant hazard
    PoolParams pool{};               // pool rebuilt with the enlarged inputs
};

/// Runs the recalibration chain for the scenario with the RE loan spreads
/// widened by `bump` (in spread units): bumped hazard -> bumped RE PD ->
/// implied RE asset vol -> enlarged balance sheet -> enlarged bank PD ->
/// bank hazard. bump = 0 gives the base state.
CalibratedState calibrate_state(const ScenarioConfig& config, double bump = 0.0);

struct SensitivityReport {
    double base_value = 0.0;
    double bumped_value = 0.0;
    double pv01 = 0.0;   // bumped_value - base_value
    double delta = 0.0;  // pv01 / loan pv01
    double loan_pv01 = 0.0;
};

/// Hazard matching a spread widened by `bump`: lambda + bump / (1 - R).
double perturbed_hazard(double lambda, double recovery, double bump);

/// Value change of a par loan under a one-basis-point spread widening.
double loan_pv01(double lambda, double recovery, const MarketParams& market,
                 double bump = 1e-4);

/// PV01 of the tranche with respect to RE spreads, through both the direct
/// channel (RE loan hazards) and the indirect channel (bank recalibration).
/// The coupon spread is held fixed between the two valuations.
SensitivityReport tranche_pv01_re(const ScenarioConfig& config, const Tranche& tranche,
                                  double coupon_spread, double bump = 1e-4);

/// Hedge ratio in units of RE loan notional.
double tranche_delta_re(const SensitivityReport& report, double loan_pv01_value);

}  // namespace lhpp
