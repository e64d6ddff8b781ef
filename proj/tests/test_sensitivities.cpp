#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "lhpp/errors.hpp"
#include "lhpp/scenario.hpp"
#include "lhpp/sensitivities.hpp"
#include "lhpp/structuring.hpp"

using namespace lhpp;
using namespace fixtures;

namespace {

ScenarioConfig example_config(int n_re = 5) {
    ScenarioConfig c;
    c.pool.n_re = n_re;
    return c;
}

Tranche senior_at_alpha_star(const ScenarioConfig& config, const CalibratedState& base) {
    const double alpha = optimal_attachment(config.pool.w_re, base.pool,
                                            config.structuring_spec(),
                                            config.market_params());
    return Tranche(alpha, 1.0);
}

}  // namespace

TEST_CASE("perturbed_hazard arithmetic") {
    CHECK(perturbed_hazard(0.02, 0.25, 0.0) == 0.02);
    CHECK(perturbed_hazard(0.02, 0.25, 1e-4) ==
          doctest::Approx(0.02 + 1.3333333333333334e-4).epsilon(1e-12));
    CHECK_THROWS_AS(perturbed_hazard(0.02, 1.0, 1e-4), std::domain_error);
}

TEST_CASE("loan_pv01 reproduces the -8.7281 bp example at r = 0") {
    const double pv = loan_pv01(kLambdaRe, 0.25, market(0.0));
    CHECK(pv * 1e4 == doctest::Approx(-8.7280942563190211).epsilon(1e-10));
    CHECK(pv < 0.0);
}

TEST_CASE("loan_pv01 signs and duration monotonicity") {
    // riskless loan still loses value when the spread widens the hazard
    CHECK(loan_pv01(0.0, 0.25, market(0.0)) < 0.0);
    // longer maturity, larger magnitude
    CHECK(std::fabs(loan_pv01(kLambdaRe, 0.25, MarketParams{0.0, 20.0})) >
          std::fabs(loan_pv01(kLambdaRe, 0.25, MarketParams{0.0, 10.0})));
    // positive rates shrink the magnitude
    CHECK(std::fabs(loan_pv01(kLambdaRe, 0.25, market(0.05))) <
          std::fabs(loan_pv01(kLambdaRe, 0.25, market(0.0))));
}

TEST_CASE("calibrate_state base chain at the example calibration") {
    const ScenarioConfig config = example_config(9);
    const CalibratedState st = calibrate_state(config);
    CHECK(st.lambda_re == doctest::Approx(kLambdaRe).epsilon(1e-12));
    CHECK(st.sigma_bank == doctest::Approx(0.036876295760475848).epsilon(1e-10));
    CHECK(st.sigma_re == doctest::Approx(0.043374543235134118).epsilon(1e-10));
    CHECK(st.enlarged.sigma_bar == doctest::Approx(0.036571923091057398).epsilon(1e-10));
    CHECK(st.bank_pd == doctest::Approx(0.19942072778019532).epsilon(1e-10));
    CHECK(st.pool.rho_bank == doctest::Approx(0.17859368927884363).epsilon(1e-10));
    CHECK(st.pool.n_re == 9);
}

TEST_CASE("zero bump produces an exactly zero PV01") {
    const ScenarioConfig config = example_config();
    const CalibratedState base = calibrate_state(config);
    const Tranche tr = senior_at_alpha_star(config, base);
    const double spread =
        tranche_par_spread(tr, base.pool, config.market_params());
    const SensitivityReport rep = tranche_pv01_re(config, tr, spread, 0.0);
    CHECK(rep.pv01 == 0.0);
    CHECK(rep.delta == 0.0);
}

TEST_CASE("base example PV01_RE lands near -0.1 bp for n = 5") {
    const ScenarioConfig config = example_config(5);
    const CalibratedState base = calibrate_state(config);
    const Tranche tr = senior_at_alpha_star(config, base);
    CHECK(tr.attach == doctest::Approx(0.3179).epsilon(0.032));
    const double spread = tranche_par_spread(tr, base.pool, config.market_params());
    const SensitivityReport rep = tranche_pv01_re(config, tr, spread);
    CHECK(rep.pv01 * 1e4 == doctest::Approx(-0.1).epsilon(0.20));
    CHECK(rep.base_value == doctest::Approx(1.0).epsilon(1e-9));
    // senior tranche hedges with a fraction of one RE loan
    CHECK(rep.delta > 0.0);
    CHECK(rep.delta < 1.0);
}

TEST_CASE("correlation stress moves alpha* and PV01_RE as reported") {
    ScenarioConfig config = example_config(5);
    config.pool.rho_bank = std::sqrt(0.5);
    config.pool.rho_re = std::sqrt(0.5);
    config.pool.rho_cross = 0.1434;  // balance-sheet calibration kept at the market value
    const CalibratedState base = calibrate_state(config);
    const Tranche tr = senior_at_alpha_star(config, base);
    CHECK(tr.attach == doctest::Approx(0.6707).epsilon(0.03));
    const double spread = tranche_par_spread(tr, base.pool, config.market_params());
    const SensitivityReport rep = tranche_pv01_re(config, tr, spread);
    CHECK(rep.pv01 * 1e4 == doctest::Approx(-0.034).epsilon(0.20));
}

TEST_CASE("tranche_delta_re") {
    SensitivityReport rep;
    rep.pv01 = -1e-5;
    CHECK(tranche_delta_re(rep, -8.7e-4) == doctest::Approx(1e-5 / 8.7e-4));
    CHECK(tranche_delta_re(rep, -8.7e-4) > 0.0);
    rep.pv01 = 0.0;
    CHECK(tranche_delta_re(rep, -8.7e-4) == 0.0);
    CHECK_THROWS_AS(tranche_delta_re(rep, 0.0), std::domain_error);
}

TEST_CASE("PV01_RE is negative across the weight grid") {
    const ScenarioConfig base_cfg = example_config();
    for (double w : {0.05, 0.1061, 0.3, 0.6, 0.9}) {
        ScenarioConfig config = base_cfg;
        config.pool.w_re = w;
        const CalibratedState base = calibrate_state(config);
        const Tranche tr = senior_at_alpha_star(config, base);
        const double spread = tranche_par_spread(tr, base.pool, config.market_params());
        const SensitivityReport rep = tranche_pv01_re(config, tr, spread);
        CHECK(rep.pv01 < 0.0);
    }
}

TEST_CASE("PV01_RE increases with the attachment point") {
    const ScenarioConfig config = example_config();
    const CalibratedState base = calibrate_state(config);
    const Tranche tr = senior_at_alpha_star(config, base);
    const double spread = tranche_par_spread(tr, base.pool, config.market_params());
    const double h = 0.02;
    const SensitivityReport up =
        tranche_pv01_re(config, Tranche(tr.attach + h, 1.0), spread);
    const SensitivityReport dn =
        tranche_pv01_re(config, Tranche(tr.attach - h, 1.0), spread);
    CHECK(up.pv01 > dn.pv01);
}

TEST_CASE("bump linearity at the one-basis-point scale") {
    const ScenarioConfig config = example_config();
    const CalibratedState base = calibrate_state(config);
    const Tranche tr = senior_at_alpha_star(config, base);
    const double spread = tranche_par_spread(tr, base.pool, config.market_params());
    const double pv1 = tranche_pv01_re(config, tr, spread, 1e-4).pv01;
    const double pv2 = tranche_pv01_re(config, tr, spread, 2e-4).pv01;
    CHECK(pv2 / pv1 == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("direct-only chain when banks hold no RE loans") {
    // with F0/A0 = 0 the bank recalibration is the identity and the PV01
    // equals the pure direct-channel value
    ScenarioConfig config = example_config();
    config.bank.re_loan_weight = 0.0;
    const CalibratedState base = calibrate_state(config);
    CHECK(base.lambda_bank == doctest::Approx(kLambdaBank).epsilon(1e-10));
    CHECK(base.pool.rho_bank == doctest::Approx(kRhoBank).epsilon(1e-12));

    const CalibratedState bumped = calibrate_state(config, 1e-4);
    CHECK(bumped.lambda_bank == doctest::Approx(base.lambda_bank).epsilon(1e-14));

    const Tranche tr = senior_at_alpha_star(config, base);
    const double spread = tranche_par_spread(tr, base.pool, config.market_params());
    const SensitivityReport rep = tranche_pv01_re(config, tr, spread);

    // reprice by bumping only the direct RE hazard
    PoolParams direct = base.pool;
    direct.lambda_re = perturbed_hazard(direct.lambda_re, config.pool.recovery_re, 1e-4);
    const double direct_pv =
        tranche_price(tr, spread, direct, config.market_params()) -
        tranche_price(tr, spread, base.pool, config.market_params());
    CHECK(rep.pv01 == doctest::Approx(direct_pv).epsilon(1e-12));
}

TEST_CASE("all-direct pool with plain banks isolates the direct channel") {
    // w = 1 and F0/A0 = 0: no LHP notional and no balance-sheet coupling,
    // so the tranche PV01 is exactly the direct RE repricing effect
    ScenarioConfig config = example_config(9);
    config.bank.re_loan_weight = 0.0;
    config.pool.w_re = 1.0;
    const CalibratedState base = calibrate_state(config);
    const Tranche tr = senior_at_alpha_star(config, base);
    const double spread = tranche_par_spread(tr, base.pool, config.market_params());
    const SensitivityReport rep = tranche_pv01_re(config, tr, spread);

    PoolParams direct = base.pool;
    direct.lambda_re = perturbed_hazard(direct.lambda_re, config.pool.recovery_re, 1e-4);
    const double direct_pv =
        tranche_price(tr, spread, direct, config.market_params()) -
        tranche_price(tr, spread, base.pool, config.market_params());
    CHECK(rep.pv01 == doctest::Approx(direct_pv).epsilon(1e-12));
    CHECK(rep.pv01 < 0.0);
}
