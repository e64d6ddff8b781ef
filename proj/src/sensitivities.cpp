#include "lhpp/sensitivities.hpp"

#include <cmath>

#include "lhpp/errors.hpp"
#include "lhpp/loss_model.hpp"

namespace lhpp {

CalibratedState calibrate_state(const ScenarioConfig& config, double bump) {
    config.validate();
    const double T = config.market.maturity;

    CalibratedState st;
    const double lambda_re_base = hazard_from_pd(config.pool.re_pd_T, T);
    st.lambda_re = bump == 0.0
                       ? lambda_re_base
                       : perturbed_hazard(lambda_re_base, config.pool.recovery_re, bump);
    const double re_pd = default_prob(st.lambda_re, T);

    st.sigma_bank = implied_asset_vol(config.pool.bank_pd_T, config.bank.leverage, T);
    st.sigma_re = implied_asset_vol(re_pd, config.re_firm.leverage, T);

    const BalanceSheet bs{config.bank.leverage, config.bank.re_loan_weight,
                          st.sigma_bank, st.sigma_re};
    const CorrelationTriple corr{config.pool.rho_bank, config.pool.rho_re,
                                 config.effective_rho_cross()};
    st.enlarged = enlarge_balance_sheet(bs, corr);
    st.bank_pd = enlarged_pd(bs, st.enlarged.sigma_bar, T);
    st.lambda_bank = hazard_from_pd(st.bank_pd, T);

    st.pool.lambda_bank = st.lambda_bank;
    st.pool.lambda_re = st.lambda_re;
    st.pool.recovery_bank = config.pool.recovery_bank;
    st.pool.recovery_re = config.pool.recovery_re;
    st.pool.rho_bank = st.enlarged.rho_bar;
    st.pool.rho_re = config.pool.rho_re;
    st.pool.n_re = config.pool.n_re;
    st.pool.w_re = config.pool.w_re;
    st.pool.validate();
    return st;
}

double perturbed_hazard(double lambda, double recovery, double bump) {
    if (!(recovery < 1.0))
        throw std::domain_error("perturbed_hazard: recovery must be < 1");
    return lambda + bump / (1.0 - recovery);
}

double loan_pv01(double lambda, double recovery, const MarketParams& market,
                 double bump) {
    const double par_spread = loan_par_spread(lambda, recovery);
    const double bumped = perturbed_hazard(lambda, recovery, bump);
    return loan_price(par_spread, bumped, recovery, market) - 1.0;
}

SensitivityReport tranche_pv01_re(const ScenarioConfig& config, const Tranche& tranche,
                                  double coupon_spread, double bump) {
    const MarketParams market = config.market_params();
    const CalibratedState base = calibrate_state(config, 0.0);
    const CalibratedState bumped = calibrate_state(config, bump);

    SensitivityReport rep;
    rep.base_value = tranche_price(tranche, coupon_spread, base.pool, market);
    rep.bumped_value =
        bump == 0.0 ? rep.base_value
                    : tranche_price(tranche, coupon_spread, bumped.pool, market);
    rep.pv01 = rep.bumped_value - rep.base_value;
    rep.loan_pv01 = loan_pv01(base.lambda_re, config.pool.recovery_re, market, bump);
    rep.delta = bump == 0.0 ? 0.0 : rep.pv01 / rep.loan_pv01;
    return rep;
}

double tranche_delta_re(const SensitivityReport& report, double loan_pv01_value) {
    if (loan_pv01_value == 0.0)
        throw std::domain_error("tranche_delta_re: loan PV01 must be nonzero");
    return report.pv01 / loan_pv01_value;
}

}  // namespace lhpp
