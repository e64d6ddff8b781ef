#pragma once

#include "lhpp/instruments.hpp"
#include "lhpp/loss_model.hpp"
#include "lhpp/scenario.hpp"

namespace fixtures {

// example calibration of the structured climate fund (10y horizon)
inline constexpr double kMaturity = 10.0;
inline constexpr double kBankPd = 0.199;
inline constexpr double kRePd = 0.2421;
inline constexpr double kLambdaBank = 0.02218943319137778;  // -ln(1-0.199)/10
inline constexpr double kLambdaRe = 0.02772038281641536;    // -ln(1-0.2421)/10
inline constexpr double kRecovery = 0.25;
inline constexpr double kRhoBank = 0.1758;
inline constexpr double kRhoRe = 0.1170;
inline constexpr double kRhoCross = 0.14341757214511756;    // sqrt(rho_bank rho_re)
inline constexpr double kWRe = 0.1061;
inline constexpr double kPdAaa = 0.007;

inline lhpp::PoolParams base_pool(int n_re = 9, double w_re = kWRe) {
    lhpp::PoolParams p;
    p.lambda_bank = kLambdaBank;
    p.lambda_re = kLambdaRe;
    p.recovery_bank = kRecovery;
    p.recovery_re = kRecovery;
    p.rho_bank = kRhoBank;
    p.rho_re = kRhoRe;
    p.n_re = n_re;
    p.w_re = w_re;
    return p;
}

inline lhpp::PoolParams lhp_pool() { return base_pool(0, 0.0); }

inline lhpp::MarketParams market(double rate = 0.0) {
    return lhpp::MarketParams{rate, kMaturity};
}

}  // namespace fixtures
