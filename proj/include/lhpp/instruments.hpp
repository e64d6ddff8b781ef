#pragma once

#include <vector>

#include "lhpp/loss_model.hpp"

namespace lhpp {

/// CDO tranche absorbing pool losses in [attach, detach).
struct Tranche {
    double attach;
    double detach;

    Tranche(double attach_, double detach_);
    double width() const { return detach - attach; }
};

struct MarketParams {
    double rate = 0.0;      // risk-free short rate, continuous compounding
    double maturity = 0.0;  // T in years

    void validate() const;
};

/// Expected percentage survival notional on a time grid; values start at 1
/// and are nonincreasing.
struct SurvivalCurve {
    std::vector<double> times;
    std::vector<double> values;

    SurvivalCurve(std::vector<double> times_, std::vector<double> values_);
};

/// Price of a par-1 loan paying continuous coupon r+s, constant hazard.
double loan_price(double coupon_spread, double lambda, double recovery,
                  const MarketParams& market);

/// Credit triangle: s = lambda * (1 - R).
double loan_par_spread(double lambda, double recovery);

/// Loan price from an arbitrary survival curve spanning [0, T]; time
/// integrals by trapezoid on the curve grid, the recovery leg by
/// per-interval survival increments.
double loan_price_curve(double coupon_spread, const SurvivalCurve& survival,
                        double recovery, const MarketParams& market);

/// Expected percentage tranche survival notional at time t.
double tranche_survival(double t, const Tranche& tranche, const PoolParams& params);

/// Tranche survival curve sampled on a Gauss-Legendre grid over [0, T]
/// (plus the endpoints).
SurvivalCurve tranche_survival_curve(const Tranche& tranche, const PoolParams& params,
                                     const MarketParams& market, int time_nodes = 64);

/// Percentage tranche value for a continuous coupon r+s.
double tranche_price(const Tranche& tranche, double coupon_spread,
                     const PoolParams& params, const MarketParams& market,
                     int time_nodes = 64);

/// Spread making the tranche price 1.
double tranche_par_spread(const Tranche& tranche, const PoolParams& params,
                          const MarketParams& market, int time_nodes = 64);

}  // namespace lhpp
