#include "lhpp/instruments.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lhpp/errors.hpp"
#include "lhpp/numerics.hpp"

namespace lhpp {

namespace {

// (1 - exp(-x T)) / x, continuous at x = 0
double annuity_factor(double x, double T) {
    if (std::fabs(x * T) < 1e-12) return T * (1.0 - 0.5 * x * T);
    return -std::expm1(-x * T) / x;
}

}  // namespace

Tranche::Tranche(double attach_, double detach_) : attach(attach_), detach(detach_) {
    if (!(attach >= 0.0 && attach < detach && detach <= 1.0)) {
        std::ostringstream os;
        os << "invalid tranche [" << attach_ << ", " << detach_ << "]";
        throw std::domain_error(os.str());
    }
}

void MarketParams::validate() const {
    if (!(maturity > 0.0)) throw parameter_error("MarketParams: maturity must be > 0");
    if (!std::isfinite(rate)) throw parameter_error("MarketParams: rate must be finite");
}

SurvivalCurve::SurvivalCurve(std::vector<double> times_, std::vector<double> values_)
    : times(std::move(times_)), values(std::move(values_)) {
    if (times.size() != values.size() || times.size() < 2)
        throw parameter_error("SurvivalCurve: need matching grids with >= 2 points");
    if (times.front() != 0.0 || values.front() != 1.0)
        throw parameter_error("SurvivalCurve: must start at (0, 1)");
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] < times[i - 1])
            throw parameter_error("SurvivalCurve: times must be nondecreasing");
        if (values[i] > values[i - 1] + 1e-12)
            throw parameter_error("SurvivalCurve: values must be nonincreasing");
        if (!(values[i] >= 0.0 && values[i] <= 1.0))
            throw parameter_error("SurvivalCurve: values must lie in [0,1]");
    }
}

double loan_price(double coupon_spread, double lambda, double recovery,
                  const MarketParams& market) {
    if (!(recovery >= 0.0 && recovery <= 1.0))
        throw std::domain_error("loan_price: recovery must lie in [0,1]");
    if (lambda < 0.0) throw std::domain_error("loan_price: lambda must be >= 0");
    market.validate();
    const double r = market.rate, T = market.maturity;
    const double ann = annuity_factor(r + lambda, T);
    return (r + coupon_spread) * ann + std::exp(-(r + lambda) * T) +
           recovery * lambda * ann;
}

double loan_par_spread(double lambda, double recovery) {
    if (!(recovery >= 0.0 && recovery < 1.0))
        throw std::domain_error("loan_par_spread: recovery must lie in [0,1)");
    return lambda * (1.0 - recovery);
}

double loan_price_curve(double coupon_spread, const SurvivalCurve& survival,
                        double recovery, const MarketParams& market) {
    if (!(recovery >= 0.0 && recovery <= 1.0))
        throw std::domain_error("loan_price_curve: recovery must lie in [0,1]");
    market.validate();
    const double r = market.rate, T = market.maturity;
    if (survival.times.back() < T - 1e-12)
        throw std::domain_error("loan_price_curve: survival curve must span [0, T]");

    double coupon_leg = 0.0, recovery_leg = 0.0, q_T = survival.values.back();
    for (std::size_t i = 1; i < survival.times.size(); ++i) {
        const double t0 = std::min(survival.times[i - 1], T);
        const double t1 = std::min(survival.times[i], T);
        const double q0 = survival.values[i - 1], q1 = survival.values[i];
        if (t1 >= T) q_T = q1;
        coupon_leg += 0.5 * (t1 - t0) *
                      (std::exp(-r * t0) * q0 + std::exp(-r * t1) * q1);
        recovery_leg += std::exp(-r * 0.5 * (t0 + t1)) * (q0 - q1);
        if (t1 >= T) break;
    }
    return (r + coupon_spread) * coupon_leg + std::exp(-r * T) * q_T +
           recovery * recovery_leg;
}

double tranche_survival(double t, const Tranche& tranche, const PoolParams& params) {
    if (t < 0.0) throw std::domain_error("tranche_survival: t must be >= 0");
    if (t == 0.0) return 1.0;
    const double el_hi = expected_capped_loss(tranche.detach, t, params);
    const double el_lo = expected_capped_loss(tranche.attach, t, params);
    return std::clamp(1.0 - (el_hi - el_lo) / tranche.width(), 0.0, 1.0);
}

SurvivalCurve tranche_survival_curve(const Tranche& tranche, const PoolParams& params,
                                     const MarketParams& market, int time_nodes) {
    market.validate();
    const double T = market.maturity;
    const QuadratureRule& rule = gauss_legendre(time_nodes);
    std::vector<double> times, values;
    times.reserve(time_nodes + 2);
    times.push_back(0.0);
    for (int i = 0; i < time_nodes; ++i)
        times.push_back(0.5 * T * (rule.nodes[i] + 1.0));
    times.push_back(T);
    values.reserve(times.size());
    for (double t : times) values.push_back(tranche_survival(t, tranche, params));
    // clip the occasional quadrature-level wiggle so the curve invariant holds
    for (std::size_t i = 1; i < values.size(); ++i)
        values[i] = std::min(values[i], values[i - 1]);
    return SurvivalCurve(std::move(times), std::move(values));
}

namespace {

// discounted tranche annuity and terminal survival, on the shared GL grid
struct TrancheLegs {
    double annuity;
    double q_T;
};

TrancheLegs tranche_legs(const Tranche& tranche, const PoolParams& params,
                         const MarketParams& market, int time_nodes) {
    market.validate();
    const double r = market.rate, T = market.maturity;
    const QuadratureRule& rule = gauss_legendre(time_nodes);
    double ann = 0.0;
    for (int i = 0; i < time_nodes; ++i) {
        const double u = 0.5 * T * (rule.nodes[i] + 1.0);
        ann += 0.5 * T * rule.weights[i] * std::exp(-r * u) *
               tranche_survival(u, tranche, params);
    }
    return {ann, tranche_survival(T, tranche, params)};
}

}  // namespace

double tranche_price(const Tranche& tranche, double coupon_spread,
                     const PoolParams& params, const MarketParams& market,
                     int time_nodes) {
    const TrancheLegs legs = tranche_legs(tranche, params, market, time_nodes);
    return (market.rate + coupon_spread) * legs.annuity +
           std::exp(-market.rate * market.maturity) * legs.q_T;
}

double tranche_par_spread(const Tranche& tranche, const PoolParams& params,
                          const MarketParams& market, int time_nodes) {
    const TrancheLegs legs = tranche_legs(tranche, params, market, time_nodes);
    if (!(legs.annuity > 0.0))
        throw numerical_error("tranche_par_spread: degenerate zero annuity");
    return (1.0 - std::exp(-market.rate * market.maturity) * legs.q_T) / legs.annuity -
           market.rate;
}

}  // namespace lhpp
