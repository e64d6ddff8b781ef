#include "lhpp/merton.hpp"

#include <cmath>
#include <sstream>

#include "lhpp/errors.hpp"
#include "lhpp/numerics.hpp"

namespace lhpp {

void BalanceSheet::validate() const {
    if (!(leverage > 0.0 && leverage < 1.0))
        throw parameter_error("BalanceSheet: leverage must lie in (0,1)");
    if (!(re_loan_weight >= 0.0))
        throw parameter_error("BalanceSheet: re_loan_weight must be >= 0");
    if (!(sigma_bank > 0.0) || !(sigma_re > 0.0))
        throw parameter_error("BalanceSheet: volatilities must be > 0");
}

void CorrelationTriple::validate() const {
    if (!(rho_b >= 0.0 && rho_b < 1.0) || !(rho_r >= 0.0 && rho_r < 1.0) ||
        !(rho_rb >= 0.0 && rho_rb < 1.0))
        throw parameter_error("CorrelationTriple: correlations must lie in [0,1)");
    cholesky4(rho_b, rho_r, rho_rb);  // PSD check
}

double merton_pd(double sigma, double leverage, double horizon) {
    if (!(sigma > 0.0)) throw std::domain_error("merton_pd: sigma must be > 0");
    if (!(leverage > 0.0 && leverage < 1.0))
        throw std::domain_error("merton_pd: leverage must lie in (0,1)");
    if (!(horizon > 0.0)) throw std::domain_error("merton_pd: horizon must be > 0");
    const double c =
        (std::log(leverage) + 0.5 * sigma * sigma * horizon) / (sigma * std::sqrt(horizon));
    return norm_cdf(c);
}

double implied_asset_vol(double pd, double leverage, double horizon) {
    if (!(pd > 0.0 && pd < 1.0))
        throw std::domain_error("implied_asset_vol: pd must lie in (0,1)");
    if (!(leverage > 0.0 && leverage < 1.0))
        throw std::domain_error("implied_asset_vol: leverage must lie in (0,1)");
    if (!(horizon > 0.0)) throw std::domain_error("implied_asset_vol: horizon must be > 0");
    // sigma^2 T/2 - c sigma sqrt(T) + ln(leverage) = 0; ln(leverage) < 0
    // gives exactly one positive root
    const double c = norm_inv(pd);
    const double t = horizon;
    return (c * std::sqrt(t) + std::sqrt(c * c * t - 2.0 * t * std::log(leverage))) / t;
}

EnlargedMoments enlarge_balance_sheet(const BalanceSheet& bs,
                                      const CorrelationTriple& corr) {
    bs.validate();
    corr.validate();
    const double sb = bs.sigma_bank, sr = bs.sigma_re, fa = bs.re_loan_weight;
    const double rb = corr.rho_b, rr = corr.rho_r, rrb = corr.rho_rb;

    const double e1 = std::exp(sb * sb - rrb * sb * sr);
    const double var = sb * sb +
                       fa * fa * std::exp(2.0 * sb * (sb - rrb * sr)) *
                           std::expm1(sb * sb + sr * sr - 2.0 * rrb * sb * sr) -
                       2.0 * sb * fa * (sb - rrb * sr) * e1;
    if (!(var > 0.0)) {
        std::ostringstream os;
        os << "enlarge_balance_sheet: non-positive enlarged variance (" << var
           << "); parameters outside the validity of the first-order expansion";
        throw approximation_error(os.str());
    }
    const double sigma_bar = std::sqrt(var);

    const double cov_ij = rb * sb * sb - 2.0 * sb * fa * e1 * (rb * sb - rrb * sr) +
                          fa * fa * std::exp(2.0 * sb * sb - 2.0 * rrb * sb * sr) *
                              std::expm1(rb * sb * sb + rr * sr * sr - 2.0 * rrb * sb * sr);
    const double cov_bre = rrb * sb + fa * e1 * (rr * sr - rrb * sb);

    EnlargedMoments m;
    m.sigma_bar = sigma_bar;
    m.rho_bar = cov_ij / var;
    m.rho_bar_bre = cov_bre / sigma_bar;
    if (!(m.rho_bar > -1.0 && m.rho_bar < 1.0) ||
        !(m.rho_bar_bre > -1.0 && m.rho_bar_bre < 1.0))
        throw approximation_error(
            "enlarge_balance_sheet: enlarged correlation outside (-1,1)");
    return m;
}

double enlarged_pd(const BalanceSheet& bs, double sigma_bar, double horizon) {
    if (!(sigma_bar > 0.0)) throw std::domain_error("enlarged_pd: sigma_bar must be > 0");
    const double lev =
        (bs.leverage + bs.re_loan_weight) / (1.0 + bs.re_loan_weight);
    return merton_pd(sigma_bar, lev, horizon);
}

LognormalMoments lognormal_moments(double sigma_x, double sigma_y) {
    const double m1 = sigma_x * std::exp(0.5 * sigma_x * sigma_x);
    return {m1, m1 * std::exp(0.5 * sigma_y * sigma_y)};
}

}  // namespace lhpp
