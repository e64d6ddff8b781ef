#pragma once

namespace lhpp {

/// Bank balance sheet before adding the RE loan. The RE loan face value is
/// expressed as a fraction of assets (F0 / A0).
struct BalanceSheet {
    double leverage = 0.0;        // D0 / A0
    double re_loan_weight = 0.0;  // F0 / A0
    double sigma_bank = 0.0;      // annual asset volatility of the bank
    double sigma_re = 0.0;        // annual asset volatility of the RE firm

    void validate() const;
};

/// Asset correlations feeding the four-factor Cholesky: bank-bank,
/// RE-RE and bank-RE.
struct CorrelationTriple {
    double rho_b = 0.0;
    double rho_r = 0.0;
    double rho_rb = 0.0;

    void validate() const;
};

/// Enlarged volatility and correlations after the RE loan is added to the
/// balance sheet (first-order expansion of the log asset return).
struct EnlargedMoments {
    double sigma_bar;    // enlarged asset volatility
    double rho_bar;      // enlarged bank-bank correlation
    double rho_bar_bre;  // enlarged bank to (external) RE loan correlation
};

/// Merton default probability at the horizon: Phi((ln(leverage) +
/// sigma^2 T / 2) / (sigma sqrt(T))). The risk-free rate cancels.
double merton_pd(double sigma, double leverage, double horizon);

/// Unique positive volatility solving merton_pd(sigma) = pd.
double implied_asset_vol(double pd, double leverage, double horizon);

/// Closed-form enlarged moments; throws approximation_error when the
/// expansion produces a non-positive variance.
EnlargedMoments enlarge_balance_sheet(const BalanceSheet& bs,
                                      const CorrelationTriple& corr);

/// Default probability of the enlarged balance sheet: effective leverage
/// (D0 + F0) / (A0 + F0) at volatility sigma_bar.
double enlarged_pd(const BalanceSheet& bs, double sigma_bar, double horizon);

/// Closed lognormal moments E[X e^(sx X)] and E[X e^(sx X + sy Y)] for
/// independent standard normals X, Y.
struct LognormalMoments {
    double m1;
    double m2;
};
LognormalMoments lognormal_moments(double sigma_x, double sigma_y);

}  // namespace lhpp
