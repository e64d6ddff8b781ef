#pragma once

namespace lhpp {

/// Parameters of the LH++ asset pool: an infinitely granular homogeneous
/// bank-loan portfolio of fractional notional 1 - w_re plus n_re identical
/// large RE loans of notional w_re / n_re each.
struct PoolParams {
    double lambda_bank = 0.0;   // hazard rate of LHP obligors, per year
    double lambda_re = 0.0;     // hazard rate of direct RE loans, per year
    double recovery_bank = 0.0; // R
    double recovery_re = 0.0;   // R0
    double rho_bank = 0.0;      // asset correlation within the LHP
    double rho_re = 0.0;        // asset correlation among RE loans
    int n_re = 0;               // number of direct RE loans
    double w_re = 0.0;          // total fractional notional of direct RE loans

    double lhp_notional() const { return 1.0 - w_re; }
    double per_loan_notional() const { return n_re > 0 ? w_re / n_re : 0.0; }

    /// Throws parameter_error on violated invariants.
    void validate() const;

    PoolParams with_weight(double w) const;
};

/// 1 - exp(-lambda * t)
double default_prob(double lambda, double t);

/// Constant hazard matching a cumulative default probability at horizon t.
double hazard_from_pd(double pd, double t);

/// P(tau <= t | V_t = v) for an LHP obligor.
double conditional_lhp_pd(double v, double t, const PoolParams& params);

/// P(L_t <= x) for the pure LHP (w_re = 0).
double lhp_loss_cdf(double x, double t, const PoolParams& params);

/// Factor threshold A_t(alpha, k): the pool loss given k defaulted RE loans
/// exceeds alpha exactly when V_t < A_t(alpha, k). Returns -+inf when the
/// clamped argument hits 1 resp. 0.
double attachment_threshold(double alpha, int k, double t, const PoolParams& params);

/// P(L_t > alpha), via the conditional one-dimensional factor integral.
double loss_exceed_prob(double alpha, double t, const PoolParams& params,
                        int nodes = 200);

/// LH+ closed form (n_re = 1) of P(L_t > alpha) in terms of the bivariate
/// normal distribution.
double loss_exceed_prob_lhplus(double alpha, double t, const PoolParams& params);

/// E[min(L_t, alpha)], via the conditional one-dimensional factor integral.
double expected_capped_loss(double alpha, double t, const PoolParams& params,
                            int nodes = 200);

/// LH+ closed form (n_re = 1) of E[min(L_t, alpha)]; the trivariate normal
/// terms are reduced to one-dimensional integrals by conditional
/// independence given the systematic factor.
double expected_capped_loss_lhplus(double alpha, double t, const PoolParams& params,
                                   int nodes = 200);

}  // namespace lhpp
