#include "lhpp/loss_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "lhpp/errors.hpp"
#include "lhpp/numerics.hpp"

namespace lhpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// integration window for the systematic factor; the normal mass outside
// +-8.5 is below 1e-17
constexpr double kFactorClip = 8.5;
// removable 1/sqrt(rho) singularity in the threshold formula
constexpr double kRhoFloor = 1e-10;

void check_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0))
        throw std::domain_error("loss fraction alpha must lie in [0,1]");
}

// k ln g + (n-k) ln(1-g), with the conventions 0*ln(0) = 0
double log_binomial_weight(double g, int k, int n) {
    double s = 0.0;
    if (k > 0) s += g > 0.0 ? k * std::log(g) : -kInf;
    if (n - k > 0) s += g < 1.0 ? (n - k) * std::log1p(-g) : -kInf;
    return s;
}

struct FactorTerms {
    double c_t;    // LHP default threshold
    double c_0;    // RE default threshold
    double sq_rho, sq_one_rho;
    double sq_rho0, sq_one_rho0;
};

FactorTerms factor_terms(double t, const PoolParams& p) {
    FactorTerms f;
    f.c_t = norm_inv(default_prob(p.lambda_bank, t));
    f.c_0 = norm_inv(default_prob(p.lambda_re, t));
    const double rho = std::max(p.rho_bank, kRhoFloor);
    f.sq_rho = std::sqrt(rho);
    f.sq_one_rho = std::sqrt(1.0 - rho);
    f.sq_rho0 = std::sqrt(p.rho_re);
    f.sq_one_rho0 = std::sqrt(1.0 - p.rho_re);
    return f;
}

double conditional_re_pd(double v, const FactorTerms& f) {
    if (f.c_0 == -kInf) return 0.0;
    if (f.c_0 == kInf) return 1.0;
    return norm_cdf((f.c_0 - f.sq_rho0 * v) / f.sq_one_rho0);
}

double conditional_bank_pd(double v, const FactorTerms& f) {
    if (f.c_t == -kInf) return 0.0;
    if (f.c_t == kInf) return 1.0;
    return norm_cdf((f.c_t - f.sq_rho * v) / f.sq_one_rho);
}

double threshold(double alpha, int k, const FactorTerms& f, const PoolParams& p) {
    const double num = alpha - k * p.per_loan_notional() * (1.0 - p.recovery_re);
    const double den = p.lhp_notional() * (1.0 - p.recovery_bank);
    double arg;
    if (den > 0.0)
        arg = std::clamp(num / den, 0.0, 1.0);
    else
        arg = num <= 0.0 ? 0.0 : 1.0;
    if (arg <= 0.0) return kInf;
    if (arg >= 1.0) return -kInf;
    if (f.c_t == kInf) return kInf;
    if (f.c_t == -kInf) return -kInf;
    return (f.c_t - norm_inv(arg) * f.sq_one_rho) / f.sq_rho;
}

// sum_k C(n,k) * integral over the factor of g^k (1-g)^(n-k) * extra(v, k)
// restricted per k to v < A_t(alpha,k) (below = true) or v > A_t(alpha,k)
template <typename Extra>
double k_sum_integral(double alpha, const FactorTerms& f, const PoolParams& p,
                      bool below, int nodes, Extra extra) {
    double sum = 0.0, comp = 0.0;
    for (int k = 0; k <= p.n_re; ++k) {
        const double a = threshold(alpha, k, f, p);
        const double lo = below ? -kFactorClip : std::max(a, -kFactorClip);
        const double hi = below ? std::min(a, kFactorClip) : kFactorClip;
        if (lo >= hi) continue;
        const double log_bin = log_binomial(p.n_re, k);
        const double term = integrate(
            [&](double v) {
                const double g = conditional_re_pd(v, f);
                const double lw = log_binomial_weight(g, k, p.n_re);
                if (lw == -kInf) return 0.0;
                return std::exp(log_bin + lw) * norm_pdf(v) * extra(v, k);
            },
            Interval(lo, hi), nodes);
        const double t2 = sum + term;
        comp += std::fabs(sum) >= std::fabs(term) ? (sum - t2) + term : (term - t2) + sum;
        sum = t2;
    }
    return sum + comp;
}

}  // namespace

void PoolParams::validate() const {
    std::ostringstream os;
    if (!(lambda_bank >= 0.0) || !(lambda_re >= 0.0))
        throw parameter_error("PoolParams: hazard rates must be >= 0");
    if (!(recovery_bank >= 0.0 && recovery_bank < 1.0) ||
        !(recovery_re >= 0.0 && recovery_re < 1.0))
        throw parameter_error("PoolParams: recoveries must lie in [0,1)");
    if (!(rho_bank >= 0.0 && rho_bank < 1.0) || !(rho_re >= 0.0 && rho_re < 1.0))
        throw parameter_error("PoolParams: correlations must lie in [0,1)");
    if (n_re < 0) throw parameter_error("PoolParams: n_re must be >= 0");
    if (!(w_re >= 0.0 && w_re <= 1.0))
        throw parameter_error("PoolParams: w_re must lie in [0,1]");
    if (n_re == 0 && w_re > 0.0)
        throw parameter_error("PoolParams: w_re > 0 requires n_re >= 1");
}

PoolParams PoolParams::with_weight(double w) const {
    PoolParams p = *this;
    p.w_re = w;
    return p;
}

double default_prob(double lambda, double t) {
    if (lambda < 0.0 || t < 0.0)
        throw std::domain_error("default_prob: lambda and t must be >= 0");
    return -std::expm1(-lambda * t);
}

double hazard_from_pd(double pd, double t) {
    if (!(pd >= 0.0 && pd < 1.0)) throw std::domain_error("hazard_from_pd: pd must lie in [0,1)");
    if (!(t > 0.0)) throw std::domain_error("hazard_from_pd: t must be > 0");
    return -std::log1p(-pd) / t;
}

double conditional_lhp_pd(double v, double t, const PoolParams& params) {
    const FactorTerms f = factor_terms(t, params);
    if (v == -kInf) return f.c_t == -kInf ? 0.0 : 1.0;
    if (v == kInf) return f.c_t == kInf ? 1.0 : 0.0;
    return conditional_bank_pd(v, f);
}

double lhp_loss_cdf(double x, double t, const PoolParams& params) {
    const double lgd = 1.0 - params.recovery_bank;
    if (x < 0.0) return 0.0;
    if (x >= lgd) return 1.0;
    const double p_t = default_prob(params.lambda_bank, t);
    if (p_t == 0.0) return 1.0;  // loss is identically zero
    if (params.rho_bank < kRhoFloor)
        return x / lgd >= p_t ? 1.0 : 0.0;  // deterministic loss (1-R) p_t
    const double c_t = norm_inv(p_t);
    return norm_cdf((norm_inv(x / lgd) * std::sqrt(1.0 - params.rho_bank) - c_t) /
                    std::sqrt(params.rho_bank));
}

double attachment_threshold(double alpha, int k, double t, const PoolParams& params) {
    if (k < 0 || k > params.n_re)
        throw std::domain_error("attachment_threshold: need 0 <= k <= n_re");
    return threshold(alpha, k, factor_terms(t, params), params);
}

double loss_exceed_prob(double alpha, double t, const PoolParams& params, int nodes) {
    check_alpha(alpha);
    const FactorTerms f = factor_terms(t, params);
    const double p = k_sum_integral(alpha, f, params, /*below=*/true, nodes,
                                    [](double, int) { return 1.0; });
    return std::clamp(p, 0.0, 1.0);
}

double loss_exceed_prob_lhplus(double alpha, double t, const PoolParams& params) {
    if (params.n_re != 1)
        throw std::invalid_argument("loss_exceed_prob_lhplus: requires n_re == 1");
    check_alpha(alpha);
    const FactorTerms f = factor_terms(t, params);
    const double a0 = threshold(alpha, 0, f, params);
    const double a1 = threshold(alpha, 1, f, params);
    const double p = norm_cdf(a0) - bivar_norm_cdf(a0, f.c_0, f.sq_rho0) +
                     bivar_norm_cdf(a1, f.c_0, f.sq_rho0);
    return std::clamp(p, 0.0, 1.0);
}

double expected_capped_loss(double alpha, double t, const PoolParams& params,
                            int nodes) {
    check_alpha(alpha);
    if (alpha == 0.0) return 0.0;
    const FactorTerms f = factor_terms(t, params);
    const double exceed = std::clamp(
        k_sum_integral(alpha, f, params, true, nodes, [](double, int) { return 1.0; }),
        0.0, 1.0);

    const double loan_lgd = params.per_loan_notional() * (1.0 - params.recovery_re);
    const double lhp_lgd = params.lhp_notional() * (1.0 - params.recovery_bank);
    const double body =
        k_sum_integral(alpha, f, params, /*below=*/false, nodes, [&](double v, int k) {
            return k * loan_lgd + lhp_lgd * conditional_bank_pd(v, f);
        });
    return alpha * exceed + body;
}

double expected_capped_loss_lhplus(double alpha, double t, const PoolParams& params,
                                   int nodes) {
    if (params.n_re != 1)
        throw std::invalid_argument("expected_capped_loss_lhplus: requires n_re == 1");
    check_alpha(alpha);
    if (alpha == 0.0) return 0.0;
    const FactorTerms f = factor_terms(t, params);
    const double a0 = threshold(alpha, 0, f, params);
    const double a1 = threshold(alpha, 1, f, params);
    const double exceed = std::clamp(norm_cdf(a0) - bivar_norm_cdf(a0, f.c_0, f.sq_rho0) +
                                         bivar_norm_cdf(a1, f.c_0, f.sq_rho0),
                                     0.0, 1.0);

    // trivariate probabilities P(Y <= c_t, V <= a, X <= c_0) via the factor
    // integral; Y, X independent given V
    auto tri = [&](double a) {
        const double hi = std::min(a, kFactorClip);
        if (hi <= -kFactorClip) return 0.0;
        return integrate(
            [&](double v) {
                return conditional_bank_pd(v, f) * conditional_re_pd(v, f) *
                       norm_pdf(v);
            },
            Interval(-kFactorClip, hi), nodes);
    };

    const double n0_lgd = params.per_loan_notional() * (1.0 - params.recovery_re);
    const double n_lgd = params.lhp_notional() * (1.0 - params.recovery_bank);
    const double p_t = default_prob(params.lambda_bank, t);
    const double p_0 = default_prob(params.lambda_re, t);

    const double re_leg = n0_lgd * (p_0 - bivar_norm_cdf(a1, f.c_0, f.sq_rho0));
    const double lhp_leg =
        n_lgd * (p_t - bivar_norm_cdf(f.c_t, a0, f.sq_rho) + tri(a0) - tri(a1));
    return alpha * exceed + re_leg + lhp_leg;
}

}  // namespace lhpp
