// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lhpp/instruments.hpp"
#include "lhpp/loss_model.hpp"
#include "lhpp/mc_oracle.hpp"
#include "lhpp/merton.hpp"
#include "lhpp/numerics.hpp"
#include "lhpp/scenario.hpp"
#include "lhpp/sensitivities.hpp"
#include "lhpp/structuring.hpp"
#include "lhpp/validation.hpp"

using namespace lhpp;

namespace {

int g_failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, const std::string& name, bool pass, const std::string& detail,
            double seconds, double limit_seconds) {
    const bool in_time = limit_seconds <= 0.0 || seconds <= limit_seconds;
    const bool ok = pass && in_time;
    if (!ok) ++g_failures;
    std::printf("%s criterion %2d: %s (%s; %.1f s%s)\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.c_str(), seconds,
                in_time ? "" : " OVER TIME LIMIT");
    std::fflush(stdout);
}

ScenarioConfig example_config(int n_re) {
    ScenarioConfig c;
    c.pool.n_re = n_re;
    return c;
}

ScenarioConfig stress_config(int n_re) {
    // pool correlations stressed to sqrt(0.5); the balance-sheet cross
    // correlation stays at its market-calibrated base value
    ScenarioConfig c = example_config(n_re);
    c.pool.rho_bank = std::sqrt(0.5);
    c.pool.rho_re = std::sqrt(0.5);
    c.pool.rho_cross = 0.1434;
    return c;
}

// ------------------------------------------------------------------ 1

void criterion1_lhplus_equivalence() {
    Timer timer;
    PoolParams p;
    p.lambda_bank = hazard_from_pd(0.199, 10.0);
    p.lambda_re = hazard_from_pd(0.2421, 10.0);
    p.recovery_bank = p.recovery_re = 0.25;
    p.rho_bank = 0.1758;
    p.rho_re = 0.1170;
    p.n_re = 1;
    p.w_re = 0.1061;

    double max_diff = 0.0;
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            const double alpha = 0.05 + 0.9 * i / 9.0;
            const double t = 1.0 + 9.0 * j / 9.0;
            max_diff = std::max(max_diff,
                                std::fabs(loss_exceed_prob(alpha, t, p) -
                                          loss_exceed_prob_lhplus(alpha, t, p)));
            max_diff = std::max(max_diff,
                                std::fabs(expected_capped_loss(alpha, t, p) -
                                          expected_capped_loss_lhplus(alpha, t, p)));
        }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "max |closed - integral| = %.3g (tol 1e-8)",
                  max_diff);
    report(1, "LH+ equivalence on the 10x10 (alpha,t) grid", max_diff <= 1e-8, buf,
           timer.seconds(), 10.0);
}

// ------------------------------------------------------------------ 2

void criterion2_mc_equivalence() {
    Timer timer;
    bool pass = true;
    double worst_z = 0.0;
    const std::vector<double> alphas = {0.1, 0.3, 0.5};
    for (int n : {1, 5, 9}) {
        const CalibratedState base = calibrate_state(example_config(n));
        McSettings mc;
        mc.paths = 1'000'000;
        mc.seed = 90210 + n;
        const McPoolLossResult r = mc_pool_loss(alphas, 10.0, base.pool, mc);
        for (std::size_t i = 0; i < alphas.size(); ++i) {
            const double z_p = std::fabs(loss_exceed_prob(alphas[i], 10.0, base.pool) -
                                         r.exceed[i].mean) /
                               std::max(r.exceed[i].std_error, 1e-15);
            const double z_e =
                std::fabs(expected_capped_loss(alphas[i], 10.0, base.pool) -
                          r.capped[i].mean) /
                std::max(r.capped[i].std_error, 1e-15);
            worst_z = std::max({worst_z, z_p, z_e});
            pass = pass && z_p <= 3.0 && z_e <= 3.0;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst |z| = %.2f over n in {1,5,9} (tol 3 SE)",
                  worst_z);
    report(2, "Monte Carlo equivalence at 1e6 paths", pass, buf, timer.seconds(), 60.0);
}

// ------------------------------------------------------------------ 3

void criterion3_loan_pv01() {
    Timer timer;
    const double lambda = hazard_from_pd(0.2421, 10.0);
    const double pv_bp = loan_pv01(lambda, 0.25, MarketParams{0.0, 10.0}) * 1e4;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "loan PV01 = %.4f bp (band [-8.88, -8.58])", pv_bp);
    report(3, "RE loan PV01 at r = 0", pv_bp >= -8.88 && pv_bp <= -8.58, buf,
           timer.seconds(), 1.0);
}

// ------------------------------------------------------------------ 4

void criterion4_attachment_points() {
    Timer timer;
    bool pass = true;
    char buf[200];
    double a9 = 0.0, a5 = 0.0, gap9 = 0.0, gap5 = 0.0;
    {
        const ScenarioConfig c = example_config(9);
        const CalibratedState base = calibrate_state(c);
        a9 = optimal_attachment(0.1061, base.pool, c.structuring_spec(),
                                c.market_params());
        gap9 = el_constraint_gap(a9, 0.1061, 10.0, base.pool, c.structuring_spec());
        pass = pass && std::fabs(a9 - 0.3168) <= 0.01 && std::fabs(gap9) <= 1e-8;
    }
    {
        const ScenarioConfig c = example_config(5);
        const CalibratedState base = calibrate_state(c);
        a5 = optimal_attachment(0.1061, base.pool, c.structuring_spec(),
                                c.market_params());
        gap5 = el_constraint_gap(a5, 0.1061, 10.0, base.pool, c.structuring_spec());
        pass = pass && std::fabs(a5 - 0.3179) <= 0.01 && std::fabs(gap5) <= 1e-8;
    }
    std::snprintf(buf, sizeof(buf),
                  "alpha*(n=9) = %.4f vs 0.3168+-0.01, alpha*(n=5) = %.4f vs "
                  "0.3179+-0.01, |gap| <= %.1g",
                  a9, a5, std::max(std::fabs(gap9), std::fabs(gap5)));
    report(4, "attachment-point reproduction", pass, buf, timer.seconds(), 0.0);
}

// ------------------------------------------------------------------ 5

void criterion5_correlation_stress() {
    Timer timer;
    // base endpoint (n = 5)
    const ScenarioConfig base_cfg = example_config(5);
    const CalibratedState base = calibrate_state(base_cfg);
    const double a_base =
        optimal_attachment(0.1061, base.pool, base_cfg.structuring_spec(),
                           base_cfg.market_params());
    const Tranche tr_base(a_base, 1.0);
    const double s_base =
        tranche_par_spread(tr_base, base.pool, base_cfg.market_params());
    const double pv_base = tranche_pv01_re(base_cfg, tr_base, s_base).pv01 * 1e4;

    // stressed endpoint
    const ScenarioConfig st_cfg = stress_config(5);
    const CalibratedState stressed = calibrate_state(st_cfg);
    const double a_st =
        optimal_attachment(0.1061, stressed.pool, st_cfg.structuring_spec(),
                           st_cfg.market_params());
    const Tranche tr_st(a_st, 1.0);
    const double s_st = tranche_par_spread(tr_st, stressed.pool, st_cfg.market_params());
    const double pv_st = tranche_pv01_re(st_cfg, tr_st, s_st).pv01 * 1e4;

    const bool alpha_ok = std::fabs(a_st - 0.6707) <= 0.02;
    const bool base_ok = std::fabs(pv_base - (-0.1)) <= 0.20 * 0.1;
    const bool stress_ok = std::fabs(pv_st - (-0.034)) <= 0.20 * 0.034;
    char buf[192];
    std::snprintf(buf, sizeof(buf),
                  "alpha* = %.4f vs 0.6707+-0.02; PV01 %.4f bp vs -0.1 and %.4f bp vs "
                  "-0.034 (+-20%%)",
                  a_st, pv_base, pv_st);
    report(5, "correlation stress sqrt(0.5)", alpha_ok && base_ok && stress_ok, buf,
           timer.seconds(), 0.0);
}

// ------------------------------------------------------------------ 6

void criterion6_prop3_moments() {
    Timer timer;
    bool pass = true;
    double worst_z = 0.0;
    int checked = 0;

    auto check_one = [&](const BalanceSheet& bs, const CorrelationTriple& corr,
                         std::uint64_t seed) {
        EnlargedMoments cf;
        try {
            cf = enlarge_balance_sheet(bs, corr);
        } catch (const std::exception&) {
            return;  // outside the approximation's validity; not a sample
        }
        McSettings mc;
        mc.paths = 10'000'000;
        mc.seed = seed;
        const McMomentsResult est = mc_enlarged_moments(bs, corr, mc);
        const double z1 = std::fabs(cf.sigma_bar * cf.sigma_bar - est.variance.mean) /
                          std::max(est.variance.std_error, 1e-15);
        const double z2 = std::fabs(cf.rho_bar - est.rho_ij.mean) /
                          std::max(est.rho_ij.std_error, 1e-15);
        const double z3 = std::fabs(cf.rho_bar_bre - est.rho_bre.mean) /
                          std::max(est.rho_bre.std_error, 1e-15);
        worst_z = std::max({worst_z, z1, z2, z3});
        pass = pass && z1 <= 3.0 && z2 <= 3.0 && z3 <= 3.0;
        ++checked;
    };

    // example calibration
    check_one(BalanceSheet{0.9, 0.01, implied_asset_vol(0.199, 0.9, 10.0),
                           implied_asset_vol(0.2421, 0.9, 10.0)},
              CorrelationTriple{0.1758, 0.1170, 0.14341757214511756}, 424242);

    // 20 randomized valid parameter sets
    std::mt19937_64 gen(1234567);
    std::uniform_real_distribution<double> urho(0.0, 0.8), ufrac(0.0, 0.99),
        usig(0.01, 0.35), ufa(0.0, 0.05);
    while (checked < 21) {
        const double rb = urho(gen), rr = urho(gen);
        const double rrb = ufrac(gen) * std::sqrt(rb * rr);
        check_one(BalanceSheet{0.9, ufa(gen), usig(gen), usig(gen)},
                  CorrelationTriple{rb, rr, rrb}, 777000 + checked);
    }

    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst |z| = %.2f over %d parameter sets (tol 3 SE)",
                  worst_z, checked);
    report(6, "enlarged-moment validation at 1e7 draws", pass, buf, timer.seconds(),
           120.0);
}

// ------------------------------------------------------------------ 7

void criterion7_cholesky_exactness() {
    Timer timer;
    double max_err = 0.0;
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            for (int k = 0; k < 5; ++k) {
                const double rb = 0.9 * i / 4.0;
                const double rr = 0.9 * j / 4.0;
                const double rrb = (k / 4.0) * std::sqrt(rb * rr) * 0.999;
                const LowerTriangular4 c = cholesky4(rb, rr, rrb);
                const auto p = c.self_product();
                const double target[4][4] = {{1, rb, rrb, rrb},
                                             {rb, 1, rrb, rrb},
                                             {rrb, rrb, 1, rr},
                                             {rrb, rrb, rr, 1}};
                for (int a = 0; a < 4; ++a)
                    for (int b = 0; b < 4; ++b)
                        max_err =
                            std::max(max_err, std::fabs(p[a][b] - target[a][b]));
            }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max |C C^T - Sigma| = %.3g (tol 1e-12)", max_err);
    report(7, "closed-form Cholesky exactness on the 5x5x5 grid", max_err <= 1e-12, buf,
           timer.seconds(), 0.0);
}

// ------------------------------------------------------------------ 8

void criterion8_sign_suite() {
    Timer timer;
    bool pass = true;
    std::string first_violation;

    auto check_config = [&](const ScenarioConfig& cfg, const std::string& tag) {
        const MarketParams market = cfg.market_params();
        const StructuringSpec spec = cfg.structuring_spec();
        const CalibratedState base = calibrate_state(cfg);
        const CalibratedState bumped = calibrate_state(cfg, 1e-4);
        const double w = cfg.pool.w_re;

        const double alpha = optimal_attachment(w, base.pool, spec, market);
        const Tranche tr(alpha, 1.0);
        const double s = tranche_par_spread(tr, base.pool, market);

        auto fail = [&](const std::string& what) {
            pass = false;
            if (first_violation.empty()) first_violation = tag + ": " + what;
        };

        // PV01_RE < 0
        const double pv0 = tranche_price(tr, s, bumped.pool, market) -
                           tranche_price(tr, s, base.pool, market);
        if (!(pv0 < 0.0)) fail("PV01_RE not negative");

        // d PV01 / d alpha > 0 (central difference at the repriced par
        // spread, matching the optimiser's objective)
        const double ha = 0.02;
        auto pv_at_alpha = [&](double a) {
            const Tranche t2(a, 1.0);
            const double s2 = tranche_par_spread(t2, base.pool, market);
            return tranche_price(t2, s2, bumped.pool, market) -
                   tranche_price(t2, s2, base.pool, market);
        };
        if (!(pv_at_alpha(alpha + ha) > pv_at_alpha(alpha - ha)))
            fail("dPV01/dalpha not positive");

        // d PV01 / d w < 0 along alpha*(w)
        const double hw = 0.01;
        const double lpv = loan_pv01(base.pool.lambda_re, base.pool.recovery_re, market);
        const SeniorPoint up =
            evaluate_senior_point(base.pool.with_weight(w + hw),
                                  bumped.pool.with_weight(w + hw), lpv, spec, market);
        const SeniorPoint dn =
            evaluate_senior_point(base.pool.with_weight(w - hw),
                                  bumped.pool.with_weight(w - hw), lpv, spec, market);
        if (!(up.pv01_re < dn.pv01_re)) fail("dPV01/dw not negative");

        // dV/ds > 0 and dV/dalpha > 0 at fixed spread
        const double hs = 1e-4;
        if (!(tranche_price(tr, s + hs, base.pool, market) >
              tranche_price(tr, s - hs, base.pool, market)))
            fail("dV/ds not positive");
        if (!(tranche_price(Tranche(alpha + ha, 1.0), s, base.pool, market) >
              tranche_price(Tranche(alpha - ha, 1.0), s, base.pool, market)))
            fail("dV/dalpha not positive");
    };

    check_config(example_config(5), "base");

    // 10 perturbed configurations around the base calibration
    std::mt19937_64 gen(31337);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 10; ++i) {
        ScenarioConfig cfg = example_config(5);
        cfg.pool.bank_pd_T = 0.199 * (1.0 + 0.2 * u(gen));
        cfg.pool.re_pd_T = 0.2421 * (1.0 + 0.2 * u(gen));
        cfg.pool.rho_bank = 0.1758 * (1.0 + 0.3 * u(gen));
        cfg.pool.rho_re = 0.1170 * (1.0 + 0.3 * u(gen));
        cfg.pool.w_re = 0.1061 * (1.0 + 0.4 * u(gen));
        cfg.pool.n_re = 3 + i % 7;
        cfg.validate();
        check_config(cfg, "perturbed " + std::to_string(i));
    }

    report(8, "sensitivity sign suite on 11 configs", pass,
           pass ? "all signs correct" : std::string("first violation: ") + first_violation,
           timer.seconds(), 0.0);
}

// ------------------------------------------------------------------ 9

void criterion9_figure_shapes() {
    Timer timer;
    const ScenarioConfig cfg = example_config(9);
    const MarketParams market = cfg.market_params();
    const StructuringSpec spec = cfg.structuring_spec();

    // sweep over n at fixed total weight: alpha* nonincreasing, spread
    // near-constant
    bool alpha_monotone = true;
    double spread_min = 1.0, spread_max = 0.0;
    {
        const CalibratedState base = calibrate_state(cfg);
        double prev_alpha = 1.0;
        for (int n = 1; n <= 30; ++n) {
            PoolParams p = base.pool;
            p.n_re = n;
            const double a = optimal_attachment(0.1061, p, spec, market);
            if (a > prev_alpha + 1e-9) alpha_monotone = false;
            prev_alpha = a;
            const double s = tranche_par_spread(Tranche(a, 1.0), p, market);
            spread_min = std::min(spread_min, s);
            spread_max = std::max(spread_max, s);
        }
    }
    const bool spread_const = (spread_max - spread_min) <= 0.05 * spread_max;

    // sweep over w for the three RE credit-quality scenarios: alpha*
    // ordering low-PD < base < high-PD at matched weights
    bool ordering = true;
    {
        std::vector<double> pds = {0.01, 0.2421, 0.40};
        std::vector<std::vector<double>> alpha(3);
        for (std::size_t sc = 0; sc < pds.size(); ++sc) {
            ScenarioConfig c2 = cfg;
            c2.pool.n_re = 5;
            c2.pool.re_pd_T = pds[sc];
            const CalibratedState st = calibrate_state(c2);
            for (double w : {0.05, 0.15, 0.3, 0.5, 0.7})
                alpha[sc].push_back(optimal_attachment(w, st.pool, spec, market));
        }
        for (std::size_t i = 0; i < alpha[0].size(); ++i)
            ordering = ordering && alpha[0][i] < alpha[1][i] && alpha[1][i] < alpha[2][i];
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "alpha* monotone in n: %s; spread range %.3g..%.3g; PD ordering: %s",
                  alpha_monotone ? "yes" : "no", spread_min, spread_max,
                  ordering ? "yes" : "no");
    report(9, "figure-shape reproduction", alpha_monotone && spread_const && ordering,
           buf, timer.seconds(), 0.0);
}

// ----------------------------------------------------------------- 10

void criterion10_determinism() {
    Timer timer;
    ScenarioConfig cfg;
    cfg.mc.paths = 200'000;
    cfg.mc.chunk = 8'192;
    cfg.mc.seed = 1789;

    const ValidationResult r1 = run_validation(cfg, 1);
    const ValidationResult r4 = run_validation(cfg, 4);
    const ValidationResult r8 = run_validation(cfg, 8);
    const bool identical = r1.report == r4.report && r4.report == r8.report;
    report(10, "byte-identical validation across 1/4/8 threads", identical && r1.passed,
           identical ? (r1.passed ? "identical reports, all checks pass"
                                  : "identical reports but checks fail")
                     : "reports differ",
           timer.seconds(), 0.0);
}

}  // namespace

int main() {
    std::printf("LH++ acceptance suite\n");
    criterion1_lhplus_equivalence();
    criterion2_mc_equivalence();
    criterion3_loan_pv01();
    criterion4_attachment_points();
    criterion5_correlation_stress();
    criterion6_prop3_moments();
    criterion7_cholesky_exactness();
    criterion8_sign_suite();
    criterion9_figure_shapes();
    criterion10_determinism();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria FAILED\n", g_failures);
    return g_failures == 0 ? 0 : 1;
}
