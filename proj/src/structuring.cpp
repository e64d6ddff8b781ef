#include "lhpp/structuring.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <thread>
#include <vector>

#include "lhpp/errors.hpp"
#include "lhpp/numerics.hpp"

namespace lhpp {

namespace {

constexpr double kAlphaLo = 1e-6;
constexpr double kAlphaHi = 1.0 - 1e-6;

double constraint_gap(double alpha, double t, const PoolParams& params,
                      const StructuringSpec& spec, double el_at_one) {
    if (spec.constraint == RatingConstraint::hitting_prob)
        return loss_exceed_prob(alpha, t, params) - spec.pd_aaa;
    const double q =
        1.0 - (el_at_one - expected_capped_loss(alpha, t, params)) / (1.0 - alpha);
    return (1.0 - q) - spec.pd_aaa * (1.0 - params.recovery_bank);
}

}  // namespace

void StructuringSpec::validate() const {
    if (!(pd_aaa > 0.0 && pd_aaa < 1.0))
        throw parameter_error("StructuringSpec: pd_aaa must lie in (0,1)");
    if (!(alpha_max >= 0.0 && alpha_max <= 1.0))
        throw parameter_error("StructuringSpec: alpha_max must lie in [0,1]");
    if (w_grid < 2) throw parameter_error("StructuringSpec: w_grid must be >= 2");
}

double el_constraint_gap(double alpha, double w, double t, const PoolParams& params,
                         const StructuringSpec& spec) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::domain_error("el_constraint_gap: alpha must lie in (0,1)");
    const PoolParams p = params.with_weight(w);
    p.validate();
    return constraint_gap(alpha, t, p, spec, expected_capped_loss(1.0, t, p));
}

double optimal_attachment(double w, const PoolParams& params, const StructuringSpec& spec,
                          const MarketParams& market) {
    spec.validate();
    market.validate();
    const double T = market.maturity;
    const PoolParams p = params.with_weight(w);
    p.validate();
    const double el1 = expected_capped_loss(1.0, T, p);
    auto gap = [&](double a) { return constraint_gap(a, T, p, spec, el1); };

    if (gap(kAlphaLo) <= 0.0) return 0.0;  // feasible down to a zero attachment
    if (gap(kAlphaHi) > 0.0)
        throw infeasibility_error(
            "optimal_attachment: rating constraint unattainable for any attachment point");
    return find_root(gap, Interval(kAlphaLo, kAlphaHi), 1e-9);
}

SeniorPoint evaluate_senior_point(const PoolParams& base, const PoolParams& bumped,
                                  double loan_pv01, const StructuringSpec& spec,
                                  const MarketParams& market) {
    SeniorPoint pt{};
    pt.alpha_star = optimal_attachment(base.w_re, base, spec, market);
    const Tranche senior(pt.alpha_star, 1.0);
    pt.spread = tranche_par_spread(senior, base, market);
    const double base_value = tranche_price(senior, pt.spread, base, market);
    const double bumped_value = tranche_price(senior, pt.spread, bumped, market);
    pt.pv01_re = bumped_value - base_value;
    pt.delta_re = loan_pv01 != 0.0 ? pt.pv01_re / loan_pv01 : 0.0;
    return pt;
}

StructuringResult optimal_weight(const PoolParams& base, const PoolParams& bumped,
                                 const StructuringSpec& spec, const MarketParams& market,
                                 int threads) {
    spec.validate();
    market.validate();
    if (base.n_re < 1)
        throw parameter_error("optimal_weight: need n_re >= 1 to sweep the RE weight");

    struct Point {
        double w = 0.0;
        double alpha = 0.0;
        double pv01 = 0.0;
        bool feasible = false;
    };

    auto evaluate = [&](double w) {
        Point pt;
        pt.w = w;
        try {
            pt.alpha = optimal_attachment(w, base, spec, market);
        } catch (const infeasibility_error&) {
            return pt;
        }
        if (pt.alpha > spec.alpha_max + 1e-12) return pt;
        const Tranche senior(pt.alpha, 1.0);
        const double s = tranche_par_spread(senior, base.with_weight(w), market);
        pt.pv01 = tranche_price(senior, s, bumped.with_weight(w), market) -
                  tranche_price(senior, s, base.with_weight(w), market);
        pt.feasible = true;
        return pt;
    };

    // grid pass, parallel over points
    const int n = spec.w_grid;
    std::vector<Point> grid(n);
    {
        std::atomic<int> next{0};
        const unsigned hw = std::thread::hardware_concurrency();
        const int nthreads =
            std::min(n, threads > 0 ? threads : static_cast<int>(hw > 0 ? hw : 1));
        std::vector<std::thread> pool;
        for (int tix = 0; tix < nthreads; ++tix)
            pool.emplace_back([&] {
                for (;;) {
                    const int i = next.fetch_add(1);
                    if (i >= n) return;
                    grid[i] = evaluate(static_cast<double>(i) / (n - 1));
                }
            });
        for (auto& th : pool) th.join();
    }

    auto better = [](const Point& a, const Point& b) {
        // larger |pv01| wins; ties (within 1e-12) go to the smaller weight
        if (!b.feasible) return false;
        if (!a.feasible) return true;
        const double da = std::fabs(a.pv01), db = std::fabs(b.pv01);
        if (std::fabs(da - db) <= 1e-12) return b.w < a.w;
        return db > da;
    };

    Point best;
    int best_ix = -1;
    for (int i = 0; i < n; ++i)
        if (better(best, grid[i])) {
            best = grid[i];
            best_ix = i;
        }
    if (best_ix < 0)
        throw infeasibility_error(
            "optimal_weight: no weight satisfies the tranche-size constraint");

    // golden-section refinement between the incumbent's neighbours
    const double step = 1.0 / (n - 1);
    double lo = std::max(0.0, best.w - step), hi = std::min(1.0, best.w + step);
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - gr * (hi - lo), d = lo + gr * (hi - lo);
    Point pc = evaluate(c), pd = evaluate(d);
    for (int it = 0; it < 60 && hi - lo > 1e-7; ++it) {
        if (better(pd, pc)) {  // pc better than pd
            hi = d;
            d = c;
            pd = pc;
            c = hi - gr * (hi - lo);
            pc = evaluate(c);
        } else {
            lo = c;
            c = d;
            pc = pd;
            d = lo + gr * (hi - lo);
            pd = evaluate(d);
        }
        if (better(best, pc)) best = pc;
        if (better(best, pd)) best = pd;
    }

    StructuringResult res;
    res.w_star = best.w;
    res.alpha_star = best.alpha;
    res.pv01_re = best.pv01;
    const double grid_tol = std::max(1e-4, step * 0.51);
    if (best.w >= 1.0 - 1e-9)
        res.binding = "w=1";
    else if (std::fabs(best.alpha - spec.alpha_max) <= grid_tol)
        res.binding = "size";
    else
        res.binding = "w-boundary";
    return res;
}

}  // namespace lhpp
