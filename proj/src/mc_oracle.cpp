#include "lhpp/mc_oracle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

#include "lhpp/errors.hpp"
#include "lhpp/numerics.hpp"
#include "lhpp/rng.hpp"

namespace lhpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(block_index, first_path, n_paths) for every chunk; blocks are
// distributed over threads but any shared state must be written per block,
// so results are independent of the thread count.
void run_blocks(const McSettings& mc, const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn) {
    const std::int64_t nblocks = (mc.paths + mc.chunk - 1) / mc.chunk;
    const int nthreads = std::min<std::int64_t>(resolve_threads(mc.threads), nblocks);
    if (nthreads <= 1) {
        for (std::int64_t b = 0; b < nblocks; ++b)
            fn(b, b * mc.chunk, std::min(mc.chunk, mc.paths - b * mc.chunk));
        return;
    }
    std::atomic<std::int64_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (int tix = 0; tix < nthreads; ++tix)
        pool.emplace_back([&] {
            for (;;) {
                const std::int64_t b = next.fetch_add(1);
                if (b >= nblocks) return;
                fn(b, b * mc.chunk, std::min(mc.chunk, mc.paths - b * mc.chunk));
            }
        });
    for (auto& th : pool) th.join();
}

struct SumSq {
    double sum = 0.0;
    double sumsq = 0.0;
    void add(double x) {
        sum += x;
        sumsq += x * x;
    }
};

McEstimate to_estimate(double sum, double sumsq, std::int64_t n) {
    McEstimate e;
    e.paths = n;
    e.mean = sum / n;
    const double var = n > 1 ? std::max(0.0, (sumsq - n * e.mean * e.mean) / (n - 1.0)) : 0.0;
    e.std_error = std::sqrt(var / n);
    return e;
}

// Simulation constants of the pool at time t.
struct PoolKernel {
    double c_t, c_0;
    double sq_rho, sq_one_rho, sq_rho0, sq_one_rho0;
    double loan_lgd, lhp_lgd;
    int n_re;
    int lhp_obligors;

    PoolKernel(double t, const PoolParams& p, int lhp_m)
        : c_t(norm_inv(default_prob(p.lambda_bank, t))),
          c_0(norm_inv(default_prob(p.lambda_re, t))),
          sq_rho(std::sqrt(p.rho_bank)),
          sq_one_rho(std::sqrt(1.0 - p.rho_bank)),
          sq_rho0(std::sqrt(p.rho_re)),
          sq_one_rho0(std::sqrt(1.0 - p.rho_re)),
          loan_lgd(p.per_loan_notional() * (1.0 - p.recovery_re)),
          lhp_lgd(p.lhp_notional() * (1.0 - p.recovery_bank)),
          n_re(p.n_re),
          lhp_obligors(lhp_m) {}

    // evaluates one path from pre-drawn normals z, with sign s (+1/-1 for
    // antithetic reuse); fills factor/defaults and returns the pool loss
    double draw(const std::vector<double>& z, double s, double* factor_out,
                int* k_out) const {
        const double v = s * z[0];
        int k = 0;
        for (int i = 0; i < n_re; ++i) {
            const double x = sq_rho0 * v + sq_one_rho0 * s * z[1 + i];
            if (x <= c_0) ++k;
        }
        double lhp_frac;
        if (lhp_obligors > 0) {
            int defaults = 0;
            for (int i = 0; i < lhp_obligors; ++i) {
                const double y = sq_rho * v + sq_one_rho * s * z[1 + n_re + i];
                if (y <= c_t) ++defaults;
            }
            lhp_frac = static_cast<double>(defaults) / lhp_obligors;
        } else {
            // infinitely granular leg: conditional loss fraction (a.s. limit)
            lhp_frac = c_t == -kInf  ? 0.0
                       : c_t == kInf ? 1.0
                                     : norm_cdf((c_t - sq_rho * v) / sq_one_rho);
        }
        if (factor_out) *factor_out = v;
        if (k_out) *k_out = k;
        return k * loan_lgd + lhp_lgd * lhp_frac;
    }

    int normals_per_path() const { return 1 + n_re + lhp_obligors; }
};

}  // namespace

void McSettings::validate() const {
    if (paths < 1) throw parameter_error("McSettings: paths must be >= 1");
    if (chunk < 1) throw parameter_error("McSettings: chunk must be >= 1");
    if (lhp_obligors < 0) throw parameter_error("McSettings: lhp_obligors must be >= 0");
}

McPoolLossResult mc_pool_loss(const std::vector<double>& alphas, double t,
                              const PoolParams& params, const McSettings& mc) {
    params.validate();
    mc.validate();
    const PoolKernel kernel(t, params, mc.lhp_obligors);
    const std::size_t na = alphas.size();
    const std::int64_t nblocks = (mc.paths + mc.chunk - 1) / mc.chunk;

    struct BlockAcc {
        std::vector<SumSq> exceed, capped;
    };
    std::vector<BlockAcc> acc(nblocks);

    run_blocks(mc, [&](std::int64_t b, std::int64_t, std::int64_t n) {
        Xoshiro256pp rng(mc.seed, static_cast<std::uint64_t>(b));
        BlockAcc& a = acc[b];
        a.exceed.resize(na);
        a.capped.resize(na);
        std::vector<double> z(kernel.normals_per_path());
        for (std::int64_t i = 0; i < n; ++i) {
            for (auto& zi : z) zi = rng.next_normal();
            if (!mc.antithetic) {
                const double loss = kernel.draw(z, 1.0, nullptr, nullptr);
                for (std::size_t j = 0; j < na; ++j) {
                    a.exceed[j].add(loss > alphas[j] ? 1.0 : 0.0);
                    a.capped[j].add(std::min(loss, alphas[j]));
                }
            } else {
                const double lp = kernel.draw(z, 1.0, nullptr, nullptr);
                const double lm = kernel.draw(z, -1.0, nullptr, nullptr);
                for (std::size_t j = 0; j < na; ++j) {
                    a.exceed[j].add(0.5 * ((lp > alphas[j] ? 1.0 : 0.0) +
                                           (lm > alphas[j] ? 1.0 : 0.0)));
                    a.capped[j].add(0.5 * (std::min(lp, alphas[j]) +
                                           std::min(lm, alphas[j])));
                }
            }
        }
    });

    McPoolLossResult out;
    out.exceed.resize(na);
    out.capped.resize(na);
    for (std::size_t j = 0; j < na; ++j) {
        double se = 0.0, se2 = 0.0, sc = 0.0, sc2 = 0.0;
        for (const auto& a : acc) {
            se += a.exceed[j].sum;
            se2 += a.exceed[j].sumsq;
            sc += a.capped[j].sum;
            sc2 += a.capped[j].sumsq;
        }
        out.exceed[j] = to_estimate(se, se2, mc.paths);
        out.capped[j] = to_estimate(sc, sc2, mc.paths);
    }
    return out;
}

McEstimate mc_loss_exceed_prob(double alpha, double t, const PoolParams& params,
                               const McSettings& mc) {
    return mc_pool_loss({alpha}, t, params, mc).exceed.front();
}

McEstimate mc_expected_capped_loss(double alpha, double t, const PoolParams& params,
                                   const McSettings& mc) {
    return mc_pool_loss({alpha}, t, params, mc).capped.front();
}

std::vector<PathRecord> mc_inspect_paths(double t, const PoolParams& params,
                                         const McSettings& mc, int max_paths) {
    params.validate();
    mc.validate();
    const PoolKernel kernel(t, params, mc.lhp_obligors);
    Xoshiro256pp rng(mc.seed, 0);
    std::vector<double> z(kernel.normals_per_path());
    std::vector<PathRecord> records;
    const std::int64_t n = std::min<std::int64_t>(max_paths, std::min(mc.paths, mc.chunk));
    records.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) {
        for (auto& zi : z) zi = rng.next_normal();
        PathRecord rec{};
        rec.loss = kernel.draw(z, 1.0, &rec.factor, &rec.re_defaults);
        records.push_back(rec);
    }
    return records;
}

namespace {

// per-block bivariate accumulator for (x_i, x_j, ln f) moments
struct MomentAcc {
    std::int64_t n = 0;
    double sx = 0, sxx = 0;        // enlarged return of bank i
    double sy = 0, syy = 0, sxy = 0;  // enlarged return of bank j
    double sf = 0, sff = 0, sxf = 0;  // log value of the external RE loan

    double var_x() const { return (sxx - sx * sx / n) / (n - 1.0); }
    double corr_xy() const {
        const double cov = (sxy - sx * sy / n) / (n - 1.0);
        return cov / std::sqrt(var_x() * ((syy - sy * sy / n) / (n - 1.0)));
    }
    double corr_xf() const {
        const double cov = (sxf - sx * sf / n) / (n - 1.0);
        return cov / std::sqrt(var_x() * ((sff - sf * sf / n) / (n - 1.0)));
    }
};

McEstimate batch_estimate(const std::vector<double>& stats) {
    McEstimate e;
    e.paths = static_cast<std::int64_t>(stats.size());
    double s = 0.0;
    for (double v : stats) s += v;
    e.mean = s / stats.size();
    double ss = 0.0;
    for (double v : stats) ss += (v - e.mean) * (v - e.mean);
    e.std_error = stats.size() > 1
                      ? std::sqrt(ss / (stats.size() - 1.0) / stats.size())
                      : 0.0;
    return e;
}

}  // namespace

McMomentsResult mc_enlarged_moments(const BalanceSheet& bs, const CorrelationTriple& corr,
                                    const McSettings& mc) {
    bs.validate();
    mc.validate();
    const LowerTriangular4 chol = cholesky4(corr.rho_b, corr.rho_r, corr.rho_rb);
    const double sb = bs.sigma_bank, sr = bs.sigma_re, fa = bs.re_loan_weight;
    const std::int64_t nblocks = (mc.paths + mc.chunk - 1) / mc.chunk;
    std::vector<MomentAcc> acc(nblocks);

    run_blocks(mc, [&](std::int64_t b, std::int64_t, std::int64_t n) {
        Xoshiro256pp rng(mc.seed, static_cast<std::uint64_t>(b));
        MomentAcc& a = acc[b];
        // first-order enlarged log return, additive constants dropped:
        // sigma_B W_B + (F0/A0) exp((sigma_B^2 - sigma_R^2)/2
        //                           + sigma_R W_R - sigma_B W_B)
        const double pref = fa * std::exp(0.5 * (sb * sb - sr * sr));
        for (std::int64_t i = 0; i < n; ++i) {
            double z[4], w[4];
            for (auto& zi : z) zi = rng.next_normal();
            for (int r = 0; r < 4; ++r) {
                double s = 0.0;
                for (int c = 0; c <= r; ++c) s += chol(r, c) * z[c];
                w[r] = s;
            }
            const double x = sb * w[0] + pref * std::exp(sr * w[2] - sb * w[0]);
            const double y = sb * w[1] + pref * std::exp(sr * w[3] - sb * w[1]);
            const double f = sr * w[3];  // ln of the OTHER bank's RE loan value
            a.n += 1;
            a.sx += x; a.sxx += x * x;
            a.sy += y; a.syy += y * y; a.sxy += x * y;
            a.sf += f; a.sff += f * f; a.sxf += x * f;
        }
    });

    std::vector<double> vars, corrs, corrsf;
    for (const auto& a : acc) {
        if (a.n < 2) continue;
        vars.push_back(a.var_x());
        corrs.push_back(a.corr_xy());
        corrsf.push_back(a.corr_xf());
    }
    if (vars.empty()) throw parameter_error("mc_enlarged_moments: need chunk >= 2");
    McMomentsResult out;
    out.variance = batch_estimate(vars);
    out.rho_ij = batch_estimate(corrs);
    out.rho_bre = batch_estimate(corrsf);
    return out;
}

McEstimate mc_exact_enlarged_pd(const BalanceSheet& bs, const CorrelationTriple& corr,
                                double horizon, const McSettings& mc) {
    bs.validate();
    mc.validate();
    if (!(horizon > 0.0)) throw std::domain_error("mc_exact_enlarged_pd: horizon > 0");
    const double sb = bs.sigma_bank, sr = bs.sigma_re, fa = bs.re_loan_weight;
    const double rrb = corr.rho_rb;
    const double sq = std::sqrt(1.0 - rrb * rrb);
    const double sqT = std::sqrt(horizon);
    // exact default event, r-independent after discounting:
    //   A_T + F_T <= e^(rT) (D0 + F0)
    //   <=> e^(-sb^2 T/2 + sb W_B) + fa e^(-sr^2 T/2 + sr W_R) <= lev + fa
    const double barrier = bs.leverage + fa;
    const std::int64_t nblocks = (mc.paths + mc.chunk - 1) / mc.chunk;
    std::vector<SumSq> acc(nblocks);

    run_blocks(mc, [&](std::int64_t b, std::int64_t, std::int64_t n) {
        Xoshiro256pp rng(mc.seed, static_cast<std::uint64_t>(b));
        SumSq& a = acc[b];
        for (std::int64_t i = 0; i < n; ++i) {
            const double z1 = rng.next_normal();
            const double z2 = rng.next_normal();
            const double wb = sqT * z1;
            const double wr = sqT * (rrb * z1 + sq * z2);
            const double assets = std::exp(-0.5 * sb * sb * horizon + sb * wb) +
                                  fa * std::exp(-0.5 * sr * sr * horizon + sr * wr);
            a.add(assets <= barrier ? 1.0 : 0.0);
        }
    });

    double s = 0.0, ss = 0.0;
    for (const auto& a : acc) {
        s += a.sum;
        ss += a.sumsq;
    }
    return to_estimate(s, ss, mc.paths);
}

McLognormalResult mc_lognormal_momentss(double sigma_x, double sigma_y, const McSettings& mc) {
    mc.validate();
    const std::int64_t nblocks = (mc.paths + mc.chunk - 1) / mc.chunk;
    std::vector<std::pair<SumSq, SumSq>> acc(nblocks);

    run_blocks(mc, [&](std::int64_t b, std::int64_t, std::int64_t n) {
        Xoshiro256pp rng(mc.seed, static_cast<std::uint64_t>(b));
        auto& a = acc[b];
        for (std::int64_t i = 0; i < n; ++i) {
            const double x = rng.next_normal();
            const double y = rng.next_normal();
            a.first.add(x * std::exp(sigma_x * x));
            a.second.add(x * std::exp(sigma_x * x + sigma_y * y));
        }
    });

    double s1 = 0, ss1 = 0, s2 = 0, ss2 = 0;
    for (const auto& a : acc) {
        s1 += a.first.sum;
        ss1 += a.first.sumsq;
        s2 += a.second.sum;
        ss2 += a.second.sumsq;
    }
    return {to_estimate(s1, ss1, mc.paths), to_estimate(s2, ss2, mc.paths)};
}

}  // namespace lhpp
