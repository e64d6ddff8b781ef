#pragma once

#include <cstdint>
#include <vector>

#include "lhpp/loss_model.hpp"
#include "lhpp/merton.hpp"

namespace lhpp {

struct McSettings {
    std::int64_t paths = 1'000'000;
    std::uint64_t seed = 42;
    std::int64_t chunk = 65536;    // paths per deterministic stream block
    bool antithetic = false;       // pair-averaged antithetic sampling
    int lhp_obligors = 0;          // 0 = infinitely granular LHP leg
    int threads = 0;               // 0 = hardware concurrency

    void validate() const;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t paths = 0;
};

/// P(L_t > alpha) by simulation of the one-factor copula.
McEstimate mc_loss_exceed_prob(double alpha, double t, const PoolParams& params,
                               const McSettings& mc);

/// E[min(L_t, alpha)] by simulation.
McEstimate mc_expected_capped_loss(double alpha, double t, const PoolParams& params,
                                   const McSettings& mc);

/// Shared-path batch over several cap levels; one row per alpha.
struct McPoolLossResult {
    std::vector<McEstimate> exceed;
    std::vector<McEstimate> capped;
};
McPoolLossResult mc_pool_loss(const std::vector<double>& alphas, double t,
                              const PoolParams& params, const McSettings& mc);

/// Simulated draw of (V_t, #defaulted RE loans, pool loss) for the leading
/// paths; exposes the conditional loss decomposition for testing.
struct PathRecord {
    double factor;
    int re_defaults;
    double loss;
};
std::vector<PathRecord> mc_inspect_paths(double t, const PoolParams& params,
                                         const McSettings& mc, int max_paths);

/// Sample moments of the enlarged balance-sheet log return: variance,
/// correlation between two enlarged banks, and correlation between an
/// enlarged bank and an external RE loan. Estimates and standard errors by
/// batch means over chunks.
struct McMomentsResult {
    McEstimate variance;
    McEstimate rho_ij;
    McEstimate rho_bre;
};
McMomentsResult mc_enlarged_moments(const BalanceSheet& bs, const CorrelationTriple& corr,
                                    const McSettings& mc);

/// Exact (non-expanded) two-asset default frequency P(A_T + F_T <=
/// e^(rT) (D0 + F0)); quantifies the first-order-approximation gap in the
/// enlarged PD.
McEstimate mc_exact_enlarged_pd(const BalanceSheet& bs, const CorrelationTriple& corr,
                                double horizon, const McSettings& mc);

/// Monte Carlo check of the closed lognormal moments.
struct McLognormalResult {
    McEstimate m1;
    McEstimate m2;
};
McLognormalResult mc_lognormal_momentss(double sigma_x, double sigma_y, const McSettings& mc);

}  // namespace lhpp
