#pragma once

#include <string>

#include "lhpp/instruments.hpp"
#include "lhpp/loss_model.hpp"

namespace lhpp {

enum class RatingConstraint { expected_loss, hitting_prob };

struct StructuringSpec {
    double pd_aaa = 0.007;     // PD of a AAA loan at the horizon
    double alpha_max = 1.0;    // minimum senior tranche size 1 - alpha_max
    int w_grid = 101;          // resolution of the weight search
    RatingConstraint constraint = RatingConstraint::expected_loss;

    void validate() const;
};

struct StructuringResult {
    double w_star = 0.0;
    double alpha_star = 0.0;
    double pv01_re = 0.0;     // at the optimum, in price units
    std::string binding;      // "size", "w=1" or "w-boundary"
};

/// Rating-constraint residual of the senior tranche (alpha, 1] at weight w:
/// negative means the constraint is satisfied. Expected-loss form
///   (1 - q(t)) - pd_aaa (1 - R),
/// hitting-probability form P(L_t >= alpha) - pd_aaa.
double el_constraint_gap(double alpha, double w, double t, const PoolParams& params,
                         const StructuringSpec& spec);

/// Smallest attachment point satisfying the rating constraint: the binding
/// root of el_constraint_gap, or 0 when every attachment point is feasible.
/// Throws infeasibility_error when no attachment point satisfies it.
double optimal_attachment(double w, const PoolParams& params, const StructuringSpec& spec,
                          const MarketParams& market);

/// Senior-tranche quantities at one weight: binding attachment point, par
/// spread, RE sensitivity of the par tranche and its hedge ratio.
struct SeniorPoint {
    double alpha_star;
    double spread;
    double pv01_re;    // price units
    double delta_re;
};
SeniorPoint evaluate_senior_point(const PoolParams& base, const PoolParams& bumped,
                                  double loan_pv01, const StructuringSpec& spec,
                                  const MarketParams& market);

/// Grid search over the direct-RE weight w maximising |PV01_RE| subject to
/// alpha*(w) <= alpha_max, refined by golden section around the incumbent.
/// `base` and `bumped` are the unbumped and 1bp-RE-bumped parameter
/// templates; their w_re is overridden along the sweep.
StructuringResult optimal_weight(const PoolParams& base, const PoolParams& bumped,
                                 const StructuringSpec& spec, const MarketParams& market,
                                 int threads = 0);

}  // namespace lhpp
