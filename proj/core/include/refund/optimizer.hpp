#pragma once

#include "refund/mechanism.hpp"

#include <string>

namespace refund {

/// Prices bracketing the stochastic-return range: the interior stopping
/// belief equals the trial belief at t_star = Q^{-1}(0.5) and the quitting
/// belief at t_2star = v/2.  Both are invariant to the prior.
struct PriceThresholds {
    double t_star;
    double t_2star;
};
PriceThresholds price_thresholds(const ModelParams& p);

/// Interior optimal stopping belief for a fixed price: the root in
/// [q(t_b), 0.5] of k/(lambda*beta) = t_b - t_r(beta, t_b).
/// Defined for prices in [t_star, t_2star].
double interior_beta(double price, const ModelParams& p);

/// d(interior_beta)/d(t_b) in closed form; <= 0, diverging to -inf as the
/// price approaches t_star (returned as -inf there).
double interior_beta_slope(double price, const ModelParams& p);

/// Optimal stopping belief for a price in [Q^{-1}(mu0), q^{-1}(mu0)].
/// `attained == false` flags the supremum-only cases where the optimal
/// distribution degenerates toward the prior (beta -> mu0, no mechanism
/// attains it); the solver never selects those.
struct BetaStar {
    double beta;
    bool attained;
};
BetaStar optimal_beta_for_price(double price, double mu0, const ModelParams& p);

/// Price elasticity of the return rate along the optimally-adjusted
/// stopping belief and along the quitting belief, plus their ratio
/// -E_r(interior)/E_r(quit) = beta^2 / (q^2 (1 - 2 beta)) > 1.
struct ElasticityReport {
    double interior;       // E_r along interior_beta(t_b), negative
    double full_learning;  // E_r along q(t_b), positive
    double ratio;          // -interior / full_learning
};
ElasticityReport elasticity_report(double price, const ModelParams& p);

/// (1-gamma)/gamma - q/(1-q) evaluated along the interior branch; the sign
/// of the marginal revenue from a price increase.  Single-crosses 0 from
/// below on (t_star, t_2star).
double marginal_revenue_sign(double price, double mu0, const ModelParams& p);

/// Expected revenue along the interior branch at this price.
double interior_branch_revenue(double price, double mu0, const ModelParams& p);

enum class MechanismForm { FullPriceNoReturn, LearningDeterrence, StochasticReturn, FreeReturn };
std::string to_string(MechanismForm f);

struct Solution {
    MechanismForm form;
    RefundMechanism mechanism;
    double beta_star;
    double revenue;
    double buyer_surplus;
};

/// No-return mechanism at the highest price the buyer accepts without
/// learning, Q^{-1}(mu0).  Domain: mu0 inside the learning region.
Solution learning_deterrence_solution(double mu0, const ModelParams& p);

/// Free-return mechanism at the revenue-maximizing price
/// t^F = v - c - sqrt(c (v-c) (1-mu0)/mu0), clamped into the feasible
/// price window.  Domain: mu0 > k/(lambda v).
Solution free_return_solution(double mu0, const ModelParams& p);

/// The optimal refund mechanism: full price with no returns outside the
/// learning region, otherwise the better of deterrence and free return
/// (deterministic policies only are compared; ties go to deterrence).
Solution optimal_mechanism(double mu0, const ModelParams& p);

/// Prior-space map: learning region, the free-return interval F (possibly
/// empty), and the largest cost ratio c* at which F survives.
struct RegionMap {
    double mu_low;
    double mu_high;
    bool has_free_return;
    double f_low;   // meaningful only when has_free_return
    double f_high;
    double c_star;
};
RegionMap region_map(const ModelParams& p, int grid_size = 512);

/// Largest c = k/lambda with a nonempty free-return interval, by bisection;
/// refined until the surviving interval is narrower than `width_tol`.
double critical_cost_ratio(const ModelParams& p, double width_tol = 1e-6);

}  // namespace refund
