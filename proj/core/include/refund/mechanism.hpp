#pragma once

#include "refund/learning.hpp"
#include "refund/params.hpp"

namespace refund {

/// A posted price plus return policy.  On a return request the buyer keeps
/// the product with probability `keep_prob` and pays `return_transfer` net
/// (plus `cancel_fee` when post-purchase learning is faster).
struct RefundMechanism {
    double price = 0.0;            // t_b
    double keep_prob = 1.0;        // x_r in [0,1]
    double return_transfer = 0.0;  // t_r in [0, t_b]
    double cancel_fee = 0.0;       // t_c >= 0

    static RefundMechanism no_return(double price) { return {price, 1.0, price, 0.0}; }
    static RefundMechanism free_return(double price) { return {price, 0.0, 0.0, 0.0}; }

    double return_utility(double mu, double v) const {
        return mu * v * keep_prob - return_transfer - cancel_fee;
    }
    double keep_utility(double mu, double v) const { return mu * v - price; }
};

/// Binary-support distribution of stopping beliefs: mass (1-mu0)/(1-beta)
/// at `beta`, remainder at 1; or the degenerate point mass at mu0.
struct StoppingDistribution {
    double mu0;
    double beta;
    bool degenerate;

    static StoppingDistribution good_news(double mu0, double beta) { return {mu0, beta, false}; }
    static StoppingDistribution dirac(double mu0) { return {mu0, mu0, true}; }

    /// Return rate gamma(beta) = (1-mu0)/(1-beta); 0 for the degenerate kind.
    double return_rate() const { return degenerate ? 0.0 : (1.0 - mu0) / (1.0 - beta); }
    double mean() const {
        return degenerate ? mu0 : return_rate() * beta + (1.0 - return_rate());
    }
};

/// Lowest implementable stopping belief for prior mu0: q(Q^{-1}(mu0)).
double beta_floor(double mu0, const ModelParams& p);

/// The unique return policy making "stop at beta" the buyer's best response
/// to price t_b: keep_prob from smooth pasting, transfer from value matching
/// (equivalently the saved information cost integral).  beta must lie in
/// [q(t_b), 1) and the price in the learning window.
RefundMechanism return_policy_for(double beta, double price, const ModelParams& p);

/// Seller revenue as a function of the reported stopping belief:
/// 0 below q(t_b), the return transfer t_r(mu, t_b) on [q, mu0), t_b above.
double transfer_at(double mu, double price, double mu0, const ModelParams& p);

/// gamma * t_r + (1 - gamma) * t_b for the two-point distribution; t_b for
/// the degenerate one.  Throws if beta < q(t_b) (not implementable).
double expected_revenue(const StoppingDistribution& dist, double price, const ModelParams& p);

/// Diagnostic implementability check: signed residuals of IR, obedience
/// (value matching + smooth pasting at beta) and the two IC inequalities.
struct ImplementabilityReport {
    bool ir_ok, ob_ok, ic_ok;
    double ir_residual;          // V_P(mu0; m) - V^0(mu0; t_b), 0 when IR binds
    double ob_value_residual;    // return utility at beta - V^0(beta; t_b)
    double ob_slope_residual;    // v*x_r - dV^0/dmu at beta
    double ob_prior_margin;      // V_P(mu0; m) - max{keep, return at mu0} (>= 0: willing to learn)
    double ic_return_margin;     // return utility - keep utility at beta (> 0 required)
    double ic_keep_margin;       // keep - return utility at belief 1 (> 0 required)
    bool pass() const { return ir_ok && ob_ok && ic_ok; }
};
ImplementabilityReport check_implementable(const RefundMechanism& m, double beta, double mu0,
                                           const ModelParams& p, double tol = 1e-8);

/// Ex-ante buyer value of the strategy "stop at beta" under mechanism m
/// (payoffs realized at the stopping decision, as in the ex-ante utility).
double strategy_value(const RefundMechanism& m, double beta, double mu0, const ModelParams& p);

}  // namespace refund
