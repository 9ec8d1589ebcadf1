#pragma once

#include "refund/optimizer.hpp"

namespace refund {

/// Bad-news learning: conclusive bad news arrives at rate rho in the low
/// state, so the no-news posterior drifts upward and the buyer returns only
/// at belief 0.  Return policies are free returns throughout (x_r = t_r = 0).

/// Consumption belief Q_N(t_b) = 1 - k/(rho t_b); requires t_b > k/rho.
double consumption_belief_n(double price, const ModelParams& p);

/// Inverse: the price that implements consumption belief alpha,
/// Q_N^{-1}(alpha) = k / (rho (1 - alpha)).
double consumption_price_n(double alpha, const ModelParams& p);

/// Largest implementable consumption belief for prior mu0: the root
/// alpha0 in (mu0, 1) of the zero-participation-value condition.
double alpha_max(double mu0, const ModelParams& p);

/// Buyer's participation value at prior mu0 under a free-return mechanism
/// implementing consumption belief alpha (the alpha_max root function).
double badnews_value(double mu0, double alpha, const ModelParams& p);

/// Upward-drift stopping distribution: mass 1 - mu0/alpha at 0 and
/// mu0/alpha at alpha.
struct BadNewsDistribution {
    double mu0;
    double alpha;
    double mass_at_zero() const { return 1.0 - mu0 / alpha; }
    double mass_at_alpha() const { return mu0 / alpha; }
    double mean() const { return mass_at_alpha() * alpha; }
};

/// Transfer over reported stopping beliefs: 0 below mu0, Q_N^{-1}(mu) on
/// [mu0, alpha0], 0 above (unreachable beliefs).
double transfer_n(double mu, double mu0, const ModelParams& p);

/// Learning region [mu_low_N, mu_high_N] (roots of mu(1-mu) = k/(rho v))
/// and the free-return interval F_N, whose right endpoint is mu_high_N.
struct BadNewsRegion {
    double mu_low;
    double mu_high;
    double f_low;
    double f_high;
};
BadNewsRegion badnews_region(const ModelParams& p);

/// Optimal mechanism under bad-news learning: full price outside the
/// region; otherwise deterrence at Q_N^{-1}(mu0) versus free return at
/// Q_N^{-1}(alpha0) with revenue (mu0/alpha0) Q_N^{-1}(alpha0), which
/// reduces to comparing alpha0(1-alpha0) with mu0(1-mu0).  Free-return
/// buyer surplus is exactly zero.
Solution optimal_mechanism_n(double mu0, const ModelParams& p);

}  // namespace refund
