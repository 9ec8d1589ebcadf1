#pragma once

#include "refund/params.hpp"

namespace refund {

/// Posterior after `tau` units of no news, starting from `mu0`, when the
/// conclusive-news rate is `rate`:  mu(tau) = (1 + (1-mu0)/mu0 * e^{rate*tau})^-1.
/// Beliefs exactly 0 or 1 are absorbing and are returned unchanged.
double belief_path(double mu0, double tau, double rate);

/// Time for the no-news posterior to fall from mu0 to beta:
/// T0 = [log-odds(mu0) - log-odds(beta)] / rate.  Requires 0 < beta <= mu0 < 1.
double time_to_belief(double mu0, double beta, double rate);

/// Flow cost per unit of belief movement, k / (rate * mu * (1-mu)).
/// Diverges at the boundary beliefs (domain error).
double marginal_cost(double mu, double k, double rate);
double marginal_cost(double mu, const ModelParams& p);

/// Belief at which a learning buyer's continuation value hits zero,
/// q(t_b) = k / (lambda * (v - t_b)).  Requires t_b < v - k/lambda.
double quitting_belief(double price, const ModelParams& p);

/// Inverse of the quitting belief: q^{-1}(mu) = v - k / (lambda * mu).
double quitting_price(double mu, const ModelParams& p);

/// Prior interval on which learning can ever pay, i.e. the two roots of
/// mu(1-mu) = k/(lambda v), together with the price interval [mu_low*v, mu_high*v]
/// on which the quitting and trial beliefs are defined.
struct LearningRegion {
    double mu_low;
    double mu_high;
    double price_low;   // learning becomes viable at prices above this
    double price_high;  // and below this
};
LearningRegion learning_region(const ModelParams& p);

/// Solution of the learning ODE anchored at (anchor_belief, anchor_value),
/// with high-type surplus `high_surplus` and cost ratio `cost_ratio` = k/rate.
/// The good-news value function and its post-purchase variant (shifted
/// boundary, faster rate) are both instances of this one closed form.
double anchored_value(double mu, double high_surplus, double cost_ratio,
                      double anchor_belief, double anchor_value);
double anchored_slope(double mu, double high_surplus, double cost_ratio,
                      double anchor_belief, double anchor_value);

/// The raw closed-form solution V(mu; t_b) through (q(t_b), 0); defined for
/// any interior mu, without the piecewise max against quitting/consuming.
double value_if_learning(double mu, double price, const ModelParams& p);
double slope_if_learning(double mu, double price, const ModelParams& p);

/// Smallest belief above which immediate consumption beats learning:
/// the unique root of V(Q; t_b) = Q*v - t_b on [q(t_b), 1).  Requires the
/// price to lie in the learning window [price_low, price_high].
double trial_belief(double price, const ModelParams& p);

/// Inverse of the trial belief (the learning-deterrence price for prior mu0).
double trial_price(double mu0, const ModelParams& p);

/// The buyer's option value V^0(mu; t_b) and its belief derivative.
/// Caches the two cutoff beliefs so repeated evaluation is O(1).
class ValueProfile {
  public:
    ValueProfile(double price, const ModelParams& p);

    double price() const { return price_; }
    /// Whether the price lies in the learning window (otherwise V^0 = max{0, mu*v - t_b}).
    bool learning_price() const { return learning_; }
    double quit_belief() const;
    double trial() const;

    double value(double mu) const;
    double slope(double mu) const;

  private:
    double price_;
    double v_;
    double c_;
    bool learning_;
    double q_ = 0.0;
    double big_q_ = 0.0;
};

/// Convenience wrappers; construct a ValueProfile for repeated evaluation.
double value_v0(double mu, double price, const ModelParams& p);
double value_v0_slope(double mu, double price, const ModelParams& p);

/// Ex-ante value of the strategy "learn until the posterior hits beta or 1,
/// buy on good news at t_b, walk away at beta":
/// U = mu0(1-e^{-lambda T0})(v-t_b) - mu0*k*E[T1] - (1-mu0)*k*T0.
double ex_ante_utility(double beta, double mu0, double price, const ModelParams& p);

}  // namespace refund
