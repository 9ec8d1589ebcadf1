#pragma once

#include "refund/optimizer.hpp"

namespace refund {

/// Quitting belief for post-purchase learning under cancellation fee t_c:
/// q_P = k / (lambda_post * (v - t_b + t_c)).
double q_post(double price, double cancel_fee, const ModelParams& p);

/// Post-purchase continuation value V_P(mu; m^c(t_b, t_c)): the learning
/// ODE at rate lambda_post anchored at (q_P, -t_c).
double post_value(double mu, double price, double cancel_fee, const ModelParams& p);
double post_value_slope(double mu, double price, double cancel_fee, const ModelParams& p);

/// Cancellation fee making the buyer indifferent between pre- and
/// post-purchase learning: solves V_P(mu0; m^c(t_b, t_c)) = V^0(mu0; t_b).
/// Zero when lambda_post == lambda (no extra information value).
double cancellation_fee(double price, double mu0, const ModelParams& p);

/// Instant post-purchase learning (lambda_post treated as +infinity):
/// price q^{-1}(mu0), fee k/(lambda (1-mu0)), revenue exactly mu0*v and
/// zero buyer surplus inside the learning region; full price outside.
Solution optimal_mechanism_limit(double mu0, const ModelParams& p);

/// Expected revenue at price t_b under the fee-augmented transfer, with the
/// stopping belief optimized over [q_P, mu0).  Reduces to the plain
/// two-point revenue when lambda_post == lambda.
double finite_lambda_revenue(double price, double mu0, const ModelParams& p);

}  // namespace refund
