#include "refund/learning.hpp"

#include "refund/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace refund {

double belief_path(double mu0, double tau, double rate) {
    if (mu0 == 0.0 || mu0 == 1.0) return mu0;  // absorbing
    require_interior_belief(mu0, "belief_path");
    if (tau < 0.0) throw std::domain_error("belief_path: tau must be nonnegative");
    // (1 + (1-mu0)/mu0 * e^{rate tau})^-1, evaluated through the log-odds to
    // survive large tau without overflow.
    const double log_odds_tau = log_odds(mu0) - rate * tau;
    if (log_odds_tau < -700.0) return 0.0;
    return 1.0 / (1.0 + std::exp(-log_odds_tau));
}

double time_to_belief(double mu0, double beta, double rate) {
    require_interior_belief(mu0, "time_to_belief");
    if (!(beta > 0.0)) throw std::domain_error("time_to_belief: beta must be positive");
    if (beta > mu0) throw std::domain_error("time_to_belief: beta must not exceed mu0");
    return (log_odds(mu0) - log_odds(beta)) / rate;
}

double marginal_cost(double mu, double k, double rate) {
    if (!(mu > 0.0) || !(mu < 1.0))
        throw std::domain_error("marginal_cost: diverges at boundary beliefs");
    return k / (rate * mu * (1.0 - mu));
}

double marginal_cost(double mu, const ModelParams& p) { return marginal_cost(mu, p.k, p.lambda); }

double quitting_belief(double price, const ModelParams& p) {
    const double cap = p.v - p.k / p.lambda;
    if (!(price < cap))
        throw std::domain_error("quitting_belief: price >= v - k/lambda, no belief at which learning pays");
    return p.k / (p.lambda * (p.v - price));
}

double quitting_price(double mu, const ModelParams& p) {
    require_interior_belief(mu, "quitting_price");
    return p.v - p.k / (p.lambda * mu);
}

LearningRegion learning_region(const ModelParams& p) {
    p.validate();
    const double disc = std::sqrt(1.0 - 4.0 * p.k / (p.lambda * p.v));
    LearningRegion r;
    r.mu_low = 0.5 * (1.0 - disc);
    r.mu_high = 0.5 * (1.0 + disc);
    r.price_low = r.mu_low * p.v;
    r.price_high = r.mu_high * p.v;
    return r;
}

double anchored_value(double mu, double high_surplus, double cost_ratio, double anchor_belief,
                      double anchor_value) {
    const double base = mu * high_surplus - cost_ratio -
                        (1.0 - mu) * cost_ratio * (log_odds(mu) - log_odds(anchor_belief));
    const double base_at_anchor = anchor_belief * high_surplus - cost_ratio;
    // (1 - mu) spans the homogeneous solutions of the learning ODE.
    return base + (anchor_value - base_at_anchor) * (1.0 - mu) / (1.0 - anchor_belief);
}

double anchored_slope(double mu, double high_surplus, double cost_ratio, double anchor_belief,
                      double anchor_value) {
    const double base_at_anchor = anchor_belief * high_surplus - cost_ratio;
    return high_surplus + cost_ratio * (log_odds(mu) - log_odds(anchor_belief)) - cost_ratio / mu -
           (anchor_value - base_at_anchor) / (1.0 - anchor_belief);
}

double value_if_learning(double mu, double price, const ModelParams& p) {
    const double q = quitting_belief(price, p);
    return anchored_value(mu, p.v - price, p.cost_ratio(), q, 0.0);
}

double slope_if_learning(double mu, double price, const ModelParams& p) {
    const double q = quitting_belief(price, p);
    return anchored_slope(mu, p.v - price, p.cost_ratio(), q, 0.0);
}

double trial_belief(double price, const ModelParams& p) {
    const LearningRegion region = learning_region(p);
    if (price < region.price_low || price > region.price_high)
        throw std::domain_error("trial_belief: price outside the learning window");
    const double q = quitting_belief(price, p);
    auto gap = [&](double mu) { return value_if_learning(mu, price, p) - (mu * p.v - price); };
    // gap(q) = t_b - q v >= 0 inside the window (0 at its edges, where the
    // two cutoffs coincide), gap(1-) < 0; single crossing.
    if (gap(q) <= 0.0) return q;
    return bisect(gap, q, 1.0 - 1e-12, 1e-15);
}

double trial_price(double mu0, const ModelParams& p) {
    const LearningRegion region = learning_region(p);
    if (mu0 < region.mu_low || mu0 > region.mu_high)
        throw std::domain_error("trial_price: prior outside the learning region");
    auto gap = [&](double t) { return value_if_learning(mu0, t, p) - (mu0 * p.v - t); };
    // Below the root mu0 sits above the trial belief (gap < 0), above it
    // below; the endpoints are roots themselves when mu0 touches the region
    // boundary.
    const double hi = quitting_price(mu0, p);
    if (gap(region.price_low) >= 0.0) return region.price_low;
    if (gap(hi) <= 0.0) return hi;
    return bisect(gap, region.price_low, hi, 1e-15);
}

ValueProfile::ValueProfile(double price, const ModelParams& p)
    : price_(price), v_(p.v), c_(p.cost_ratio()) {
    const LearningRegion region = learning_region(p);
    learning_ = price >= region.price_low && price <= region.price_high;
    if (learning_) {
        q_ = quitting_belief(price, p);
        big_q_ = trial_belief(price, p);
    }
}

double ValueProfile::quit_belief() const {
    if (!learning_) throw std::domain_error("ValueProfile: no quitting belief outside the learning window");
    return q_;
}

double ValueProfile::trial() const {
    if (!learning_) throw std::domain_error("ValueProfile: no trial belief outside the learning window");
    return big_q_;
}

double ValueProfile::value(double mu) const {
    if (!learning_) return std::max(0.0, mu * v_ - price_);
    if (mu < q_) return 0.0;
    if (mu >= big_q_) return mu * v_ - price_;
    return anchored_value(mu, v_ - price_, c_, q_, 0.0);
}

double ValueProfile::slope(double mu) const {
    if (!learning_) return mu * v_ - price_ > 0.0 ? v_ : 0.0;
    if (mu < q_) return 0.0;
    if (mu >= big_q_) return v_;
    return anchored_slope(mu, v_ - price_, c_, q_, 0.0);
}

double value_v0(double mu, double price, const ModelParams& p) {
    return ValueProfile(price, p).value(mu);
}

double value_v0_slope(double mu, double price, const ModelParams& p) {
    return ValueProfile(price, p).slope(mu);
}

double ex_ante_utility(double beta, double mu0, double price, const ModelParams& p) {
    require_interior_belief(mu0, "ex_ante_utility");
    if (beta > mu0) throw std::domain_error("ex_ante_utility: beta must not exceed mu0");
    const double t0 = time_to_belief(mu0, beta, p.lambda);
    const double expected_t1 = (mu0 - beta) / (mu0 * (1.0 - beta)) / p.lambda;
    const double p_news = mu0 * (1.0 - std::exp(-p.lambda * t0));
    return p_news * (p.v - price) - mu0 * p.k * expected_t1 - (1.0 - mu0) * p.k * t0;
}

}  // namespace refund
