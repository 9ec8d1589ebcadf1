#include "refund/mechanism.hpp"

#include <cmath>
#include <stdexcept>

namespace refund {

double beta_floor(double mu0, const ModelParams& p) {
    return quitting_belief(trial_price(mu0, p), p);
}

RefundMechanism return_policy_for(double beta, double price, const ModelParams& p) {
    const ValueProfile profile(price, p);
    if (!profile.learning_price())
        throw std::domain_error("return_policy_for: price outside the learning window");
    const double q = profile.quit_belief();
    if (beta < q - 1e-12)
        throw std::domain_error("return_policy_for: beta below the quitting belief, not implementable");
    if (!(beta < 1.0)) throw std::domain_error("return_policy_for: beta must be below 1");
    RefundMechanism m;
    m.price = price;
    m.keep_prob = profile.slope(std::max(beta, q)) / p.v;                 // smooth pasting
    m.return_transfer = p.cost_ratio() * (log_odds(std::max(beta, q)) - log_odds(q));  // value matching
    m.cancel_fee = 0.0;
    return m;
}

double transfer_at(double mu, double price, double mu0, const ModelParams& p) {
    if (mu >= mu0) return price;
    // at prices with no quitting belief the return branch is empty
    if (!(price < p.v - p.cost_ratio())) return 0.0;
    const double q = quitting_belief(price, p);
    if (mu < q) return 0.0;
    return p.cost_ratio() * (log_odds(mu) - log_odds(q));
}

double expected_revenue(const StoppingDistribution& dist, double price, const ModelParams& p) {
    if (dist.degenerate) return price;
    const double q = quitting_belief(price, p);
    if (dist.beta < q - 1e-12)
        throw std::domain_error("expected_revenue: distribution not implementable under this price");
    const double gamma = dist.return_rate();
    const double transfer = p.cost_ratio() * (log_odds(std::max(dist.beta, q)) - log_odds(q));
    return gamma * transfer + (1.0 - gamma) * price;
}

double strategy_value(const RefundMechanism& m, double beta, double mu0, const ModelParams& p) {
    if (beta >= mu0) return std::max(m.keep_utility(mu0, p.v), m.return_utility(mu0, p.v));
    // post-purchase learning runs at lambda_post (equal to lambda in the
    // main model); the exit branch pays the mechanism's return utility
    const double rate = p.lambda_post;
    const double exit_value = m.return_utility(beta, p.v);
    const double t0 = time_to_belief(mu0, beta, rate);
    const double p_news = mu0 * (1.0 - std::exp(-rate * t0));
    const double expected_t1 = (mu0 - beta) / (mu0 * (1.0 - beta)) / rate;
    const double learning_cost = p.k * (mu0 * expected_t1 + (1.0 - mu0) * t0);
    return p_news * (p.v - m.price) + (1.0 - p_news) * exit_value - learning_cost;
}

ImplementabilityReport check_implementable(const RefundMechanism& m, double beta, double mu0,
                                           const ModelParams& p, double tol) {
    const ValueProfile profile(m.price, p);
    ImplementabilityReport r{};

    if (beta >= mu0) {
        // Degenerate (no-learning) implementation: the buyer must prefer
        // consuming at the prior, i.e. the price is at most Q^{-1}(mu0).
        const double keep = m.keep_utility(mu0, p.v);
        r.ir_residual = keep - profile.value(mu0);
        r.ob_value_residual = r.ir_residual;  // OB: V_P(mu0) = mu0 v - t_b
        r.ob_slope_residual = 0.0;
        r.ic_return_margin = 0.0;
        r.ic_keep_margin = m.keep_utility(1.0, p.v) - m.return_utility(1.0, p.v);
        r.ir_ok = r.ir_residual >= -tol;
        r.ob_ok = std::abs(r.ob_value_residual) <= tol;
        r.ic_ok = true;
        return r;
    }

    // The continuation curve governing obedience runs at the post-purchase
    // rate, anchored where the return branch stops paying: (q_eff, -t_c).
    // With lambda_post == lambda and no fee this is the pre-purchase curve.
    const double post_ratio = p.k / p.lambda_post;
    const double net = p.v - m.price + m.cancel_fee;
    if (!(post_ratio < net)) {
        // no belief at which post-purchase learning pays: the diagnostic
        // reports the no-learning comparison instead of throwing
        const double no_learning = std::max(m.keep_utility(mu0, p.v), m.return_utility(mu0, p.v));
        r.ir_residual = no_learning - profile.value(mu0);
        r.ob_value_residual = r.ir_residual;
        r.ob_slope_residual = 0.0;
        r.ob_prior_margin = 0.0;
        r.ic_return_margin = m.return_utility(beta, p.v) - m.keep_utility(beta, p.v);
        r.ic_keep_margin = m.keep_utility(1.0, p.v) - m.return_utility(1.0, p.v);
        r.ir_ok = r.ir_residual >= -tol;
        r.ob_ok = false;  // the requested interior stopping belief is unreachable
        r.ic_ok = r.ic_return_margin > -tol && r.ic_keep_margin > -tol;
        return r;
    }
    const double q_eff = post_ratio / net;
    const double value_here =
        anchored_value(beta, p.v - m.price, post_ratio, q_eff, -m.cancel_fee);
    const double slope_here =
        anchored_slope(beta, p.v - m.price, post_ratio, q_eff, -m.cancel_fee);
    const double learn_value = strategy_value(m, beta, mu0, p);
    r.ob_value_residual = m.return_utility(beta, p.v) - value_here;
    r.ob_slope_residual = p.v * m.keep_prob - slope_here;
    r.ob_prior_margin =
        learn_value - std::max(m.keep_utility(mu0, p.v), m.return_utility(mu0, p.v));
    r.ic_return_margin = m.return_utility(beta, p.v) - m.keep_utility(beta, p.v);
    r.ic_keep_margin = m.keep_utility(1.0, p.v) - m.return_utility(1.0, p.v);
    r.ir_residual = learn_value - profile.value(mu0);

    r.ir_ok = r.ir_residual >= -tol;
    r.ob_ok = std::abs(r.ob_value_residual) <= tol && std::abs(r.ob_slope_residual) <= tol &&
              r.ob_prior_margin >= -tol;
    r.ic_ok = r.ic_return_margin > -tol && r.ic_keep_margin > -tol;
    return r;
}

}  // namespace refund
