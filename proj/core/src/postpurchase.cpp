#include "refund/postpurchase.hpp"

#include "refund/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace refund {

double q_post(double price, double cancel_fee, const ModelParams& p) {
    const double net = p.v - price + cancel_fee;
    if (!(p.k / p.lambda_post < net))
        throw std::domain_error("q_post: t_b - t_c >= v - k/lambda_post, post-purchase learning never pays");
    return p.k / (p.lambda_post * net);
}

double post_value(double mu, double price, double cancel_fee, const ModelParams& p) {
    const double q = q_post(price, cancel_fee, p);
    return anchored_value(mu, p.v - price, p.k / p.lambda_post, q, -cancel_fee);
}

double post_value_slope(double mu, double price, double cancel_fee, const ModelParams& p) {
    const double q = q_post(price, cancel_fee, p);
    return anchored_slope(mu, p.v - price, p.k / p.lambda_post, q, -cancel_fee);
}

double cancellation_fee(double price, double mu0, const ModelParams& p) {
    p.validate();
    if (p.lambda_post == p.lambda) return 0.0;
    const double pre_value = value_v0(mu0, price, p);
    // More fee, less post-purchase value: the residual is monotone in t_c.
    auto residual = [&](double fee) { return post_value(mu0, price, fee, p) - pre_value; };
    if (residual(0.0) <= 0.0) return 0.0;
    return bisect(residual, 0.0, p.v);
}

Solution optimal_mechanism_limit(double mu0, const ModelParams& p) {
    require_interior_belief(mu0, "optimal_mechanism_limit");
    const LearningRegion region = learning_region(p);
    Solution s;
    if (mu0 < region.mu_low || mu0 > region.mu_high) {
        s.form = MechanismForm::FullPriceNoReturn;
        s.mechanism = RefundMechanism::no_return(mu0 * p.v);
        s.beta_star = mu0;
        s.revenue = mu0 * p.v;
        s.buyer_surplus = 0.0;
        return s;
    }
    // Price q^{-1}(mu0) leaves zero pre-purchase option value; the fee
    // extracts the instant-learning information value exactly.
    const double price = quitting_price(mu0, p);
    const double fee = p.k / (p.lambda * (1.0 - mu0));
    s.form = MechanismForm::FreeReturn;
    s.mechanism = RefundMechanism{price, 0.0, 0.0, fee};
    s.beta_star = mu0;  // instant learning: the posterior leaves mu0 immediately
    s.revenue = mu0 * price + (1.0 - mu0) * fee;
    s.buyer_surplus = 0.0;
    return s;
}

double finite_lambda_revenue(double price, double mu0, const ModelParams& p) {
    require_interior_belief(mu0, "finite_lambda_revenue");
    const double fee = cancellation_fee(price, mu0, p);
    const double q = q_post(price, fee, p);
    if (q >= mu0)
        throw std::domain_error("finite_lambda_revenue: q_P >= mu0, no implementable learning process");
    const double cost_ratio = p.k / p.lambda_post;
    auto revenue_at = [&](double beta) {
        const double gamma = (1.0 - mu0) / (1.0 - beta);
        const double transfer = cost_ratio * (log_odds(beta) - log_odds(q));
        return gamma * (transfer + fee) + (1.0 - gamma) * price;
    };
    // Coarse scan plus golden refinement over [q_P, mu0); the supremum at
    // beta -> mu0 is the (dominated) transfer-plus-fee limit, checked too.
    const double hi = mu0 - 1e-12;
    double best = revenue_at(q);
    double arg = q;
    const int n = 2048;
    for (int i = 1; i <= n; ++i) {
        const double beta = q + (hi - q) * i / n;
        const double r = revenue_at(beta);
        if (r > best) {
            best = r;
            arg = beta;
        }
    }
    const double window = (hi - q) / n;
    const double refined = golden_max(revenue_at, std::max(q, arg - window),
                                      std::min(hi, arg + window), 1e-13);
    return std::max(best, revenue_at(refined));
}

}  // namespace refund
