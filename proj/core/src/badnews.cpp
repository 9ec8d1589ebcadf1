#include "refund/badnews.hpp"

#include "refund/rootfind.hpp"

#include <cmath>
#include <stdexcept>

namespace refund {

double consumption_belief_n(double price, const ModelParams& p) {
    if (!(price > p.k / p.rho))
        throw std::domain_error("consumption_belief_n: price <= k/rho, consumption belief not positive");
    return 1.0 - p.k / (p.rho * price);
}

double consumption_price_n(double alpha, const ModelParams& p) {
    require_interior_belief(alpha, "consumption_price_n");
    return p.k / (p.rho * (1.0 - alpha));
}

double badnews_value(double mu0, double alpha, const ModelParams& p) {
    const double c = p.k / p.rho;
    return -c - mu0 * c / (1.0 - alpha) + mu0 * p.v - mu0 * c * (log_odds(alpha) - log_odds(mu0));
}

namespace {

LearningRegion badnews_learning_region(const ModelParams& p) {
    p.validate_badnews();
    ModelParams as_good = p;
    as_good.lambda = p.rho;  // same mu(1-mu) = k/(rate v) roots
    as_good.lambda_post = std::max(p.lambda_post, p.rho);
    return learning_region(as_good);
}

}  // namespace

double alpha_max(double mu0, const ModelParams& p) {
    const LearningRegion region = badnews_learning_region(p);
    if (mu0 < region.mu_low || mu0 > region.mu_high)
        throw std::domain_error("alpha_max: prior outside the bad-news learning region");
    // Participation value is positive at alpha = mu0+ inside the region and
    // strictly decreasing in alpha.
    auto value = [&](double a) { return badnews_value(mu0, a, p); };
    const double lo = mu0 + 1e-12;
    const double hi = 1.0 - 1e-9;
    if (value(lo) <= 0.0) return mu0;  // region boundary: no learning is implementable
    return bisect(value, lo, hi);
}

double transfer_n(double mu, double mu0, const ModelParams& p) {
    if (mu < mu0) return 0.0;
    const double alpha0 = alpha_max(mu0, p);
    if (mu > alpha0) return 0.0;  // unreachable stopping beliefs
    return consumption_price_n(mu, p);
}

BadNewsRegion badnews_region(const ModelParams& p) {
    const LearningRegion region = badnews_learning_region(p);
    BadNewsRegion r;
    r.mu_low = region.mu_low;
    r.mu_high = region.mu_high;
    // Free return wins iff alpha0(1-alpha0) <= mu0(1-mu0): true for all
    // mu0 >= 0.5, and below 0.5 exactly above the single crossing of
    // alpha0(mu0) with 1-mu0.
    auto crossing = [&](double m) { return alpha_max(m, p) - (1.0 - m); };
    r.f_low = bisect(crossing, region.mu_low + 1e-11, 0.5, 1e-10);
    r.f_high = region.mu_high;
    return r;
}

Solution optimal_mechanism_n(double mu0, const ModelParams& p) {
    require_interior_belief(mu0, "optimal_mechanism_n");
    const LearningRegion region = badnews_learning_region(p);
    Solution s;
    if (mu0 < region.mu_low || mu0 > region.mu_high) {
        s.form = MechanismForm::FullPriceNoReturn;
        s.mechanism = RefundMechanism::no_return(mu0 * p.v);
        s.beta_star = mu0;
        s.revenue = mu0 * p.v;
        s.buyer_surplus = 0.0;
        return s;
    }
    const double alpha0 = alpha_max(mu0, p);
    const double deter_revenue = consumption_price_n(mu0, p);
    const double free_revenue = mu0 / alpha0 * consumption_price_n(alpha0, p);
    // The comparison reduces to alpha0(1-alpha0) vs mu0(1-mu0); we compare
    // the revenues directly and break ties toward deterrence.
    if (free_revenue > deter_revenue) {
        s.form = MechanismForm::FreeReturn;
        s.mechanism = RefundMechanism::free_return(consumption_price_n(alpha0, p));
        s.beta_star = alpha0;
        s.revenue = free_revenue;
        s.buyer_surplus = 0.0;  // the price extracts the whole participation value
    } else {
        s.form = MechanismForm::LearningDeterrence;
        s.mechanism = RefundMechanism::no_return(deter_revenue);
        s.beta_star = mu0;
        s.revenue = deter_revenue;
        s.buyer_surplus = mu0 * p.v - deter_revenue;
    }
    return s;
}

}  // namespace refund
