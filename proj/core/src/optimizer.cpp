#include "refund/optimizer.hpp"

#include "refund/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace refund {

namespace {

// k/(lambda beta) - (t_b - t_r(beta, t_b)): the interior first-order
// condition, positive at q(t_b) and negative at 0.5 on the relevant prices.
double interior_foc(double beta, double price, double q, const ModelParams& p) {
    const double transfer = p.cost_ratio() * (log_odds(beta) - log_odds(q));
    return p.k / (p.lambda * beta) - (price - transfer);
}

}  // namespace

PriceThresholds price_thresholds(const ModelParams& p) {
    return {trial_price(0.5, p), 0.5 * p.v};
}

double interior_beta(double price, const ModelParams& p) {
    const PriceThresholds th = price_thresholds(p);
    const double slack = 1e-12 * std::max(1.0, p.v);
    if (price < th.t_star - slack || price > th.t_2star + slack)
        throw std::domain_error("interior_beta: price outside [t_star, t_2star]");
    const double clamped = std::clamp(price, th.t_star, th.t_2star);
    const double q = quitting_belief(clamped, p);
    auto foc = [&](double beta) { return interior_foc(beta, clamped, q, p); };
    // foc(q) = v - 2 t_b, zero at t_2star; foc(0.5) is zero at t_star: the
    // root sits on a bracket edge at the threshold prices.
    if (foc(q) <= 0.0) return q;
    if (foc(0.5) >= 0.0) return 0.5;
    return bisect(foc, q, 0.5);
}

double interior_beta_slope(double price, const ModelParams& p) {
    const double beta = interior_beta(price, p);
    const double q = quitting_belief(price, p);
    const double denom = (2.0 * beta - 1.0) * (1.0 - q) * p.cost_ratio();
    if (denom == 0.0) return -std::numeric_limits<double>::infinity();
    return beta * beta * (1.0 - beta) / denom;
}

BetaStar optimal_beta_for_price(double price, double mu0, const ModelParams& p) {
    require_interior_belief(mu0, "optimal_beta_for_price");
    const double lo = trial_price(mu0, p);
    const double hi = quitting_price(mu0, p);
    const double slack = 1e-12 * std::max(1.0, p.v);
    if (price < lo - slack || price > hi + slack)
        throw std::domain_error("optimal_beta_for_price: price outside [Q^{-1}(mu0), q^{-1}(mu0)]");
    const PriceThresholds th = price_thresholds(p);

    if (mu0 <= quitting_belief(th.t_2star, p)) return {mu0, false};  // 2k/(lambda v): never learn
    if (price >= th.t_2star) return {quitting_belief(price, p), true};

    if (mu0 < 0.5) {
        if (price <= th.t_star) return {mu0, false};
        const double beta = interior_beta(price, p);
        if (beta >= mu0) return {mu0, false};  // interior optimum infeasible: supremum at the prior
        return {beta, true};
    }

    // mu0 >= 0.5: the learning window opens at Q^{-1}(mu0) >= t_star, so any
    // interior price carries an implementable interior optimum.
    if (price <= lo + slack) return {mu0, true};  // deterrence price: Dirac at the prior
    return {interior_beta(price, p), true};
}

ElasticityReport elasticity_report(double price, const ModelParams& p) {
    const double beta = interior_beta(price, p);
    const double q = quitting_belief(price, p);
    const double beta_slope = interior_beta_slope(price, p);
    const double q_slope = q / (p.v - price);
    ElasticityReport r;
    r.interior = price / (1.0 - beta) * beta_slope;
    r.full_learning = price / (1.0 - q) * q_slope;
    r.ratio = -r.interior / r.full_learning;
    return r;
}

double marginal_revenue_sign(double price, double mu0, const ModelParams& p) {
    const double beta = interior_beta(price, p);
    const double q = quitting_belief(price, p);
    const double gamma = (1.0 - mu0) / (1.0 - beta);
    return (1.0 - gamma) / gamma - q / (1.0 - q);
}

double interior_branch_revenue(double price, double mu0, const ModelParams& p) {
    const double beta = interior_beta(price, p);
    const double q = quitting_belief(price, p);
    const double gamma = (1.0 - mu0) / (1.0 - beta);
    const double transfer = p.cost_ratio() * (log_odds(beta) - log_odds(q));
    return gamma * transfer + (1.0 - gamma) * price;
}

std::string to_string(MechanismForm f) {
    switch (f) {
        case MechanismForm::FullPriceNoReturn: return "FullPriceNoReturn";
        case MechanismForm::LearningDeterrence: return "LearningDeterrence";
        case MechanismForm::StochasticReturn: return "StochasticReturn";
        case MechanismForm::FreeReturn: return "FreeReturn";
    }
    return "?";
}

Solution learning_deterrence_solution(double mu0, const ModelParams& p) {
    const LearningRegion region = learning_region(p);
    if (mu0 < region.mu_low || mu0 > region.mu_high)
        throw std::domain_error("learning_deterrence_solution: prior outside the learning region");
    const double price = trial_price(mu0, p);
    Solution s;
    s.form = MechanismForm::LearningDeterrence;
    s.mechanism = RefundMechanism::no_return(price);
    s.beta_star = mu0;
    s.revenue = price;
    s.buyer_surplus = mu0 * p.v - price;
    return s;
}

namespace {

double free_return_peak_price(double mu0, const ModelParams& p) {
    const double c = p.cost_ratio();
    return p.v - c - std::sqrt(c * (p.v - c) * (1.0 - mu0) / mu0);
}

}  // namespace

Solution free_return_solution(double mu0, const ModelParams& p) {
    require_interior_belief(mu0, "free_return_solution");
    const double c = p.cost_ratio();
    if (mu0 <= c / p.v)
        throw std::domain_error("free_return_solution: no price yields positive free-return revenue");
    double price = free_return_peak_price(mu0, p);
    // Constrain into the feasible window when the prior admits learning at
    // all; slack whenever free return can win, so clamping only touches
    // dominated cases.
    const LearningRegion region = learning_region(p);
    if (mu0 >= region.mu_low && mu0 <= region.mu_high)
        price = std::clamp(price, trial_price(mu0, p), quitting_price(mu0, p));
    else
        price = std::min(price, quitting_price(mu0, p));
    const double q = quitting_belief(price, p);
    Solution s;
    s.form = MechanismForm::FreeReturn;
    s.mechanism = RefundMechanism::free_return(price);
    s.beta_star = q;
    s.revenue = (mu0 - q) / (1.0 - q) * price;
    s.buyer_surplus = value_v0(mu0, price, p);
    return s;
}

Solution optimal_mechanism(double mu0, const ModelParams& p) {
    require_interior_belief(mu0, "optimal_mechanism");
    const LearningRegion region = learning_region(p);
    if (mu0 < region.mu_low || mu0 > region.mu_high) {
        Solution s;
        s.form = MechanismForm::FullPriceNoReturn;
        s.mechanism = RefundMechanism::no_return(mu0 * p.v);
        s.beta_star = mu0;
        s.revenue = mu0 * p.v;
        s.buyer_surplus = 0.0;
        return s;
    }
    const Solution deter = learning_deterrence_solution(mu0, p);
    const Solution free_ret = free_return_solution(mu0, p);
    return free_ret.revenue > deter.revenue ? free_ret : deter;
}

namespace {

// Left-hand side of the form-boundary equation: with c = k/lambda,
//   1/(1-mu0) + logit(mu0) - v/c + 1/q(Pi^F(mu0)) - logit(q(Pi^F(mu0))),
// where Pi^F is the peak free-return revenue.  Positive exactly where
// deterrence beats free return, zero on the boundary of F.  Closed form,
// so the tangency at c* resolves at machine precision.
double boundary_lhs(double mu0, const ModelParams& p) {
    const double c = p.cost_ratio();
    const double price = free_return_peak_price(mu0, p);
    const double q = p.k / (p.lambda * (p.v - price));
    const double revenue = (mu0 - q) / (1.0 - q) * price;
    const double q_rev = p.k / (p.lambda * (p.v - revenue));
    return 1.0 / (1.0 - mu0) + log_odds(mu0) - p.v / c + 1.0 / q_rev - log_odds(q_rev);
}

// Scan grid over the learning region, geometrically refined toward both
// endpoints: the deterrence slivers next to mu_low/mu_high can be far
// narrower than any uniform spacing.
std::vector<double> scan_grid(const LearningRegion& region, int grid_size) {
    std::vector<double> xs;
    xs.reserve(static_cast<std::size_t>(grid_size) + 48);
    const double span = region.mu_high - region.mu_low;
    for (int i = 0; i <= grid_size; ++i)
        xs.push_back(region.mu_low + span * i / grid_size);
    for (int j = 0; j < 20; ++j) {
        const double f = 0.1 * std::pow(0.2, j);  // down to ~5e-15 of the span
        xs.push_back(region.mu_low + span * f);
        xs.push_back(region.mu_high - span * f);
    }
    std::sort(xs.begin(), xs.end());
    return xs;
}

struct FInterval {
    bool nonempty = false;
    double lo = 0.0, hi = 0.0;
};

// Argmin of boundary_lhs over the region (grid seed + golden refinement).
double boundary_argmin(const ModelParams& p, const LearningRegion& region) {
    const std::vector<double> xs = scan_grid(region, 256);
    double best = std::numeric_limits<double>::infinity();
    double arg = xs[xs.size() / 2];
    for (double x : xs) {
        const double s = boundary_lhs(x, p);
        if (s < best) {
            best = s;
            arg = x;
        }
    }
    const double span = region.mu_high - region.mu_low;
    const double lo = std::max(region.mu_low + 1e-13, arg - span / 256);
    const double hi = std::min(region.mu_high - 1e-13, arg + span / 256);
    const double refined = golden_max([&](double m) { return -boundary_lhs(m, p); }, lo, hi, 1e-13);
    return boundary_lhs(refined, p) < best ? refined : arg;
}

FInterval find_free_return_interval(const ModelParams& p, int grid_size) {
    const LearningRegion region = learning_region(p);
    std::vector<double> xs = scan_grid(region, grid_size);
    // Near the critical cost ratio, F pinches to a sliver around the
    // tangency prior that no uniform grid resolves; probe the minimizer.
    const double span = region.mu_high - region.mu_low;
    const double pinch = boundary_argmin(p, region);
    for (int j = 0; j < 18; ++j) {
        const double f = 1e-2 * std::pow(0.2, j);
        const double left = pinch - span * f;
        const double right = pinch + span * f;
        if (left > region.mu_low) xs.push_back(left);
        if (right < region.mu_high) xs.push_back(right);
    }
    xs.push_back(pinch);
    std::sort(xs.begin(), xs.end());
    std::vector<double> roots;
    double prev_x = xs.front();
    double prev_s = boundary_lhs(prev_x, p);
    bool any_inside = prev_s <= 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        const double x = xs[i];
        const double s = boundary_lhs(x, p);
        if ((s <= 0.0) != (prev_s <= 0.0))
            roots.push_back(bisect([&](double m) { return boundary_lhs(m, p); }, prev_x, x, 1e-9));
        any_inside = any_inside || s <= 0.0;
        prev_x = x;
        prev_s = s;
    }
    if (roots.size() > 2)
        throw std::runtime_error(
            "region_map: more than two form-boundary roots, contradicting the interval structure");
    FInterval f;
    if (roots.size() == 2) {
        f.nonempty = true;
        f.lo = roots[0];
        f.hi = roots[1];
    } else if (roots.size() == 1) {
        // The other endpoint's deterrence sliver is below the refinement
        // resolution; the region edge is the endpoint at double precision.
        f.nonempty = true;
        const bool rises = boundary_lhs(0.5 * (roots[0] + region.mu_high), p) <= 0.0;
        f.lo = rises ? roots[0] : region.mu_low;
        f.hi = rises ? region.mu_high : roots[0];
    } else if (any_inside) {
        f.nonempty = true;
        f.lo = region.mu_low;
        f.hi = region.mu_high;
    }
    return f;
}

// Smallest boundary_lhs over the region: negative iff F is nonempty.
double boundary_min(const ModelParams& p) {
    const LearningRegion region = learning_region(p);
    return boundary_lhs(boundary_argmin(p, region), p);
}

}  // namespace

double critical_cost_ratio(const ModelParams& p, double width_tol) {
    auto with_cost = [&](double c) {
        ModelParams q = p;
        q.k = c * p.lambda;
        return q;
    };
    auto nonempty = [&](double c) { return boundary_min(with_cost(c)) < 0.0; };

    double lo = 1e-6 * p.v, hi = 0.25 * p.v * (1.0 - 1e-9);
    if (nonempty(hi)) return hi;  // F survives to the model's validity edge
    if (!nonempty(lo)) throw std::runtime_error("critical_cost_ratio: F empty even at c ~ 0");
    for (int i = 0; i < 200; ++i) {
        if (hi - lo <= 1e-8 * p.v) {
            // keep refining past the c-tolerance until the surviving F is thin
            const FInterval f = find_free_return_interval(with_cost(lo), 512);
            if (f.nonempty && f.hi - f.lo < width_tol) break;
        }
        if (hi - lo < 4e-16 * lo) break;  // bracket at double resolution
        const double mid = 0.5 * (lo + hi);
        (nonempty(mid) ? lo : hi) = mid;
    }
    return lo;
}

RegionMap region_map(const ModelParams& p, int grid_size) {
    p.validate();
    const LearningRegion region = learning_region(p);
    const FInterval f = find_free_return_interval(p, grid_size);
    RegionMap map;
    map.mu_low = region.mu_low;
    map.mu_high = region.mu_high;
    map.has_free_return = f.nonempty;
    map.f_low = f.lo;
    map.f_high = f.hi;
    map.c_star = critical_cost_ratio(p);
    return map;
}

}  // namespace refund
