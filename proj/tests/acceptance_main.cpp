// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure.  Expected values are frozen from independent routes (RK4, Gauss
// quadrature, finite differences, fixed-point iterations), never from the
// code paths under test.

#include "refund/badnews.hpp"
#include "refund/optimizer.hpp"
#include "refund/postpurchase.hpp"
#include "refund/sim.hpp"

#include "oracles.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace refund;

namespace {

const ModelParams kCanon{1.0, 0.1, 1.0, 1.0, 1.0};

struct Criterion {
    int number;
    std::string label;
    std::function<bool(std::string&)> run;
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

std::string fmt(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// Deterrence price at mu0 = 0.5 by direct fixed-point iteration of
// t = 2c - c*logit(q(t)), independent of the solver's bisection.
double deterrence_price_fixed_point() {
    const double c = kCanon.cost_ratio();
    double t = 0.3;
    for (int i = 0; i < 200; ++i) {
        const double q = kCanon.k / (kCanon.lambda * (kCanon.v - t));
        t = 2.0 * c - c * std::log(q / (1.0 - q));
    }
    return t;
}

bool criterion1(std::string& detail) {
    const PriceThresholds th = price_thresholds(kCanon);
    const double beta_at_high = interior_beta(th.t_2star, kCanon);
    const double beta_at_low = interior_beta(th.t_star, kCanon);
    const double q_at_high = quitting_belief(th.t_2star, kCanon);
    const double target = 2.0 * kCanon.k / (kCanon.lambda * kCanon.v);
    detail = "beta(v/2)=" + fmt(beta_at_high) + " beta(t*)=" + fmt(beta_at_low) +
             " q(v/2)=" + fmt(q_at_high);
    return close(beta_at_high, target, 1e-8) && close(beta_at_low, 0.5, 1e-6) &&
           q_at_high == target;
}

bool criterion2(std::string& detail) {
    const LearningRegion region = learning_region(kCanon);
    double worst = 0.0;
    for (double frac : {0.05, 0.275, 0.5, 0.725, 0.95}) {
        const double price = region.price_low + (region.price_high - region.price_low) * frac;
        const ValueProfile profile(price, kCanon);
        const double q = profile.quit_belief();
        const double big_q = profile.trial();
        std::vector<double> targets;
        targets.reserve(1000);
        for (int i = 0; i < 1000; ++i)
            targets.push_back(q + 1e-4 + (big_q - q - 1e-4) * i / 999.0);
        const std::vector<double> reference = oracle::rk4_values(price, kCanon, targets);
        for (std::size_t i = 0; i < targets.size(); ++i)
            worst = std::max(worst, std::abs(profile.value(targets[i]) - reference[i]));
    }
    detail = "max |closed - RK4| = " + fmt(worst);
    return worst < 1e-6;
}

bool criterion3(std::string& detail) {
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.grid_n = 10000;
    const double mu0 = 0.5;
    const double lo = trial_price(mu0, kCanon) + 0.01;
    const double hi = quitting_price(mu0, kCanon) - 0.01;
    double worst_stop = 0.0, worst_value = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double price = lo + (hi - lo) * i / 9.0;
        const double q = quitting_belief(price, kCanon);
        const double cell = cfg.grid_cell(mu0, std::max(1e-4, 0.25 * q));
        for (int j = 0; j < 10; ++j) {
            const double beta = q + 0.01 + (mu0 - 0.02 - q) * j / 9.0;
            const RefundMechanism m = return_policy_for(beta, price, kCanon);
            const OracleReport report = dp_best_response(m, mu0, kCanon, cfg);
            worst_stop = std::max(worst_stop, std::abs(report.stop_belief - beta) / cell);
            worst_value = std::max(worst_value,
                                   std::abs(report.value_at_prior - value_v0(mu0, price, kCanon)));
        }
    }
    detail = "max |stop-beta| = " + fmt(worst_stop) + " cells, max value error = " + fmt(worst_value);
    return worst_stop <= 1.0 && worst_value < 1e-3;
}

bool criterion4(std::string& detail) {
    oracle::Draws draws(20240811);
    int quasiconvex_ok = 0, single_cross_ok = 0;
    for (int trial = 0; trial < 100; ++trial) {
        ModelParams p;
        p.v = draws.in(0.5, 2.0);
        p.lambda = draws.in(0.5, 2.0);
        p.k = draws.in(0.05, 0.95) * 0.25 * p.lambda * p.v;
        p.lambda_post = p.lambda;
        p.rho = p.lambda;
        const double mu0 = draws.in(0.5, 0.95);
        const PriceThresholds th = price_thresholds(p);

        std::vector<double> revenue;
        revenue.reserve(200);
        bool was_positive = false;
        int switches = 0;
        bool wrong_direction = false;
        for (int i = 0; i < 200; ++i) {
            const double price =
                th.t_star + 1e-10 + (th.t_2star - th.t_star - 2e-10) * i / 199.0;
            revenue.push_back(interior_branch_revenue(price, mu0, p));
            const bool positive = marginal_revenue_sign(price, mu0, p) > 0.0;
            if (i > 0 && positive != was_positive) {
                ++switches;
                if (!positive) wrong_direction = true;
            }
            was_positive = positive;
        }
        const double cap = std::max(revenue.front(), revenue.back());
        bool interior_peak = false;
        for (std::size_t i = 1; i + 1 < revenue.size(); ++i)
            if (revenue[i] > cap + 1e-9) interior_peak = true;
        if (!interior_peak) ++quasiconvex_ok;
        if (switches <= 1 && !wrong_direction) ++single_cross_ok;
    }
    detail = "quasi-convex " + std::to_string(quasiconvex_ok) + "/100, single-crossing " +
             std::to_string(single_cross_ok) + "/100";
    return quasiconvex_ok == 100 && single_cross_ok == 100;
}

bool criterion5(std::string& detail) {
    const PriceThresholds th = price_thresholds(kCanon);
    double worst = 0.0;
    bool all_above_one = true;
    for (int i = 1; i <= 50; ++i) {
        const double price = th.t_star + (th.t_2star - th.t_star) * i / 51.0;
        const ElasticityReport rep = elasticity_report(price, kCanon);
        const double beta = interior_beta(price, kCanon);
        const double q = quitting_belief(price, kCanon);
        const double closed = beta * beta / (q * q * (1.0 - 2.0 * beta));
        worst = std::max(worst, std::abs(rep.ratio - closed) / closed);
        all_above_one = all_above_one && rep.ratio > 1.0;
    }
    detail = "max relative gap = " + fmt(worst);
    return worst < 1e-6 && all_above_one;
}

bool criterion6(std::string& detail) {
    // form map pattern over 500 priors: (FullPrice|Deterrence)*, at most one
    // contiguous FreeReturn block, (Deterrence|FullPrice)*
    auto pattern_over = [](const ModelParams& p, int& free_rows) {
        int phase = 0;  // 0: pre block, 1: free-return block, 2: post block
        bool ok = true;
        free_rows = 0;
        for (int i = 1; i <= 500; ++i) {
            const double mu0 = static_cast<double>(i) / 501.0;
            const MechanismForm form = optimal_mechanism(mu0, p).form;
            if (form == MechanismForm::FreeReturn) {
                if (phase == 2) ok = false;
                phase = 1;
                ++free_rows;
            } else if (form == MechanismForm::FullPriceNoReturn ||
                       form == MechanismForm::LearningDeterrence) {
                if (phase == 1) phase = 2;
            } else {
                ok = false;  // stochastic forms never optimal
            }
        }
        return ok;
    };
    ModelParams low_cost = kCanon;
    low_cost.k = 0.001;
    int canon_free = 0, low_free = 0;
    bool pattern_ok = pattern_over(kCanon, canon_free) && pattern_over(low_cost, low_free);
    pattern_ok = pattern_ok && canon_free == 0 && low_free > 0;  // c above/below c*

    // frozen comparison at mu0 = 0.5: deterrence 0.36728..., free return 0.2
    const double deter_ref = deterrence_price_fixed_point();
    const Solution deter = learning_deterrence_solution(0.5, kCanon);
    const Solution free_ret = free_return_solution(0.5, kCanon);
    const bool values_ok = close(deter.revenue, deter_ref, 1e-4) &&
                           close(free_ret.revenue, 0.2, 1e-4) &&
                           optimal_mechanism(0.5, kCanon).form == MechanismForm::LearningDeterrence;

    ModelParams cheap = kCanon;
    cheap.k = 0.001;
    const RegionMap open = region_map(cheap, 512);

    const double c_star = critical_cost_ratio(kCanon, 1e-6);
    ModelParams at_star = kCanon;
    at_star.k = c_star * kCanon.lambda;
    const RegionMap pinched = region_map(at_star, 512);
    const double width = pinched.has_free_return ? pinched.f_high - pinched.f_low : 0.0;

    detail = "pattern " + std::string(pattern_ok ? "ok" : "BROKEN") + ", deter=" +
             fmt(deter.revenue) + " (ref " + fmt(deter_ref) + "), free=" + fmt(free_ret.revenue) +
             ", F(k=.001) " + (open.has_free_return ? "nonempty" : "EMPTY") + ", width(c*)=" +
             fmt(width);
    return pattern_ok && values_ok && open.has_free_return && pinched.has_free_return &&
           width < 1e-6;
}

bool criterion7(std::string& detail) {
    const Solution s = free_return_solution(0.5, kCanon);
    auto revenue_at = [&](double t) {
        const double q = kCanon.k / (kCanon.lambda * (kCanon.v - t));
        return (0.5 - q) / (1.0 - q) * t;
    };
    const double derivative = oracle::central_diff(revenue_at, s.mechanism.price, 1e-4);
    detail = "t^F=" + fmt(s.mechanism.price) + " Pi^F=" + fmt(s.revenue) + " dPi/dt=" +
             fmt(derivative);
    return close(s.mechanism.price, 0.6, 1e-10) && close(s.revenue, 0.2, 1e-10) &&
           std::abs(derivative) < 1e-6;
}

bool criterion8(std::string& detail) {
    const LearningRegion region = learning_region(kCanon);
    double worst_rev = 0.0, worst_fee = 0.0, worst_surplus = 0.0;
    for (int i = 0; i < 20; ++i) {
        const double mu0 = region.mu_low + (region.mu_high - region.mu_low) * (i + 0.5) / 20.0;
        const Solution s = optimal_mechanism_limit(mu0, kCanon);
        worst_rev = std::max(worst_rev, std::abs(s.revenue - mu0 * kCanon.v));
        worst_fee = std::max(worst_fee,
                             std::abs(s.mechanism.cancel_fee - kCanon.k / (kCanon.lambda * (1.0 - mu0))));
        worst_surplus = std::max(worst_surplus, std::abs(s.buyer_surplus));
    }

    ModelParams fast = kCanon;
    fast.lambda_post = 1e3;
    bool finite_ok = true;
    for (double mu0 : {0.3, 0.5, 0.7}) {
        const double revenue = finite_lambda_revenue(quitting_price(mu0, kCanon), mu0, fast);
        finite_ok = finite_ok && std::abs(revenue - mu0 * fast.v) < 0.01 * mu0 * fast.v;
    }
    detail = "max |rev - mu0 v| = " + fmt(worst_rev) + ", max fee gap = " + fmt(worst_fee) +
             ", finite-rate within 1%: " + (finite_ok ? "yes" : "no");
    return worst_rev < 1e-12 && worst_fee < 1e-12 && worst_surplus == 0.0 && finite_ok;
}

bool criterion9(std::string& detail) {
    const BadNewsRegion region = badnews_region(kCanon);
    const double at_low = alpha_max(region.mu_low + 1e-9, kCanon);
    const double at_high = alpha_max(region.mu_high - 1e-9, kCanon);

    double worst_deriv = 0.0;
    for (double mu0 : {0.2, 0.35, 0.5, 0.65, 0.8}) {
        const double fd = oracle::central_diff([&](double m) { return alpha_max(m, kCanon); },
                                               mu0, 1e-6);
        const double alpha = alpha_max(mu0, kCanon);
        const double closed = (1.0 - alpha) * (1.0 - alpha) * alpha / (mu0 * mu0 * (1.0 - mu0));
        worst_deriv = std::max(worst_deriv, std::abs(fd - closed) / closed);
    }

    double worst_surplus = 0.0;
    bool corners_ok = true;
    for (double mu0 : {0.3, 0.5, 0.7}) {
        const double alpha0 = alpha_max(mu0, kCanon);
        worst_surplus = std::max(worst_surplus, std::abs(badnews_value(mu0, alpha0, kCanon)));
        const double corner = std::max(consumption_price_n(mu0, kCanon),
                                       mu0 / alpha0 * consumption_price_n(alpha0, kCanon));
        for (int i = 1; i < 400; ++i) {
            const double alpha = mu0 + (alpha0 - mu0) * i / 400.0;
            if (mu0 / alpha * consumption_price_n(alpha, kCanon) > corner + 1e-12)
                corners_ok = false;
        }
    }
    detail = "alpha0 edge gaps " + fmt(std::abs(at_low - region.mu_low)) + "/" +
             fmt(std::abs(at_high - region.mu_high)) + ", max deriv gap " + fmt(worst_deriv) +
             ", max |surplus| " + fmt(worst_surplus);
    return close(at_low, region.mu_low, 1e-6) && close(at_high, region.mu_high, 1e-6) &&
           worst_deriv < 1e-4 && worst_surplus < 1e-8 && corners_ok;
}

bool criterion10(std::string& detail) {
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.seed = 424242;
    const double mu0 = 0.5;
    const double pairs[10][2] = {{0.25, 0.45}, {0.30, 0.45}, {0.35, 0.45}, {0.25, 0.50},
                                 {0.30, 0.50}, {0.40, 0.50}, {0.30, 0.55}, {0.35, 0.55},
                                 {0.45, 0.60}, {0.26, 0.60}};
    int inside = 0;
    for (const auto& pair : pairs) {
        const double beta = pair[0], price = pair[1];
        const RefundMechanism m = return_policy_for(beta, price, kCanon);
        const OracleReport report = simulate_paths(m, beta, mu0, kCanon, cfg);
        const double revenue =
            expected_revenue(StoppingDistribution::good_news(mu0, beta), price, kCanon);
        const double gamma = (1.0 - mu0) / (1.0 - beta);
        if (std::abs(report.empirical_revenue - revenue) < 3.0 * report.revenue_se &&
            std::abs(report.empirical_return_rate - gamma) < 3.0 * report.return_rate_se)
            ++inside;
    }

    int covered = 0;
    const RefundMechanism m = return_policy_for(0.3, 0.5, kCanon);
    const double revenue = expected_revenue(StoppingDistribution::good_news(mu0, 0.3), 0.5, kCanon);
    const double gamma = (1.0 - mu0) / (1.0 - 0.3);
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        cfg.seed = seed * 7919;
        const OracleReport report = simulate_paths(m, 0.3, mu0, kCanon, cfg);
        if (std::abs(report.empirical_revenue - revenue) < 3.0 * report.revenue_se &&
            std::abs(report.empirical_return_rate - gamma) < 3.0 * report.return_rate_se)
            ++covered;
    }
    detail = std::to_string(inside) + "/10 mechanisms inside 3 s.e., coverage " +
             std::to_string(covered) + "/50";
    return inside == 10 && covered >= 45;
}

bool criterion11(std::string& detail) {
    double worst_value = 0.0, worst_cost = 0.0;
    for (double v : {0.8, 1.0, 1.5}) {
        for (double k_frac : {0.2, 0.4, 0.8}) {
            for (double lambda : {0.7, 1.0, 1.6}) {
                ModelParams p;
                p.v = v;
                p.lambda = lambda;
                p.lambda_post = lambda;
                p.rho = lambda;
                p.k = k_frac * 0.25 * lambda * v;
                const LearningRegion region = learning_region(p);
                for (double mf : {0.3, 0.5, 0.7}) {
                    const double mu0 = region.mu_low + (region.mu_high - region.mu_low) * mf;
                    for (double tf : {0.35, 0.6, 0.85}) {
                        const double lo = trial_price(mu0, p);
                        const double hi = quitting_price(mu0, p);
                        const double price = lo + (hi - lo) * tf;
                        const double q = quitting_belief(price, p);
                        if (q >= mu0) continue;
                        worst_value = std::max(
                            worst_value, std::abs(ex_ante_utility(q, mu0, price, p) -
                                                  value_v0(mu0, price, p)));
                        const double beta = q + (mu0 - q) * 0.5;
                        const double lhs = p.k * time_to_belief(mu0, beta, p.lambda);
                        const double rhs = oracle::integrate(
                            [&](double m) { return marginal_cost(m, p); }, beta, mu0, 128);
                        worst_cost = std::max(worst_cost, std::abs(lhs - rhs));
                    }
                }
            }
        }
    }
    detail = "max |U^q - V^0| = " + fmt(worst_value) + ", max |k T0 - integral MC| = " + fmt(worst_cost);
    return worst_value < 1e-10 && worst_cost < 1e-10;
}

}  // namespace

int main() {
    std::vector<Criterion> criteria = {
        {1, "threshold identities: beta(v/2) = 2k/(lambda v), beta(t*) = 1/2, q(v/2) exact", criterion1},
        {2, "closed-form value matches RK4 within 1e-6 across five prices", criterion2},
        {3, "DP best response stops within one grid cell and matches V^0 within 1e-3", criterion3},
        {4, "interior-branch revenue quasi-convex, marginal revenue single-crossing (100 draws)", criterion4},
        {5, "elasticity ratio identity within 1e-6 and above 1 (50 prices)", criterion5},
        {6, "form map pattern, 0.3673-vs-0.2 comparison, F(k=.001) nonempty, width(c*) < 1e-6", criterion6},
        {7, "free-return price 0.6 and revenue 0.2 within 1e-10, stationary at the optimum", criterion7},
        {8, "instant-learning limit: revenue mu0 v, fee k/(lambda(1-mu0)), zero surplus; 1% at rate 1e3", criterion8},
        {9, "bad news: alpha0 edge values, derivative identity, zero surplus, corner optimum", criterion9},
        {10, "Monte Carlo: 10 mechanisms inside 3 s.e., seed coverage >= 45/50", criterion10},
        {11, "ex-ante identities: U^q = V^0 and k T0 = integral of MC within 1e-10", criterion11},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        std::string detail;
        bool ok = false;
        try {
            ok = criterion.run(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        std::printf("[%s] %2d. %s  (%s)\n", ok ? "PASS" : "FAIL", criterion.number,
                    criterion.label.c_str(), detail.c_str());
        if (!ok) ++failures;
    }
    if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}
