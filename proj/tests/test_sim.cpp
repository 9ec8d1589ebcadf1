#include "refund/sim.hpp"

#include "oracles.hpp"
#include "refund/optimizer.hpp"

#include <doctest.h>

#include <cmath>

using namespace refund;

namespace {
const ModelParams kCanon{1.0, 0.1, 1.0, 1.0, 1.0};
}

TEST_CASE("config validation") {
    SimConfig cfg;
    cfg.dt = 0.2;
    CHECK_THROWS_AS(cfg.validate(kCanon), std::domain_error);
    cfg.dt = 1e-3;
    cfg.grid_n = 100;
    CHECK_THROWS_AS(cfg.validate(kCanon), std::domain_error);
}

TEST_CASE("DP reproduces the option value for the walk-away mechanism") {
    // x_r = t_r = 0 turns the return branch into the pre-purchase walk-away
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.grid_n = 10000;
    const RefundMechanism walkaway = RefundMechanism::free_return(0.5);
    const OracleReport report = dp_best_response(walkaway, 0.5, kCanon, cfg);
    CHECK(report.value_at_prior == doctest::Approx(value_v0(0.5, 0.5, kCanon)).epsilon(2e-4));
    CHECK(report.stop_belief == doctest::Approx(0.2).epsilon(1e-3));

    // pricing the buyer out entirely: immediate walk-away, zero value
    const OracleReport priced_out =
        dp_best_response(RefundMechanism::free_return(0.85), 0.5, kCanon, cfg);
    CHECK(priced_out.value_at_prior == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(priced_out.stop_belief == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("halving dt roughly halves the DP error") {
    const RefundMechanism walkaway = RefundMechanism::free_return(0.5);
    const double exact = value_v0(0.5, 0.5, kCanon);
    SimConfig coarse;
    coarse.dt = 4e-4;
    coarse.grid_n = 2000;
    SimConfig fine = coarse;
    fine.dt = 2e-4;
    const double err_coarse =
        std::abs(dp_best_response(walkaway, 0.5, kCanon, coarse).value_at_prior - exact);
    const double err_fine =
        std::abs(dp_best_response(walkaway, 0.5, kCanon, fine).value_at_prior - exact);
    CHECK(err_fine < err_coarse);
    CHECK(err_coarse / err_fine == doctest::Approx(2.0).epsilon(0.35));
}

TEST_CASE("DP best response stops at the implemented belief") {
    SimConfig cfg;
    cfg.dt = 1e-4;
    cfg.grid_n = 10000;
    for (double price : {0.45, 0.5, 0.55}) {
        const double q = quitting_belief(price, kCanon);
        for (double beta : {q + 0.02, 0.3, 0.42}) {
            const RefundMechanism m = return_policy_for(beta, price, kCanon);
            const OracleReport report = dp_best_response(m, 0.5, kCanon, cfg);
            CHECK(report.stop_belief ==
                  doctest::Approx(beta).epsilon(cfg.grid_cell(0.5, 0.25 * q) / beta + 1e-6));
            CHECK(report.value_at_prior == doctest::Approx(value_v0(0.5, price, kCanon)).epsilon(2e-3));
        }
    }
}

TEST_CASE("path simulation: degenerate rule pays the price exactly") {
    SimConfig cfg;
    cfg.n_paths = 1000;
    const RefundMechanism m = RefundMechanism::no_return(0.37);
    const OracleReport report = simulate_paths(m, 0.5, 0.5, kCanon, cfg);
    CHECK(report.empirical_revenue == 0.37);
    CHECK(report.empirical_return_rate == 0.0);
    CHECK(report.mean_learning_cost == 0.0);
}

TEST_CASE("path simulation matches the analytic revenue and return rate") {
    SimConfig cfg;
    cfg.n_paths = 100000;
    cfg.seed = 12345;
    const double beta = 0.3, price = 0.5, mu0 = 0.5;
    const RefundMechanism m = return_policy_for(beta, price, kCanon);
    const OracleReport report = simulate_paths(m, beta, mu0, kCanon, cfg);

    const double revenue = expected_revenue(StoppingDistribution::good_news(mu0, beta), price, kCanon);
    const double gamma = (1.0 - mu0) / (1.0 - beta);
    CHECK(std::abs(report.empirical_revenue - revenue) < 3.0 * report.revenue_se);
    CHECK(std::abs(report.empirical_return_rate - gamma) < 3.0 * report.return_rate_se);
    CHECK(report.revenue_se > 0.0);
    CHECK(report.revenue_se < 2e-3);

    // expected learning cost: k (mu0 E[T1] + (1-mu0) T0)
    const double t0 = time_to_belief(mu0, beta, kCanon.lambda);
    const double expected_t1 = (mu0 - beta) / (mu0 * (1.0 - beta)) / kCanon.lambda;
    const double cost = kCanon.k * (mu0 * expected_t1 + (1.0 - mu0) * t0);
    CHECK(report.mean_learning_cost == doctest::Approx(cost).epsilon(2e-2));
}

TEST_CASE("same seed, same bits; different seed, different draws") {
    SimConfig cfg;
    cfg.n_paths = 20000;
    cfg.seed = 7;
    const RefundMechanism m = return_policy_for(0.3, 0.5, kCanon);
    const OracleReport a = simulate_paths(m, 0.3, 0.5, kCanon, cfg);
    const OracleReport b = simulate_paths(m, 0.3, 0.5, kCanon, cfg);
    CHECK(a.empirical_revenue == b.empirical_revenue);
    CHECK(a.revenue_se == b.revenue_se);
    CHECK(a.empirical_return_rate == b.empirical_return_rate);
    CHECK(a.mean_learning_cost == b.mean_learning_cost);

    cfg.seed = 8;
    const OracleReport c = simulate_paths(m, 0.3, 0.5, kCanon, cfg);
    CHECK(c.empirical_revenue != a.empirical_revenue);
}

TEST_CASE("estimator coverage over independent seeds") {
    SimConfig cfg;
    cfg.n_paths = 20000;
    const double beta = 0.3, price = 0.5, mu0 = 0.5;
    const RefundMechanism m = return_policy_for(beta, price, kCanon);
    const double revenue = expected_revenue(StoppingDistribution::good_news(mu0, beta), price, kCanon);
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        cfg.seed = seed * 977;
        const OracleReport report = simulate_paths(m, beta, mu0, kCanon, cfg);
        if (std::abs(report.empirical_revenue - revenue) < 3.0 * report.revenue_se) ++covered;
    }
    CHECK(covered >= 8);
}
