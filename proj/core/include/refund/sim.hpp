#pragma once

#include "refund/mechanism.hpp"

#include <cstdint>

namespace refund {

/// Discretization and sampling knobs for the buyer oracle.
struct SimConfig {
    double dt = 1e-4;           // time step; lambda*dt < 0.1 required
    std::int64_t n_paths = 100000;
    std::uint64_t seed = 1;
    int grid_n = 10000;         // belief grid size for the DP (>= 1000)

    void validate(const ModelParams& p) const;

    /// Belief width of one DP reporting cell for a given start/floor pair.
    double grid_cell(double start, double floor) const { return (start - floor) / grid_n; }
};

/// Best-response / simulation summary.
struct OracleReport {
    double stop_belief = 0.0;       // DP: top of the return region
    double value_at_prior = 0.0;    // DP: value at mu0
    double empirical_revenue = 0.0;
    double revenue_se = 0.0;
    double empirical_return_rate = 0.0;
    double return_rate_se = 0.0;
    double mean_learning_cost = 0.0;
};

/// Discrete-time buyer best response to mechanism m, by backward induction
/// along the no-news belief path from mu0 down to the belief floor
/// max(1e-4, q/4).  At each node the buyer keeps, requests a return, or
/// pays k*dt to continue with hazard mu*lambda*dt.  The learning rate is
/// lambda_post (equal to lambda by default); with the free-return-shaped
/// mechanism (x_r = t_r = 0) the "return" branch is the walk-away option
/// and the DP reproduces the pre-purchase value V^0.
OracleReport dp_best_response(const RefundMechanism& m, double mu0, const ModelParams& p,
                              const SimConfig& cfg);

/// Seeded Monte-Carlo of the stopping rule "stop at policy_stop or on good
/// news": per path, draw the state and the conclusive-news time, accumulate
/// seller revenue, return indicator and learning cost.  Deterministic given
/// the seed (counter-based per-path streams), reduced by pairwise summation.
OracleReport simulate_paths(const RefundMechanism& m, double policy_stop, double mu0,
                            const ModelParams& p, const SimConfig& cfg);

/// Bad-news variant: backward induction along the upward no-news path with
/// hazard (1-mu)*rho*dt; reports the consumption (upper) stopping belief,
/// which should match Q_N(t_b) within a grid cell.
OracleReport dp_best_response_badnews(const RefundMechanism& m, double mu0, const ModelParams& p,
                                      const SimConfig& cfg);

namespace rng {

/// splitmix64; keyed per (seed, counter) so path i's draws are independent
/// of evaluation order.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

struct Stream {
    std::uint64_t state;
    Stream(std::uint64_t seed, std::uint64_t counter) : state(mix(seed) ^ mix(0x8000000000000000ull | counter)) {}
    std::uint64_t next_u64() {
        state += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    /// Uniform on (0, 1): 53-bit mantissa, zero mapped away.
    double next_unit() {
        const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return u > 0.0 ? u : 0x1.0p-53;
    }
};

}  // namespace rng

}  // namespace refund
