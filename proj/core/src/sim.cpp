#include "refund/sim.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace refund {

void SimConfig::validate(const ModelParams& p) const {
    if (!(dt > 0.0)) throw std::domain_error("SimConfig: dt must be positive");
    if (!(std::max(p.lambda_post, p.rho) * dt < 0.1))
        throw std::domain_error("SimConfig: rate*dt < 0.1 violated (thinning invalid)");
    if (n_paths <= 0) throw std::domain_error("SimConfig: n_paths must be positive");
    if (grid_n < 1000) throw std::domain_error("SimConfig: grid_n >= 1000 required");
}

namespace {

constexpr double kTie = 1e-12;  // within-tie: follow the mechanism's recommendation

double belief_at_log_odds(double log_odds_value) {
    return 1.0 / (1.0 + std::exp(-log_odds_value));
}

}  // namespace

OracleReport dp_best_response(const RefundMechanism& m, double mu0, const ModelParams& p,
                              const SimConfig& cfg) {
    p.validate();
    cfg.validate(p);
    require_interior_belief(mu0, "dp_best_response");
    const double rate = p.lambda_post;
    const double high_surplus = p.v - m.price;

    // Continuation is dominated below a quarter of the effective quitting
    // belief; that belief is the backward-induction floor.
    const double net = p.v - m.price + m.cancel_fee;
    const double q_eff = (net > p.k / rate) ? p.k / (rate * net) : 1.0;
    const double floor = std::max(1e-4, 0.25 * q_eff);

    OracleReport report{};
    if (floor >= mu0) {
        report.value_at_prior = std::max(m.keep_utility(mu0, p.v), m.return_utility(mu0, p.v));
        report.stop_belief = mu0;
        return report;
    }

    const double top_lo = log_odds(mu0);
    const double bottom_lo = log_odds(floor);
    const int n_cells = cfg.grid_n;
    const double cell_time = (top_lo - bottom_lo) / (n_cells * rate);
    const int n_sub = std::max(1, static_cast<int>(std::ceil(cell_time / cfg.dt)));
    const double step = cell_time / n_sub;
    const long n_nodes = static_cast<long>(n_cells) * n_sub;

    double mu = floor;
    double value = std::max(m.keep_utility(mu, p.v), m.return_utility(mu, p.v));
    double stop_belief = m.return_utility(mu, p.v) + kTie >= m.keep_utility(mu, p.v) ? mu : 0.0;
    double prev_mu = mu;
    double prev_margin = m.keep_utility(mu, p.v) - m.return_utility(mu, p.v);

    for (long node = 1; node <= n_nodes; ++node) {
        const double lo_here = bottom_lo + (top_lo - bottom_lo) * node / n_nodes;
        mu = belief_at_log_odds(lo_here);
        // hazard sampled at the substep's midpoint belief; payoff form stays
        // the linearized mu*rate*dt of the discrete Bellman
        const double mu_mid = belief_at_log_odds(lo_here - 0.5 * rate * step);
        const double hazard = mu_mid * rate * step;
        const double cont = -p.k * step + hazard * high_surplus + (1.0 - hazard) * value;
        const double keep = m.keep_utility(mu, p.v);
        const double ret = m.return_utility(mu, p.v);
        value = std::max({keep, ret, cont});
        // the return boundary: where the continue-vs-return margin crosses
        // zero, located by linear interpolation between adjacent nodes
        const double margin = std::max(cont, keep) - ret;
        if (margin <= kTie) {
            stop_belief = mu;
        } else if (prev_margin <= kTie && node > 1) {
            const double w = (kTie - prev_margin) / (margin - prev_margin);
            stop_belief = prev_mu + w * (mu - prev_mu);
        }
        prev_margin = margin;
        prev_mu = mu;
    }

    report.value_at_prior = value;
    report.stop_belief = stop_belief;
    return report;
}

OracleReport dp_best_response_badnews(const RefundMechanism& m, double mu0, const ModelParams& p,
                                      const SimConfig& cfg) {
    p.validate_badnews();
    cfg.validate(p);
    require_interior_belief(mu0, "dp_best_response_badnews");
    const double rate = p.rho;
    const double bad_news_utility = m.return_utility(0.0, p.v);

    // Continuation above the consumption belief is dominated; mirror the
    // good-news floor with a ceiling a quarter of the way to belief 1.
    double ceiling = 1.0 - 1e-6;
    if (m.price > p.k / rate) {
        const double consumption = 1.0 - p.k / (rate * m.price);
        ceiling = std::min(ceiling, 1.0 - std::max(1e-6, 0.25 * (1.0 - consumption)));
    }

    OracleReport report{};
    if (ceiling <= mu0) {
        report.value_at_prior = std::max(m.keep_utility(mu0, p.v), m.return_utility(mu0, p.v));
        report.stop_belief = mu0;
        return report;
    }

    const double bottom_lo = log_odds(mu0);
    const double top_lo = log_odds(ceiling);
    const int n_cells = cfg.grid_n;
    const double cell_time = (top_lo - bottom_lo) / (n_cells * rate);
    const int n_sub = std::max(1, static_cast<int>(std::ceil(cell_time / cfg.dt)));
    const double step = cell_time / n_sub;
    const long n_nodes = static_cast<long>(n_cells) * n_sub;

    double mu = ceiling;
    double value = std::max(m.keep_utility(mu, p.v), m.return_utility(mu, p.v));
    double stop_belief = m.keep_utility(mu, p.v) + kTie >= m.return_utility(mu, p.v) ? mu : 1.0;
    double prev_mu = mu;
    double prev_margin = -1.0;  // keep wins at the ceiling

    for (long node = n_nodes - 1; node >= 0; --node) {
        const double lo_here = bottom_lo + (top_lo - bottom_lo) * node / n_nodes;
        mu = belief_at_log_odds(lo_here);
        const double mu_mid = belief_at_log_odds(lo_here + 0.5 * rate * step);
        const double hazard = (1.0 - mu_mid) * rate * step;
        const double cont = -p.k * step + hazard * bad_news_utility + (1.0 - hazard) * value;
        const double keep = m.keep_utility(mu, p.v);
        const double ret = m.return_utility(mu, p.v);
        value = std::max({keep, ret, cont});
        // consumption boundary: where continuing starts to beat keeping,
        // interpolated between adjacent nodes
        const double margin = std::max(cont, ret) - keep;
        if (margin <= kTie) {
            stop_belief = mu;
        } else if (prev_margin <= kTie && node < n_nodes - 1) {
            const double w = (kTie - prev_margin) / (margin - prev_margin);
            stop_belief = prev_mu + w * (mu - prev_mu);
        }
        prev_margin = margin;
        prev_mu = mu;
    }

    report.value_at_prior = value;
    report.stop_belief = stop_belief;
    return report;
}

namespace {

struct PathSums {
    double revenue = 0.0, revenue_sq = 0.0;
    double returns = 0.0;
    double cost = 0.0;
    PathSums& operator+=(const PathSums& o) {
        revenue += o.revenue;
        revenue_sq += o.revenue_sq;
        returns += o.returns;
        cost += o.cost;
        return *this;
    }
};

struct PathModel {
    double mu0, rate, t0, keep_revenue, return_revenue, k;
    std::uint64_t seed;

    PathSums run(std::int64_t i) const {
        rng::Stream stream(seed, static_cast<std::uint64_t>(i));
        const bool high = stream.next_unit() < mu0;
        const double arrival = -std::log(stream.next_unit()) / rate;
        PathSums s;
        if (high && arrival <= t0) {
            s.revenue = keep_revenue;
            s.cost = k * arrival;
        } else {
            s.revenue = return_revenue;
            s.returns = 1.0;
            s.cost = k * t0;
        }
        s.revenue_sq = s.revenue * s.revenue;
        return s;
    }
};

// Deterministic pairwise reduction: the result is independent of chunking
// and thread schedules, reproducible to the last bit for a given seed.
PathSums reduce(const PathModel& model, std::int64_t lo, std::int64_t hi) {
    if (hi - lo <= 64) {
        PathSums s;
        for (std::int64_t i = lo; i < hi; ++i) s += model.run(i);
        return s;
    }
    const std::int64_t mid = lo + (hi - lo) / 2;
    PathSums s = reduce(model, lo, mid);
    s += reduce(model, mid, hi);
    return s;
}

}  // namespace

OracleReport simulate_paths(const RefundMechanism& m, double policy_stop, double mu0,
                            const ModelParams& p, const SimConfig& cfg) {
    p.validate();
    cfg.validate(p);
    require_interior_belief(mu0, "simulate_paths");
    if (policy_stop > mu0 + 1e-12)
        throw std::domain_error("simulate_paths: policy_stop must not exceed mu0");

    OracleReport report{};
    report.stop_belief = policy_stop;
    const double n = static_cast<double>(cfg.n_paths);

    if (policy_stop >= mu0 - 1e-12) {
        // Degenerate rule: purchase and keep immediately.
        report.empirical_revenue = m.price;
        return report;
    }

    PathModel model{};
    model.mu0 = mu0;
    model.rate = p.lambda_post;
    model.t0 = time_to_belief(mu0, policy_stop, p.lambda_post);
    model.keep_revenue = m.price;
    model.return_revenue = m.return_transfer + m.cancel_fee;
    model.k = p.k;
    model.seed = cfg.seed;

    const PathSums sums = reduce(model, 0, cfg.n_paths);
    report.empirical_revenue = sums.revenue / n;
    report.empirical_return_rate = sums.returns / n;
    report.mean_learning_cost = sums.cost / n;
    if (cfg.n_paths > 1) {
        const double rev_var =
            std::max(0.0, (sums.revenue_sq - sums.revenue * sums.revenue / n) / (n - 1.0));
        report.revenue_se = std::sqrt(rev_var / n);
        const double ret_var =
            std::max(0.0, (sums.returns - sums.returns * sums.returns / n) / (n - 1.0));
        report.return_rate_se = std::sqrt(ret_var / n);
    }
    return report;
}

}  // namespace refund
