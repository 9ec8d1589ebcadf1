// refund: solve | sweep | region | simulate
//
// Computes optimal refund mechanisms for a seller facing a buyer who learns
// his valuation through Poisson experimentation, sweeps prices, maps the
// optimal form over priors, and cross-checks everything against the
// DP / Monte-Carlo buyer oracle.  JSON for single results, CSV for grids.

#include "refund/badnews.hpp"
#include "refund/optimizer.hpp"
#include "refund/postpurchase.hpp"
#include "refund/sim.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

using json = nlohmann::ordered_json;
using namespace refund;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCheckFailed = 3;

struct RunConfig {
    ModelParams params;
    double mu0 = 0.5;
    std::string grid;
    std::uint64_t seed = 1;
    double dt = 1e-4;
    std::int64_t paths = 100000;
    std::string format = "csv";
    std::string out;
    bool badnews = false;
    bool postpurchase_limit = false;
    bool check = false;
};

struct GridSpec {
    double lo, hi;
    int n;
    double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1.0); }
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g{};
    char trailing = 0;
    if (std::sscanf(text.c_str(), "%lf:%lf:%d%c", &g.lo, &g.hi, &g.n, &trailing) != 3 || g.n < 1 ||
        g.hi < g.lo)
        throw CLI::ValidationError("--grid", "expected lo:hi:n with hi >= lo and n >= 1");
    return g;
}

std::string fmt12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

json config_json(const RunConfig& cfg) {
    json j;
    j["v"] = cfg.params.v;
    j["k"] = cfg.params.k;
    j["lambda"] = cfg.params.lambda;
    j["lambda_post"] = cfg.params.lambda_post;
    j["rho"] = cfg.params.rho;
    j["mu0"] = cfg.mu0;
    if (!cfg.grid.empty()) j["grid"] = cfg.grid;
    j["seed"] = cfg.seed;
    j["dt"] = cfg.dt;
    j["paths"] = cfg.paths;
    j["badnews"] = cfg.badnews;
    j["postpurchase_limit"] = cfg.postpurchase_limit;
    return j;
}

void write_csv_prologue(std::ostream& os, const char* schema, const RunConfig& cfg) {
    os << "# schema: " << schema << "\n";
    const json j = config_json(cfg);
    for (const auto& item : j.items())
        os << "# " << item.key() << "=" << (item.value().is_string()
                                                ? item.value().get<std::string>()
                                                : item.value().dump())
           << "\n";
}

void emit_text(const RunConfig& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(cfg.out, std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file: " + cfg.out);
    file << text;
}

json mechanism_json(const RefundMechanism& m) {
    return json{{"t_b", m.price},
                {"x_r", m.keep_prob},
                {"t_r", m.return_transfer},
                {"t_c", m.cancel_fee}};
}

json solution_json(const Solution& s) {
    return json{{"form", to_string(s.form)},
                {"mechanism", mechanism_json(s.mechanism)},
                {"beta_star", s.beta_star},
                {"revenue", s.revenue},
                {"buyer_surplus", s.buyer_surplus}};
}

Solution route_solution(const RunConfig& cfg, double mu0) {
    if (cfg.badnews) return optimal_mechanism_n(mu0, cfg.params);
    if (cfg.postpurchase_limit) return optimal_mechanism_limit(mu0, cfg.params);
    return optimal_mechanism(mu0, cfg.params);
}

int cmd_solve(const RunConfig& cfg) {
    const Solution s = route_solution(cfg, cfg.mu0);
    json j;
    j["schema"] = "refundopt.solve.v1";
    j["config"] = config_json(cfg);
    j.update(solution_json(s));

    json candidates;
    if (!cfg.postpurchase_limit) {
        try {
            candidates["deterrence"] = cfg.badnews
                                           ? consumption_price_n(cfg.mu0, cfg.params)
                                           : learning_deterrence_solution(cfg.mu0, cfg.params).revenue;
        } catch (const std::domain_error&) {
            candidates["deterrence"] = nullptr;
        }
        try {
            if (cfg.badnews) {
                const double alpha0 = alpha_max(cfg.mu0, cfg.params);
                candidates["free_return"] =
                    cfg.mu0 / alpha0 * consumption_price_n(alpha0, cfg.params);
            } else {
                candidates["free_return"] = free_return_solution(cfg.mu0, cfg.params).revenue;
            }
        } catch (const std::domain_error&) {
            candidates["free_return"] = nullptr;
        }
    }
    j["candidates"] = candidates;
    emit_text(cfg, j.dump(2) + "\n");
    return kExitOk;
}

int cmd_sweep(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    GridSpec grid{};
    if (cfg.grid.empty()) {
        grid.lo = trial_price(cfg.mu0, p);
        grid.hi = quitting_price(cfg.mu0, p);
        grid.n = 101;
    } else {
        grid = parse_grid(cfg.grid);
    }

    struct Row {
        double price;
        std::optional<double> beta, revenue, x_r, t_r, gamma;
        const char* status;
    };
    const double deter_price = trial_price(cfg.mu0, p);
    std::vector<Row> rows;
    rows.reserve(grid.n);
    for (int i = 0; i < grid.n; ++i) {
        Row row{grid.at(i), {}, {}, {}, {}, {}, "ok"};
        try {
            const BetaStar b = optimal_beta_for_price(row.price, cfg.mu0, p);
            row.beta = b.beta;
            if (!b.attained) {
                row.status = "supremum_not_attained";
                row.revenue = transfer_at(cfg.mu0 - 1e-12, row.price, cfg.mu0, p);
                row.gamma = 1.0;
            } else if (b.beta >= cfg.mu0 && row.price <= deter_price + 1e-12) {
                // the deterrence point: Dirac at the prior under a no-return policy
                const RefundMechanism m = RefundMechanism::no_return(row.price);
                row.revenue = expected_revenue(StoppingDistribution::dirac(cfg.mu0), row.price, p);
                row.x_r = m.keep_prob;
                row.t_r = m.return_transfer;
                row.gamma = 0.0;
            } else if (b.beta >= cfg.mu0) {
                // full learning degenerate at the prior (price = q^{-1}(mu0)):
                // the buyer quits immediately, returning with probability one
                row.revenue = 0.0;
                row.x_r = 0.0;
                row.t_r = 0.0;
                row.gamma = 1.0;
            } else {
                const RefundMechanism m = return_policy_for(b.beta, row.price, p);
                row.revenue =
                    expected_revenue(StoppingDistribution::good_news(cfg.mu0, b.beta), row.price, p);
                row.x_r = m.keep_prob;
                row.t_r = m.return_transfer;
                row.gamma = (1.0 - cfg.mu0) / (1.0 - b.beta);
            }
        } catch (const std::domain_error&) {
            row.status = "infeasible_price";
        }
        rows.push_back(row);
    }

    auto cell = [](const std::optional<double>& x) { return x ? fmt12(*x) : std::string(); };
    if (cfg.format == "json") {
        json j;
        j["schema"] = "refundopt.sweep.v1";
        j["config"] = config_json(cfg);
        j["rows"] = json::array();
        for (const Row& row : rows) {
            json r;
            r["t_b"] = row.price;
            r["beta_star"] = row.beta ? json(*row.beta) : json(nullptr);
            r["revenue"] = row.revenue ? json(*row.revenue) : json(nullptr);
            r["x_r"] = row.x_r ? json(*row.x_r) : json(nullptr);
            r["t_r"] = row.t_r ? json(*row.t_r) : json(nullptr);
            r["gamma"] = row.gamma ? json(*row.gamma) : json(nullptr);
            r["status"] = row.status;
            j["rows"].push_back(r);
        }
        emit_text(cfg, j.dump(2) + "\n");
    } else {
        std::ostringstream os;
        write_csv_prologue(os, "refundopt.sweep.csv.v1", cfg);
        os << "t_b,beta_star,revenue,x_r,t_r,gamma,status\n";
        for (const Row& row : rows)
            os << fmt12(row.price) << ',' << cell(row.beta) << ',' << cell(row.revenue) << ','
               << cell(row.x_r) << ',' << cell(row.t_r) << ',' << cell(row.gamma) << ','
               << row.status << "\n";
        emit_text(cfg, os.str());
    }
    return kExitOk;
}

int cmd_region(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    GridSpec grid{};
    if (cfg.grid.empty()) {
        grid.n = 500;
        grid.lo = 1.0 / (grid.n + 1.0);
        grid.hi = grid.n / (grid.n + 1.0);
    } else {
        grid = parse_grid(cfg.grid);
        if (grid.lo <= 0.0 || grid.hi >= 1.0)
            throw CLI::ValidationError("--grid", "priors must lie strictly inside (0, 1)");
    }

    std::ostringstream os;
    write_csv_prologue(os, "refundopt.region.csv.v1", cfg);
    os << "mu0,form,revenue,buyer_surplus,price\n";
    for (int i = 0; i < grid.n; ++i) {
        const double mu0 = grid.at(i);
        const Solution s = route_solution(cfg, mu0);
        os << fmt12(mu0) << ',' << to_string(s.form) << ',' << fmt12(s.revenue) << ','
           << fmt12(s.buyer_surplus) << ',' << fmt12(s.mechanism.price) << "\n";
    }

    json summary;
    summary["schema"] = "refundopt.region.v1";
    summary["config"] = config_json(cfg);
    if (cfg.badnews) {
        const BadNewsRegion region = badnews_region(p);
        summary["mu_low_N"] = region.mu_low;
        summary["mu_high_N"] = region.mu_high;
        summary["F_N"] = json::array({region.f_low, region.f_high});
    } else {
        const RegionMap map = region_map(p, 512);
        summary["mu_low"] = map.mu_low;
        summary["mu_high"] = map.mu_high;
        summary["F"] = map.has_free_return ? json::array({map.f_low, map.f_high}) : json(nullptr);
        summary["c_star"] = map.c_star;
    }

    // rows to --out (or stdout); the summary goes to stdout when rows went to
    // a file, to stderr otherwise, so the CSV stream stays clean
    emit_text(cfg, os.str());
    if (cfg.out.empty())
        std::cerr << summary.dump(2) << "\n";
    else
        std::cout << summary.dump(2) << "\n";
    return kExitOk;
}

struct SimulateOptions {
    double t_b = -1.0;  // negative: take the mechanism from solve
    double x_r = 0.0;
    double t_r = 0.0;
    double t_c = 0.0;
    double beta = -1.0;  // negative: use the DP best response
    bool from_solve = false;
};

int cmd_simulate(const RunConfig& cfg, const SimulateOptions& opt) {
    const ModelParams& p = cfg.params;
    SimConfig sim;
    sim.dt = cfg.dt;
    sim.n_paths = cfg.paths;
    sim.seed = cfg.seed;

    RefundMechanism m;
    double policy = -1.0;
    if (opt.from_solve) {
        const Solution s = optimal_mechanism(cfg.mu0, p);
        m = s.mechanism;
        policy = s.beta_star;
    } else {
        if (opt.t_b < 0.0)
            throw CLI::ValidationError("--tb", "specify a mechanism (--tb ...) or --from-solve");
        m = RefundMechanism{opt.t_b, opt.x_r, opt.t_r, opt.t_c};
    }

    const OracleReport dp = dp_best_response(m, cfg.mu0, p, sim);
    if (opt.beta >= 0.0) policy = opt.beta;
    if (policy < 0.0) policy = dp.stop_belief;
    policy = std::min(policy, cfg.mu0);

    SimConfig half = sim;
    half.dt = 0.5 * sim.dt;
    const OracleReport dp_half = dp_best_response(m, cfg.mu0, p, half);
    const double reference = value_v0(cfg.mu0, m.price, p);

    const OracleReport paths = simulate_paths(m, policy, cfg.mu0, p, sim);
    const bool degenerate = policy >= cfg.mu0 - 1e-12;
    const double gamma = degenerate ? 0.0 : (1.0 - cfg.mu0) / (1.0 - policy);
    const double analytic_revenue =
        gamma * (m.return_transfer + m.cancel_fee) + (1.0 - gamma) * m.price;

    json j;
    j["schema"] = "refundopt.simulate.v1";
    j["config"] = config_json(cfg);
    j["mechanism"] = mechanism_json(m);
    j["policy_stop"] = policy;
    j["dp"] = {{"stop_belief", dp.stop_belief},
               {"value_at_prior", dp.value_at_prior},
               {"option_value_reference", reference}};
    j["paths"] = {{"revenue", paths.empirical_revenue},
                  {"revenue_se", paths.revenue_se},
                  {"return_rate", paths.empirical_return_rate},
                  {"return_rate_se", paths.return_rate_se},
                  {"mean_learning_cost", paths.mean_learning_cost}};
    j["analytic"] = {{"revenue", analytic_revenue}, {"return_rate", gamma}};

    const double rev_gap = std::abs(paths.empirical_revenue - analytic_revenue);
    const double ret_gap = std::abs(paths.empirical_return_rate - gamma);
    const bool rev_ok = rev_gap <= 3.0 * paths.revenue_se + 1e-12;
    const bool ret_ok = ret_gap <= 3.0 * paths.return_rate_se + 1e-12;
    j["checks"] = json::array(
        {json{{"name", "revenue_within_3se"}, {"pass", rev_ok}, {"gap", rev_gap},
              {"band", 3.0 * paths.revenue_se}},
         json{{"name", "return_rate_within_3se"}, {"pass", ret_ok}, {"gap", ret_gap},
              {"band", 3.0 * paths.return_rate_se}}});
    j["convergence"] = {{"dt", sim.dt},
                        {"value_error", std::abs(dp.value_at_prior - reference)},
                        {"half_dt", half.dt},
                        {"half_dt_value_error", std::abs(dp_half.value_at_prior - reference)}};

    emit_text(cfg, j.dump(2) + "\n");
    if (cfg.check && !(rev_ok && ret_ok)) return kExitCheckFailed;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Optimal refund mechanisms under Poisson buyer learning"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value config file; flags override it");

    RunConfig cfg;
    app.add_option("--v", cfg.params.v, "high valuation v > 0")->capture_default_str();
    app.add_option("--k", cfg.params.k, "flow learning cost k > 0")->capture_default_str();
    app.add_option("--lambda", cfg.params.lambda, "good-news rate (pre-purchase)")
        ->capture_default_str();
    double lambda_post = -1.0;
    app.add_option("--lambda-post", lambda_post, "post-purchase rate (default: --lambda)");
    app.add_option("--rho", cfg.params.rho, "bad-news rate (bad-news model only)")
        ->capture_default_str();
    app.add_option("--mu0", cfg.mu0, "prior belief in (0,1)")->capture_default_str();
    app.add_option("--grid", cfg.grid, "grid as lo:hi:n (prices for sweep, priors for region)");
    app.add_option("--seed", cfg.seed, "Monte-Carlo seed")->capture_default_str();
    app.add_option("--dt", cfg.dt, "DP time step")->capture_default_str();
    app.add_option("--paths", cfg.paths, "Monte-Carlo path count")->capture_default_str();
    app.add_option("--format", cfg.format, "json|csv (grid commands)")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--out", cfg.out, "output path (default: stdout)");
    app.add_flag("--badnews", cfg.badnews, "bad-news learning model");
    app.add_flag("--postpurchase-limit", cfg.postpurchase_limit,
                 "instant post-purchase learning limit");
    app.add_flag("--check", cfg.check, "exit 3 if a 3-s.e. check fails (simulate)");

    CLI::App* solve = app.add_subcommand("solve", "optimal mechanism at a single prior (JSON)");
    CLI::App* sweep = app.add_subcommand("sweep", "price sweep at a fixed prior (CSV)");
    CLI::App* region = app.add_subcommand("region", "form map over priors (CSV + JSON summary)");
    CLI::App* simulate = app.add_subcommand("simulate", "DP + Monte-Carlo oracle run (JSON)");
    for (CLI::App* sub : {solve, sweep, region, simulate}) sub->fallthrough();

    SimulateOptions sim_opt;
    simulate->add_option("--tb", sim_opt.t_b, "mechanism price t_b");
    simulate->add_option("--xr", sim_opt.x_r, "keep probability on return");
    simulate->add_option("--tr", sim_opt.t_r, "return transfer");
    simulate->add_option("--tc", sim_opt.t_c, "cancellation fee");
    simulate->add_option("--beta", sim_opt.beta, "stopping policy (default: DP best response)");
    simulate->add_flag("--from-solve", sim_opt.from_solve, "use the solved optimal mechanism");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        cfg.params.lambda_post = lambda_post > 0.0 ? lambda_post : cfg.params.lambda;
        cfg.params.validate();
        if (cfg.badnews) cfg.params.validate_badnews();
        if (cfg.badnews && cfg.postpurchase_limit)
            throw std::domain_error("--badnews and --postpurchase-limit are mutually exclusive");
        if (!(cfg.mu0 > 0.0 && cfg.mu0 < 1.0))
            throw std::domain_error("mu0 must lie strictly inside (0, 1)");

        if (solve->parsed()) return cmd_solve(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (region->parsed()) return cmd_region(cfg);
        if (simulate->parsed()) return cmd_simulate(cfg, sim_opt);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitConfig;
}
