#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace refund {

/// Model primitives for the experimentation environment.
///
/// The buyer values the product at v or 0, pays a flow cost k while
/// learning, and receives conclusive good news at Poisson rate `lambda`
/// (pre-purchase) or `lambda_post` (post-purchase, >= lambda).  `rho` is
/// the bad-news arrival rate used only by the bad-news solver.
struct ModelParams {
    double v = 1.0;
    double k = 0.1;
    double lambda = 1.0;
    double lambda_post = 1.0;
    double rho = 1.0;

    /// Effective learning cost c = k / lambda.
    double cost_ratio() const { return k / lambda; }

    /// Throws std::domain_error naming the violated inequality.
    void validate() const {
        if (!(v > 0.0)) throw std::domain_error("ModelParams: v > 0 violated");
        if (!(k > 0.0)) throw std::domain_error("ModelParams: k > 0 violated");
        if (!(lambda > 0.0)) throw std::domain_error("ModelParams: lambda > 0 violated");
        if (!(4.0 * k < lambda * v))
            throw std::domain_error("ModelParams: 4k < lambda*v violated (learning never viable)");
        if (!(lambda_post >= lambda))
            throw std::domain_error("ModelParams: lambda_post >= lambda violated");
    }

    /// Extra validity check for the bad-news solver.
    void validate_badnews() const {
        validate();
        if (!(rho > 0.0)) throw std::domain_error("ModelParams: rho > 0 violated");
        if (!(4.0 * k < rho * v))
            throw std::domain_error("ModelParams: 4k < rho*v violated (bad-news learning never viable)");
    }
};

namespace detail {

// Beliefs exactly 0 or 1 make the log-odds blow up; clamp per the grid-edge guard.
inline constexpr double kBeliefClamp = 1e-15;

inline double clamp_belief(double mu) {
    if (mu < kBeliefClamp) return kBeliefClamp;
    if (mu > 1.0 - kBeliefClamp) return 1.0 - kBeliefClamp;
    return mu;
}

}  // namespace detail

/// log(mu / (1 - mu)), with arguments clamped away from {0, 1}.
inline double log_odds(double mu) {
    mu = detail::clamp_belief(mu);
    return std::log(mu / (1.0 - mu));
}

inline void require_interior_belief(double mu, const char* what) {
    if (!(mu > 0.0) || !(mu < 1.0))
        throw std::domain_error(std::string(what) + ": belief must lie strictly inside (0, 1), got " +
                                std::to_string(mu));
}

}  // namespace refund
