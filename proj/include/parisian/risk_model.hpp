#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace parisian {

struct Line {
    double alpha = 1.0; // initial capital share
    double mu = 1.0;    // premium rate
    double sigma = 1.0; // volatility share
};

// Many-inputs proportional reinsurance model: d lines sharing N i.i.d.
// fBm-driven sub-risks, horizon S (infinity allowed).
struct RiskModel {
    std::vector<Line> lines;
    double hurst = 0.5;
    double horizon = std::numeric_limits<double>::infinity();

    bool unbounded_horizon() const { return !(horizon < std::numeric_limits<double>::infinity()); }
    void validate() const;
};

enum class OptimalKind { Stationary, Kink, Coincident };

struct OptimalPoint {
    double t_star = 0.0;
    OptimalKind kind = OptimalKind::Stationary;
    std::size_t active_left = 0;  // line index active just left of t*
    std::size_t active_right = 0; // line index active just right of t*
    double sigma_star = 0.0;
};

// Local behavior at the optimal point:
// sigma(t)/sigma(t*) = 1 - A_pm |t-t*|^{gamma_pm} + o(.),
// corr = 1 - D_corr |t-s|^{alpha} + o(.) with alpha = 2H.
struct LocalExpansion {
    double A_minus = 0.0;
    double gamma_minus = 0.0;
    double A_plus = 0.0;
    double gamma_plus = 0.0;
    double alpha = 0.0;
    double D_corr = 0.0;
    double t_star = 0.0;
    double sigma_star = 0.0;
};

// Barrier D(t) = max_i (alpha_i + mu_i t)/sigma_i (volatilities folded in;
// sigma_i = 1 reproduces the bare max_i(alpha_i + mu_i t)).
double barrier(const RiskModel& model, double t);

// d/dt of the barrier from the requested side (+1 right, -1 left).
double barrier_derivative(const RiskModel& model, double t, int side);

// sigma_Z(t) = t^H / D(t), the standard deviation of B_H(t)/D(t).
double sigma_Z(const RiskModel& model, double t);

// Unique maximizer of sigma_Z, located through the sign change of
// G(t) = H D(t) - t D'(t); G is linear and decreasing between barrier kinks.
OptimalPoint find_tstar(const RiskModel& model);

LocalExpansion local_expansion(const RiskModel& model);

// Natural asymptotic parameter sqrt(N) / sigma_Z(t*).
double n_hat(const RiskModel& model, double big_n);

} // namespace parisian
