#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "parisian/asymptotics.hpp"
#include "parisian/parisian_functional.hpp"
#include "parisian/risk_model.hpp"

namespace parisian {

// Synthetic process Z(t) = sigma(t) U(t) with
//   sigma(t) = 1 / (1 + A_+ t^{g+} [t>=0] + A_- |t|^{g-} [t<0]),
//   U(t) = B_H(b + t) / (b + t)^H,  b = base_time,
// which satisfies the variance expansion with the given (A_pm, gamma_pm) and
// the correlation expansion with alpha = 2H, D = 1/(2 b^{2H}).
struct SyntheticProcessSpec {
    double hurst = 0.5;
    double A_minus = 1.0;
    double gamma_minus = 1.0;
    double A_plus = 1.0;
    double gamma_plus = 1.0;
    double base_time = 1.0;

    void validate() const;
    LocalExpansion expansion() const; // recentred: t_star = 0, sigma_star = 1
    double sigma(double t) const;
    double cov(double t1, double t2) const;
};

using RuinSource = std::variant<RiskModel, SyntheticProcessSpec>;

struct Threshold {
    enum class Kind { U, BigN };
    Kind kind = Kind::U;
    double value = 0.0;

    static Threshold u(double v) { return {Kind::U, v}; }
    static Threshold big_n(double v) { return {Kind::BigN, v}; }
};

struct WindowRule {
    enum class Kind { FixedTu, ScaledT };
    Kind kind = Kind::FixedTu;
    double value = 0.0; // T_u itself, or T with T_u = T u^{-2/nu}

    static WindowRule fixed(double t_u) { return {Kind::FixedTu, t_u}; }
    static WindowRule scaled_t(double t) { return {Kind::ScaledT, t}; }
};

enum class VicinityMode { None, Log, Lambda };

struct VicinityRule {
    VicinityMode mode = VicinityMode::None;
    double lambda = 0.0; // only for Lambda mode

    static VicinityRule none() { return {VicinityMode::None, 0.0}; }
    static VicinityRule log_vicinity() { return {VicinityMode::Log, 0.0}; }
    static VicinityRule lambda_vicinity(double l) { return {VicinityMode::Lambda, l}; }
};

struct McParams {
    long replicates = 100000;
    std::uint64_t master_seed = 1;
    int workers = 1;
    double dt_override = 0.0;      // > 0 replaces the dt rule
    double dt_floor = 0.0;         // lower cap applied to the dt rule
    double domain_halfwidth = 0.0; // synthetic full-domain E half-width; 0 = base/2
    long max_grid = 1 << 16;       // guard on grid points per path
};

struct MCEstimate {
    double p_hat = 0.0;
    long hits = 0;
    long replicates = 0;
    double ci_lo = 0.0; // Wilson 95%
    double ci_hi = 0.0;
    double dt = 0.0;
    double extent_lo = 0.0; // simulated time range (including window extension)
    double extent_hi = 0.0;
    WindowSpec window;
    double window_time = 0.0;   // T_u
    double threshold_std = 0.0; // standardized threshold (n_hat for MIPR)
    double threshold_raw = 0.0; // threshold against Z itself
    std::optional<std::pair<double, double>> vicinity; // (delta_-, delta_+) actually used
    std::uint64_t master_seed = 0;
    std::string branch;
};

// One-sided vicinity half-widths around t*: log mode gives
// u^{-2/gamma_pm} ln^{2/gamma_pm} u, lambda mode gives Lambda u^{-2/gamma_pm}.
std::pair<double, double> build_vicinity(const LocalExpansion& exp, double u,
                                         const VicinityRule& rule);

MCEstimate estimate_ruin(const RuinSource& source, const Threshold& threshold,
                         const WindowRule& window_rule, const McParams& params,
                         const VicinityRule& vicinity = VicinityRule::none());

struct ComparisonRow {
    double u = 0.0; // threshold as given (N for MIPR sources)
    double p_mc = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double p_asym = 0.0;
    double ratio = 0.0;
    std::string branch;
    double seconds = 0.0;
};

// MC vs first-order asymptotics over a threshold grid, window scaled as
// T u^{-2/nu}.
std::vector<ComparisonRow> compare_table(const RuinSource& source, Threshold::Kind kind,
                                         std::vector<double> thresholds, double T,
                                         const std::optional<ConstantEstimate>& pickands_const,
                                         const std::optional<ConstantEstimate>& piterbarg_const,
                                         const McParams& params,
                                         const VicinityRule& vicinity = VicinityRule::none());

} // namespace parisian
