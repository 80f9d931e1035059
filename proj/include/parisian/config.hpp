#pragma once

#include <optional>
#include <string>
#include <vector>

#include "parisian/mc_engine.hpp"

namespace parisian {

struct McConfig {
    long replicates = 100000;
    std::uint64_t seed = 1;
    double dt = 0.0;       // 0 = engine rule
    double dt_floor = 0.0;
    double domain_halfwidth = 0.0;
    int workers = 0;       // 0 = resolve from env / default 1
};

struct ConstantsConfig {
    enum class Mode { None, Fixed, Estimate };
    Mode mode = Mode::None;
    double value = 0.0;       // Fixed
    double lambda = 8.0;      // Estimate
    double grid_step = 1.0 / 128.0;
    long replicates = 10000;
    std::uint64_t seed = 7;
};

// One validated configuration document for exactly one subcommand.
struct RunConfig {
    RuinSource source{RiskModel{}};
    bool has_source = false;

    std::optional<double> u;
    std::optional<double> big_n;
    std::vector<double> u_list;
    std::vector<double> n_list;

    std::optional<double> T;   // threshold-scaled window: T_u = T u^{-2/nu}
    std::optional<double> t_u; // fixed window length

    McConfig mc;
    ConstantsConfig constants;

    std::string echo; // the raw document, for manifests
};

// Strict loader: unknown keys, duplicate keys, type and range violations are
// config errors naming the offending key; parse errors carry the line.
RunConfig load_config(const std::string& path, const std::string& command);

} // namespace parisian
