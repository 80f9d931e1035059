#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parisian/asymptotics.hpp"
#include "parisian/constants_lab.hpp"
#include "parisian/errors.hpp"
#include "parisian/gaussian_paths.hpp"
#include "parisian/mc_engine.hpp"
#include "parisian/parisian_functional.hpp"
#include "parisian/risk_model.hpp"

namespace py = pybind11;
using namespace parisian;

namespace {

RiskModel make_model(const std::vector<std::tuple<double, double, double>>& lines, double hurst,
                     double horizon) {
    RiskModel m;
    for (const auto& [a, mu, s] : lines) m.lines.push_back({a, mu, s});
    m.hurst = hurst;
    if (horizon > 0.0) m.horizon = horizon;
    m.validate();
    return m;
}

SyntheticProcessSpec make_synth(double hurst, double a_minus, double g_minus, double a_plus,
                                double g_plus, double base_time) {
    SyntheticProcessSpec s;
    s.hurst = hurst;
    s.A_minus = a_minus;
    s.gamma_minus = g_minus;
    s.A_plus = a_plus;
    s.gamma_plus = g_plus;
    s.base_time = base_time;
    s.validate();
    return s;
}

py::dict expansion_dict(const LocalExpansion& e) {
    py::dict d;
    d["A_minus"] = e.A_minus;
    d["gamma_minus"] = e.gamma_minus;
    d["A_plus"] = e.A_plus;
    d["gamma_plus"] = e.gamma_plus;
    d["alpha"] = e.alpha;
    d["D"] = e.D_corr;
    d["t_star"] = e.t_star;
    d["sigma_star"] = e.sigma_star;
    return d;
}

py::dict estimate_dict(const MCEstimate& est) {
    py::dict d;
    d["p_hat"] = est.p_hat;
    d["hits"] = est.hits;
    d["replicates"] = est.replicates;
    d["ci_lo"] = est.ci_lo;
    d["ci_hi"] = est.ci_hi;
    d["dt"] = est.dt;
    d["window_len"] = est.window.window_len;
    d["window_time"] = est.window_time;
    d["branch"] = est.branch;
    if (est.vicinity) d["vicinity"] = py::make_tuple(est.vicinity->first, est.vicinity->second);
    return d;
}

VicinityRule vicinity_from(const std::string& mode, double lam) {
    if (mode == "none") return VicinityRule::none();
    if (mode == "log") return VicinityRule::log_vicinity();
    if (mode == "lambda") return VicinityRule::lambda_vicinity(lam);
    throw Error(ErrorKind::Parameter, "vicinity mode must be none/log/lambda");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Parisian ruin asymptotics for Gaussian risk processes";

    py::register_exception<Error>(m, "ParisianError");

    m.def("cov_fgn", &cov_fgn, py::arg("hurst"), py::arg("k"));
    m.def("cov_fbm", &cov_fbm, py::arg("hurst"), py::arg("s"), py::arg("t"));

    m.def(
        "sample_fbm",
        [](double hurst, std::size_t n, double dt, std::uint64_t seed) {
            const PathGrid p = sample_fbm(hurst, n, dt, seed);
            py::dict d;
            d["hurst"] = p.hurst;
            d["origin"] = p.origin;
            d["dt"] = p.dt;
            d["values"] = p.values;
            return d;
        },
        py::arg("hurst"), py::arg("n"), py::arg("dt"), py::arg("seed"));

    m.def(
        "sliding_min",
        [](const std::vector<double>& v, long w) { return sliding_min(v, w); },
        py::arg("values"), py::arg("window_len"));

    m.def(
        "parisian_sup_inf",
        [](const std::vector<double>& v, long first, long last, long window_len) {
            PathGrid p;
            p.values = v;
            return parisian_sup_inf(p, {first, last}, WindowSpec{window_len, 0.0});
        },
        py::arg("values"), py::arg("first"), py::arg("last"), py::arg("window_len"));

    m.def("psi", &psi, py::arg("u"));
    m.def("log_psi", &log_psi, py::arg("u"));

    m.def(
        "analyze_model",
        [](const std::vector<std::tuple<double, double, double>>& lines, double hurst,
           double horizon) {
            const RiskModel model = make_model(lines, hurst, horizon);
            const OptimalPoint opt = find_tstar(model);
            const LocalExpansion exp = local_expansion(model);
            const CaseLabel label = classify(exp);
            py::dict d = expansion_dict(exp);
            d["kind"] = opt.kind == OptimalKind::Stationary ? "stationary"
                        : opt.kind == OptimalKind::Kink     ? "kink"
                                                            : "coincident";
            d["nu"] = label.nu;
            d["gamma"] = label.gamma;
            d["zeta"] = label.zeta;
            d["branch"] = case_name(label.tag);
            return d;
        },
        py::arg("lines"), py::arg("hurst"), py::arg("horizon") = 0.0);

    m.def(
        "talagrand_constant",
        [](double a_minus, double g_minus, double a_plus, double g_plus, double alpha,
           double T) {
            LocalExpansion e;
            e.A_minus = a_minus;
            e.gamma_minus = g_minus;
            e.A_plus = a_plus;
            e.gamma_plus = g_plus;
            e.alpha = alpha;
            e.D_corr = 0.5;
            e.sigma_star = 1.0;
            return talagrand_constant(e, T);
        },
        py::arg("A_minus"), py::arg("gamma_minus"), py::arg("A_plus"), py::arg("gamma_plus"),
        py::arg("alpha"), py::arg("T"));

    m.def(
        "estimate_constant",
        [](double alpha, double T, double lambda, double grid_step, long replicates,
           std::uint64_t seed, const std::string& convention, const std::string& normalization,
           int workers) {
            DriftedFieldSpec spec;
            spec.alpha = alpha;
            spec.T = T;
            spec.lambda = lambda;
            spec.grid_step = grid_step;
            spec.convention = convention == "symmetric" ? IntervalConvention::Symmetric
                                                        : IntervalConvention::Half;
            const Normalization norm =
                normalization == "raw" ? Normalization::Raw : Normalization::PerLength;
            const ConstantEstimate est = estimate_constant(spec, replicates, seed, norm, workers);
            py::dict d;
            d["value"] = est.value;
            d["stderr"] = est.stderr_est;
            d["replicates"] = est.replicates;
            d["control_mean"] = est.control_mean;
            return d;
        },
        py::arg("alpha"), py::arg("T"), py::arg("lambda_"), py::arg("grid_step"),
        py::arg("replicates"), py::arg("seed"), py::arg("convention") = "half",
        py::arg("normalization") = "per_length", py::arg("workers") = 1);

    m.def(
        "mc_ruin_synthetic",
        [](double hurst, double a_minus, double g_minus, double a_plus, double g_plus,
           double base_time, double u, double T, long replicates, std::uint64_t seed,
           const std::string& vicinity, double vicinity_lambda, int workers) {
            const SyntheticProcessSpec spec =
                make_synth(hurst, a_minus, g_minus, a_plus, g_plus, base_time);
            McParams params;
            params.replicates = replicates;
            params.master_seed = seed;
            params.workers = workers;
            const MCEstimate est =
                estimate_ruin(spec, Threshold::u(u), WindowRule::scaled_t(T), params,
                              vicinity_from(vicinity, vicinity_lambda));
            return estimate_dict(est);
        },
        py::arg("hurst"), py::arg("A_minus"), py::arg("gamma_minus"), py::arg("A_plus"),
        py::arg("gamma_plus"), py::arg("base_time"), py::arg("u"), py::arg("T"),
        py::arg("replicates"), py::arg("seed"), py::arg("vicinity") = "log",
        py::arg("vicinity_lambda") = 0.0, py::arg("workers") = 1);

    m.def(
        "mc_ruin_mipr",
        [](const std::vector<std::tuple<double, double, double>>& lines, double hurst,
           double horizon, double big_n, double T, long replicates, std::uint64_t seed,
           const std::string& vicinity, double vicinity_lambda, int workers) {
            const RiskModel model = make_model(lines, hurst, horizon);
            McParams params;
            params.replicates = replicates;
            params.master_seed = seed;
            params.workers = workers;
            const MCEstimate est =
                estimate_ruin(model, Threshold::big_n(big_n), WindowRule::scaled_t(T),
                              params, vicinity_from(vicinity, vicinity_lambda));
            return estimate_dict(est);
        },
        py::arg("lines"), py::arg("hurst"), py::arg("horizon"), py::arg("N"), py::arg("T"),
        py::arg("replicates"), py::arg("seed"), py::arg("vicinity") = "log",
        py::arg("vicinity_lambda") = 0.0, py::arg("workers") = 1);

    m.attr("__version__") = "0.1.0";
}
