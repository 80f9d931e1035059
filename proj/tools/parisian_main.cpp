#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "parisian/asymptotics.hpp"
#include "parisian/config.hpp"
#include "parisian/constants_lab.hpp"
#include "parisian/errors.hpp"
#include "parisian/gaussian_paths.hpp"
#include "parisian/mc_engine.hpp"
#include "parisian/parisian_functional.hpp"
#include "parisian/report.hpp"
#include "parisian/risk_model.hpp"

namespace {

using namespace parisian;
using nlohmann::json;

int resolve_workers(int flag_value, int config_value) {
    if (flag_value > 0) return flag_value;
    if (config_value > 0) return config_value;
    if (const char* env = std::getenv("PARISIAN_WORKERS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

// Deferred output sink: nothing touches the file system until the whole run
// succeeded, so failures leave no partial outputs behind.
class OutputSink {
  public:
    void add(const std::string& path, const std::string& content) {
        files_.emplace_back(path, content);
    }

    void commit(const std::string& command, const json& config_echo, json grid,
                std::uint64_t seed, long replicates, double wall_seconds) {
        for (const auto& [path, content] : files_) write_file(path, content);
        if (files_.empty()) return;
        json manifest;
        manifest["command"] = command;
        manifest["config"] = config_echo;
        manifest["master_seed"] = seed;
        manifest["replicates"] = replicates;
        manifest["grid"] = std::move(grid);
        manifest["wall_time_s"] = wall_seconds;
        manifest["artifact_version"] = kArtifactVersion;
        json outs = json::array();
        for (const auto& [path, content] : files_)
            outs.push_back({{"path", path}, {"sha256", sha256_hex(content)}});
        manifest["outputs"] = outs;
        write_file(files_.front().first + ".manifest.json", manifest.dump(2) + "\n");
    }

  private:
    std::vector<std::pair<std::string, std::string>> files_;
};

void emit(const Table& table, const std::string& out_path, const std::string& format,
          OutputSink& sink) {
    const std::string body = format == "json" ? to_json_rows(table) : to_csv(table);
    if (out_path.empty())
        std::cout << body;
    else
        sink.add(out_path, body);
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t pos = text.find(',', start);
        const std::string tok = text.substr(start, pos == std::string::npos ? pos : pos - start);
        if (!tok.empty()) out.push_back(std::stod(tok));
        if (pos == std::string::npos) break;
        start = pos + 1;
    }
    return out;
}

// Snap (lambda, grid_step) so the step divides both lambda and T exactly.
DriftedFieldSpec snap_field_spec(double alpha, double T, double lambda_req, double step_req,
                                 IntervalConvention convention,
                                 std::optional<DriftSpec> drift) {
    DriftedFieldSpec spec;
    spec.alpha = alpha;
    spec.convention = convention;
    spec.drift = std::move(drift);
    double step = step_req;
    if (T > 0.0) {
        const long k = std::max(1L, std::lround(T / step_req));
        step = T / static_cast<double>(k);
    }
    spec.T = T;
    spec.grid_step = step;
    spec.lambda = step * std::max(1L, std::lround(lambda_req / step));
    spec.validate();
    return spec;
}

// Builds the constant estimate a branch needs, per the config's constants
// section (fixed value or a fresh estimate).
std::optional<ConstantEstimate> resolve_constant(const LocalExpansion& exp, double T,
                                                 const ConstantsConfig& cc, int workers,
                                                 CaseTag tag) {
    if (tag != CaseTag::Pickands && tag != CaseTag::Piterbarg) return std::nullopt;
    if (cc.mode == ConstantsConfig::Mode::None)
        throw Error(ErrorKind::Dependency,
                    "this branch needs a `constants` section (mode fixed or estimate)");
    const double d_root = std::pow(exp.D_corr, 1.0 / exp.alpha);
    const double t_scaled = d_root * T;

    std::optional<DriftSpec> drift;
    IntervalConvention conv = IntervalConvention::Half;
    Normalization norm = Normalization::PerLength;
    if (tag == CaseTag::Piterbarg) {
        DriftSpec d;
        d.A_minus = exp.A_minus * std::pow(exp.D_corr, -exp.gamma_minus / exp.alpha);
        d.gamma_minus = exp.gamma_minus;
        d.A_plus = exp.A_plus * std::pow(exp.D_corr, -exp.gamma_plus / exp.alpha);
        d.gamma_plus = exp.gamma_plus;
        drift = d;
        conv = IntervalConvention::Symmetric;
        norm = Normalization::Raw;
    }

    if (cc.mode == ConstantsConfig::Mode::Fixed) {
        ConstantEstimate est;
        est.value = cc.value;
        est.stderr_est = 0.0;
        est.replicates = 0; // externally supplied value
        est.spec = snap_field_spec(exp.alpha, t_scaled, cc.lambda, cc.grid_step, conv, drift);
        est.normalization = norm;
        return est;
    }
    const DriftedFieldSpec spec =
        snap_field_spec(exp.alpha, t_scaled, cc.lambda, cc.grid_step, conv, drift);
    return estimate_constant(spec, cc.replicates, cc.seed, norm, workers);
}

LocalExpansion source_expansion(const RuinSource& source) {
    if (std::holds_alternative<RiskModel>(source))
        return local_expansion(std::get<RiskModel>(source));
    return std::get<SyntheticProcessSpec>(source).expansion();
}

json config_echo_json(const RunConfig& cfg) {
    return cfg.echo.empty() ? json(nullptr) : json::parse(cfg.echo);
}

// ---------------------------------------------------------------------------
// subcommand handlers

int run_fbm_sample(double hurst, long n, double dt, std::uint64_t seed,
                   const std::string& out_path) {
    const auto t0 = std::chrono::steady_clock::now();
    const PathGrid path = sample_fbm(hurst, static_cast<std::size_t>(n), dt, seed);
    json doc;
    doc["hurst"] = path.hurst;
    doc["origin"] = path.origin;
    doc["dt"] = path.dt;
    doc["values"] = path.values;

    OutputSink sink;
    sink.add(out_path, doc.dump() + "\n");
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.commit("fbm-sample",
                json{{"hurst", hurst}, {"n", n}, {"dt", dt}, {"seed", seed}},
                json{{"n", n}, {"dt", dt}}, seed, 1, secs);
    return 0;
}

int run_parisian_eval(const std::string& in_path, double window_time, double threshold,
                      const std::string& out_path, const std::string& format) {
    const json doc = json::parse(read_file(in_path));
    PathGrid path;
    path.hurst = doc.at("hurst").get<double>();
    path.origin = doc.at("origin").get<double>();
    path.dt = doc.at("dt").get<double>();
    path.values = doc.at("values").get<std::vector<double>>();
    if (path.values.empty()) throw Error(ErrorKind::Dimension, "empty path");

    const WindowSpec window = WindowSpec::from_time(window_time, path.dt);
    const long last = static_cast<long>(path.values.size()) - 1 - window.window_len;
    if (last < 0) throw Error(ErrorKind::Dimension, "window longer than the path");
    const double value = parisian_sup_inf(path, {0, last}, window);

    Table t;
    t.header = {"sup_inf", "event", "threshold", "window_len", "rounding_slack", "n", "dt"};
    t.rows.push_back({format_double(value), value > threshold ? "1" : "0",
                      format_double(threshold), std::to_string(window.window_len),
                      format_double(window.rounding_slack),
                      std::to_string(path.values.size() - 1), format_double(path.dt)});
    OutputSink sink;
    emit(t, out_path, format, sink);
    sink.commit("parisian-eval",
                json{{"in", in_path}, {"window", window_time}, {"threshold", threshold}},
                json{{"window_len", window.window_len}, {"dt", path.dt}}, 0, 1, 0.0);
    return 0;
}

int run_mipr_analyze(const std::string& config_path, const std::string& out_path,
                     const std::string& format) {
    const RunConfig cfg = load_config(config_path, "mipr-analyze");
    const auto& model = std::get<RiskModel>(cfg.source);
    const OptimalPoint opt = find_tstar(model);
    const LocalExpansion exp = local_expansion(model);
    const CaseLabel label = classify(exp);

    const char* kind = opt.kind == OptimalKind::Stationary ? "stationary"
                       : opt.kind == OptimalKind::Kink     ? "kink"
                                                           : "coincident";
    Table t;
    t.header = {"t_star", "kind", "sigma_star", "A_minus", "gamma_minus", "A_plus",
                "gamma_plus", "alpha", "D", "nu", "gamma", "zeta_minus", "zeta_plus",
                "zeta", "branch"};
    t.rows.push_back({format_double(opt.t_star), kind, format_double(opt.sigma_star),
                      format_double(exp.A_minus), format_double(exp.gamma_minus),
                      format_double(exp.A_plus), format_double(exp.gamma_plus),
                      format_double(exp.alpha), format_double(exp.D_corr),
                      format_double(label.nu), format_double(label.gamma),
                      format_double(label.zeta_minus), format_double(label.zeta_plus),
                      format_double(label.zeta), case_name(label.tag)});
    OutputSink sink;
    emit(t, out_path, format, sink);
    sink.commit("mipr-analyze", config_echo_json(cfg), json::object(), 0, 0, 0.0);
    return 0;
}

int run_asymptotic(const std::string& config_path, const std::string& u_grid,
                   const std::string& out_path, const std::string& format, int workers_flag) {
    const RunConfig cfg = load_config(config_path, "asymptotic");
    const LocalExpansion exp = source_expansion(cfg.source);
    const CaseLabel label = classify(exp);
    const int workers = resolve_workers(workers_flag, cfg.mc.workers);
    const auto constant =
        label.tag == CaseTag::Pickands || label.tag == CaseTag::Piterbarg
            ? resolve_constant(exp, *cfg.T, cfg.constants, workers, label.tag)
            : std::nullopt;
    const bool is_model = std::holds_alternative<RiskModel>(cfg.source);

    std::vector<double> grid = parse_grid(u_grid);
    if (grid.empty()) grid = is_model ? cfg.n_list : cfg.u_list;

    Table t;
    t.header = {"threshold", "u_std", "branch", "prefactor", "power", "value", "log_value"};
    for (double g : grid) {
        AsymptoticValue v;
        double u_std = g;
        if (is_model) {
            const auto& model = std::get<RiskModel>(cfg.source);
            v = mipr_tail_asymptotic(model, g, *cfg.T,
                                label.tag == CaseTag::Pickands ? constant : std::nullopt,
                                label.tag == CaseTag::Piterbarg ? constant : std::nullopt);
            u_std = n_hat(model, g);
        } else {
            v = tail_asymptotic(exp, *cfg.T, g,
                               label.tag == CaseTag::Pickands ? constant : std::nullopt,
                               label.tag == CaseTag::Piterbarg ? constant : std::nullopt);
        }
        t.rows.push_back({format_double(g), format_double(u_std), case_name(v.branch),
                          format_double(v.prefactor), format_double(v.power),
                          format_double(v.value), format_double(v.log_value)});
    }
    OutputSink sink;
    emit(t, out_path, format, sink);
    sink.commit("asymptotic", config_echo_json(cfg), json::object(),
                cfg.constants.mode == ConstantsConfig::Mode::Estimate ? cfg.constants.seed : 0,
                0, 0.0);
    return 0;
}

int run_constant(double alpha, double T, double lambda, double grid_step, long reps,
                 std::uint64_t seed, const std::string& convention,
                 const std::string& normalization, const std::string& drift_csv,
                 int workers_flag, const std::string& out_path, const std::string& format) {
    const auto t0 = std::chrono::steady_clock::now();
    const IntervalConvention conv = convention == "symmetric" ? IntervalConvention::Symmetric
                                                              : IntervalConvention::Half;
    const Normalization norm =
        normalization == "raw" ? Normalization::Raw : Normalization::PerLength;
    std::optional<DriftSpec> drift;
    if (!drift_csv.empty()) {
        const auto vals = parse_grid(drift_csv);
        if (vals.size() != 4)
            throw Error(ErrorKind::Parameter, "--drift needs A-,gamma-,A+,gamma+");
        drift = DriftSpec{vals[0], vals[1], vals[2], vals[3]};
    }
    const int workers = resolve_workers(workers_flag, 0);

    // convergence ladder; the user picks the operating point, nothing is
    // extrapolated automatically
    Table t;
    t.header = {"alpha", "T", "lambda", "grid_step", "convention", "normalization",
                "replicates", "value", "stderr", "control_mean", "seed"};
    for (double lam_scale : {0.25, 0.5, 1.0}) {
        for (double step_scale : {1.0, 0.5}) {
            const DriftedFieldSpec spec = snap_field_spec(
                alpha, T, lambda * lam_scale, grid_step * step_scale, conv, drift);
            const ConstantEstimate est = estimate_constant(spec, reps, seed, norm, workers);
            t.rows.push_back(
                {format_double(alpha), format_double(T), format_double(est.spec.lambda),
                 format_double(est.spec.grid_step),
                 conv == IntervalConvention::Symmetric ? "symmetric" : "half",
                 norm == Normalization::Raw ? "raw" : "per_length", std::to_string(reps),
                 format_double(est.value), format_double(est.stderr_est),
                 format_double(est.control_mean), std::to_string(seed)});
        }
    }
    OutputSink sink;
    emit(t, out_path, format, sink);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.commit("constant",
                json{{"alpha", alpha}, {"T", T}, {"lambda", lambda}, {"grid_step", grid_step},
                     {"reps", reps}, {"seed", seed}, {"convention", convention}},
                json{{"ladder", "lambda x {0.25,0.5,1}, step x {1,0.5}"}}, seed, reps, secs);
    return 0;
}

VicinityRule parse_vicinity(const std::string& text) {
    if (text.empty() || text == "none") return VicinityRule::none();
    if (text == "log") return VicinityRule::log_vicinity();
    if (text.rfind("lambda:", 0) == 0)
        return VicinityRule::lambda_vicinity(std::stod(text.substr(7)));
    throw Error(ErrorKind::Parameter, "--vicinity must be log, none, or lambda:<value>");
}

int run_mc_ruin(const std::string& config_path, long reps_flag, long seed_flag,
                const std::string& vicinity_text, int workers_flag,
                const std::string& out_path, const std::string& format) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = load_config(config_path, "mc-ruin");

    McParams params;
    params.replicates = reps_flag > 0 ? reps_flag : cfg.mc.replicates;
    params.master_seed = seed_flag >= 0 ? static_cast<std::uint64_t>(seed_flag) : cfg.mc.seed;
    params.workers = resolve_workers(workers_flag, cfg.mc.workers);
    params.dt_override = cfg.mc.dt;
    params.dt_floor = cfg.mc.dt_floor;
    params.domain_halfwidth = cfg.mc.domain_halfwidth;

    const Threshold thr = cfg.u ? Threshold::u(*cfg.u) : Threshold::big_n(*cfg.big_n);
    const WindowRule rule =
        cfg.T ? WindowRule::scaled_t(*cfg.T) : WindowRule::fixed(*cfg.t_u);
    const VicinityRule vic = parse_vicinity(vicinity_text);

    const MCEstimate est = estimate_ruin(cfg.source, thr, rule, params, vic);

    Table t;
    t.header = {"threshold", "u_std", "T_u", "dt", "window_len", "rounding_slack",
                "extent_lo", "extent_hi", "delta_minus", "delta_plus", "replicates",
                "hits", "p_hat", "ci_lo", "ci_hi", "branch", "seed"};
    t.rows.push_back(
        {format_double(thr.value), format_double(est.threshold_std),
         format_double(est.window_time), format_double(est.dt),
         std::to_string(est.window.window_len), format_double(est.window.rounding_slack),
         format_double(est.extent_lo), format_double(est.extent_hi),
         est.vicinity ? format_double(est.vicinity->first) : "",
         est.vicinity ? format_double(est.vicinity->second) : "",
         std::to_string(est.replicates), std::to_string(est.hits), format_double(est.p_hat),
         format_double(est.ci_lo), format_double(est.ci_hi), est.branch,
         std::to_string(est.master_seed)});
    OutputSink sink;
    emit(t, out_path, format, sink);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.commit("mc-ruin", config_echo_json(cfg),
                json{{"dt", est.dt},
                     {"window_len", est.window.window_len},
                     {"extent", {est.extent_lo, est.extent_hi}}},
                params.master_seed, params.replicates, secs);
    return 0;
}

int run_compare(const std::string& config_path, int workers_flag, const std::string& out_path,
                const std::string& format, const std::string& vicinity_text) {
    const auto t0 = std::chrono::steady_clock::now();
    const RunConfig cfg = load_config(config_path, "compare");

    McParams params;
    params.replicates = cfg.mc.replicates;
    params.master_seed = cfg.mc.seed;
    params.workers = resolve_workers(workers_flag, cfg.mc.workers);
    params.dt_override = cfg.mc.dt;
    params.dt_floor = cfg.mc.dt_floor;
    params.domain_halfwidth = cfg.mc.domain_halfwidth;

    const bool is_model = std::holds_alternative<RiskModel>(cfg.source);
    const Threshold::Kind kind = is_model && !cfg.n_list.empty() ? Threshold::Kind::BigN
                                                                 : Threshold::Kind::U;
    const std::vector<double> list =
        kind == Threshold::Kind::BigN ? cfg.n_list : cfg.u_list;

    const LocalExpansion exp = source_expansion(cfg.source);
    const CaseLabel label = classify(exp);
    std::optional<ConstantEstimate> constant;
    if ((label.tag == CaseTag::Pickands || label.tag == CaseTag::Piterbarg) && !list.empty())
        constant = resolve_constant(exp, *cfg.T, cfg.constants, params.workers, label.tag);

    const auto rows = compare_table(
        cfg.source, kind, list, *cfg.T,
        label.tag == CaseTag::Pickands ? constant : std::nullopt,
        label.tag == CaseTag::Piterbarg ? constant : std::nullopt, params,
        parse_vicinity(vicinity_text));

    Table t;
    t.header = {"u", "p_mc", "ci_lo", "ci_hi", "p_asym", "ratio", "branch", "seconds"};
    for (const auto& r : rows)
        t.rows.push_back({format_double(r.u), format_double(r.p_mc), format_double(r.ci_lo),
                          format_double(r.ci_hi), format_double(r.p_asym),
                          format_double(r.ratio), r.branch, format_double(r.seconds)});
    OutputSink sink;
    emit(t, out_path, format, sink);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    sink.commit("compare", config_echo_json(cfg), json::object(), params.master_seed,
                params.replicates, secs);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parisian ruin asymptotics and Monte Carlo verification"};
    app.require_subcommand(1);

    // fbm-sample
    double fs_hurst = 0.5, fs_dt = 1.0 / 1024.0;
    long fs_n = 1024;
    std::uint64_t fs_seed = 1;
    std::string fs_out = "fbm.json";
    auto* fbm = app.add_subcommand("fbm-sample", "Sample fractional Brownian motion");
    fbm->add_option("--hurst", fs_hurst)->required();
    fbm->add_option("--n", fs_n)->required();
    fbm->add_option("--dt", fs_dt)->required();
    fbm->add_option("--seed", fs_seed)->required();
    fbm->add_option("--out", fs_out)->required();

    // parisian-eval
    std::string pe_in, pe_out, pe_format = "csv";
    double pe_window = 0.0, pe_threshold = 0.0;
    auto* pev = app.add_subcommand("parisian-eval", "Evaluate the sup-inf functional on a path");
    pev->add_option("--in", pe_in)->required();
    pev->add_option("--window", pe_window)->required();
    pev->add_option("--threshold", pe_threshold)->required();
    pev->add_option("--out", pe_out);
    pev->add_option("--format", pe_format)->check(CLI::IsMember({"csv", "json"}));

    // mipr-analyze
    std::string ma_config, ma_out, ma_format = "csv";
    auto* man = app.add_subcommand("mipr-analyze", "Variance geometry and branch of a model");
    man->add_option("--config", ma_config)->required();
    man->add_option("--out", ma_out);
    man->add_option("--format", ma_format)->check(CLI::IsMember({"csv", "json"}));

    // asymptotic
    std::string as_config, as_grid, as_out, as_format = "csv";
    int as_workers = 0;
    auto* asy = app.add_subcommand("asymptotic", "First-order approximations over a grid");
    asy->add_option("--config", as_config)->required();
    asy->add_option("--u-grid", as_grid);
    asy->add_option("--out", as_out);
    asy->add_option("--format", as_format)->check(CLI::IsMember({"csv", "json"}));
    asy->add_option("--workers", as_workers);

    // constant
    double c_alpha = 1.0, c_T = 0.0, c_lambda = 8.0, c_step = 1.0 / 128.0;
    long c_reps = 10000;
    std::uint64_t c_seed = 7;
    std::string c_conv = "half", c_norm = "per-length", c_drift, c_out, c_format = "csv";
    int c_workers = 0;
    auto* cst = app.add_subcommand("constant", "Monte Carlo constants with convergence ladder");
    cst->add_option("--alpha", c_alpha)->required();
    cst->add_option("--T", c_T)->required();
    cst->add_option("--lambda", c_lambda)->required();
    cst->add_option("--grid-step", c_step)->required();
    cst->add_option("--reps", c_reps)->required();
    cst->add_option("--seed", c_seed)->required();
    cst->add_option("--convention", c_conv)->check(CLI::IsMember({"half", "symmetric"}));
    cst->add_option("--normalization", c_norm)->check(CLI::IsMember({"per-length", "raw"}));
    cst->add_option("--drift", c_drift, "A-,gamma-,A+,gamma+ applied to t+s");
    cst->add_option("--workers", c_workers);
    cst->add_option("--out", c_out);
    cst->add_option("--format", c_format)->check(CLI::IsMember({"csv", "json"}));

    // mc-ruin
    std::string mr_config, mr_vicinity = "none", mr_out, mr_format = "csv";
    long mr_reps = 0, mr_seed = -1;
    int mr_workers = 0;
    auto* mcr = app.add_subcommand("mc-ruin", "Monte Carlo Parisian ruin probability");
    mcr->add_option("--config", mr_config)->required();
    mcr->add_option("--reps", mr_reps);
    mcr->add_option("--seed", mr_seed);
    mcr->add_option("--vicinity", mr_vicinity, "log, none, or lambda:<value>");
    mcr->add_option("--workers", mr_workers);
    mcr->add_option("--out", mr_out);
    mcr->add_option("--format", mr_format)->check(CLI::IsMember({"csv", "json"}));

    // compare
    std::string cp_config, cp_out, cp_format = "csv", cp_vicinity = "none";
    int cp_workers = 0;
    auto* cmp = app.add_subcommand("compare", "MC vs asymptotics comparison table");
    cmp->add_option("--config", cp_config)->required();
    cmp->add_option("--workers", cp_workers);
    cmp->add_option("--vicinity", cp_vicinity);
    cmp->add_option("--out", cp_out);
    cmp->add_option("--format", cp_format)->check(CLI::IsMember({"csv", "json"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (fbm->parsed()) return run_fbm_sample(fs_hurst, fs_n, fs_dt, fs_seed, fs_out);
        if (pev->parsed())
            return run_parisian_eval(pe_in, pe_window, pe_threshold, pe_out, pe_format);
        if (man->parsed()) return run_mipr_analyze(ma_config, ma_out, ma_format);
        if (asy->parsed())
            return run_asymptotic(as_config, as_grid, as_out, as_format, as_workers);
        if (cst->parsed())
            return run_constant(c_alpha, c_T, c_lambda, c_step, c_reps, c_seed, c_conv, c_norm,
                                c_drift, c_workers, c_out, c_format);
        if (mcr->parsed())
            return run_mc_ruin(mr_config, mr_reps, mr_seed, mr_vicinity, mr_workers, mr_out,
                               mr_format);
        if (cmp->parsed())
            return run_compare(cp_config, cp_workers, cp_out, cp_format, cp_vicinity);
    } catch (const Error& e) {
        nlohmann::json err{{"error", {{"kind", e.kind_name()}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    } catch (const std::exception& e) {
        nlohmann::json err{{"error", {{"kind", "internal"}, {"message", e.what()}}}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
    return 0;
}
