#include "parisian/config.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "parisian/errors.hpp"
#include "parisian/report.hpp"

namespace parisian {

namespace {

using nlohmann::json;

json parse_strict(const std::string& text) {
    std::vector<std::set<std::string>> stack;
    json::parser_callback_t cb = [&](int /*depth*/, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::object_start) {
            stack.emplace_back();
        } else if (event == json::parse_event_t::object_end) {
            stack.pop_back();
        } else if (event == json::parse_event_t::key) {
            const auto key = parsed.get<std::string>();
            if (!stack.back().insert(key).second)
                throw Error(ErrorKind::Config, "duplicate key: " + key);
        }
        return true;
    };
    try {
        return json::parse(text, cb);
    } catch (const json::parse_error& e) {
        const std::size_t pos = std::min<std::size_t>(e.byte, text.size());
        const long line = 1 + std::count(text.begin(), text.begin() + static_cast<long>(pos), '\n');
        throw Error(ErrorKind::Config,
                    "parse error at line " + std::to_string(line) + ": " + e.what());
    }
}

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key))
            throw Error(ErrorKind::Config, "unknown key `" + key + "` in " + where);
}

double need_number(const json& obj, const std::string& key, const std::string& where) {
    if (!obj.contains(key))
        throw Error(ErrorKind::Config, "missing key `" + key + "` in " + where);
    if (!obj[key].is_number())
        throw Error(ErrorKind::Config, "key `" + key + "` in " + where + " must be a number");
    return obj[key].get<double>();
}

double opt_number(const json& obj, const std::string& key, double fallback,
                  const std::string& where) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number())
        throw Error(ErrorKind::Config, "key `" + key + "` in " + where + " must be a number");
    return obj[key].get<double>();
}

RiskModel parse_model(const json& j) {
    check_keys(j, {"lines", "hurst", "horizon"}, "model");
    RiskModel model;
    if (!j.contains("lines") || !j["lines"].is_array() || j["lines"].empty())
        throw Error(ErrorKind::Config, "model.lines must be a non-empty array");
    for (const auto& lj : j["lines"]) {
        check_keys(lj, {"alpha", "mu", "sigma"}, "model.lines[]");
        Line l;
        l.alpha = need_number(lj, "alpha", "model.lines[]");
        l.mu = need_number(lj, "mu", "model.lines[]");
        l.sigma = opt_number(lj, "sigma", 1.0, "model.lines[]");
        model.lines.push_back(l);
    }
    model.hurst = need_number(j, "hurst", "model");
    if (!(model.hurst > 0.0) || !(model.hurst < 1.0))
        throw Error(ErrorKind::Config, "range error: hurst must lie in (0, 1)");
    if (j.contains("horizon") && !j["horizon"].is_null())
        model.horizon = need_number(j, "horizon", "model");
    model.validate();
    return model;
}

SyntheticProcessSpec parse_synthetic(const json& j) {
    check_keys(j, {"hurst", "A_minus", "gamma_minus", "A_plus", "gamma_plus", "base_time"},
               "synthetic");
    SyntheticProcessSpec s;
    s.hurst = need_number(j, "hurst", "synthetic");
    if (!(s.hurst > 0.0) || !(s.hurst < 1.0))
        throw Error(ErrorKind::Config, "range error: hurst must lie in (0, 1)");
    s.A_minus = need_number(j, "A_minus", "synthetic");
    s.gamma_minus = need_number(j, "gamma_minus", "synthetic");
    s.A_plus = need_number(j, "A_plus", "synthetic");
    s.gamma_plus = need_number(j, "gamma_plus", "synthetic");
    s.base_time = opt_number(j, "base_time", 1.0, "synthetic");
    s.validate();
    return s;
}

std::vector<double> parse_list(const json& j, const std::string& key) {
    std::vector<double> out;
    if (!j[key].is_array())
        throw Error(ErrorKind::Config, key + " must be an array of numbers");
    for (const auto& v : j[key]) {
        if (!v.is_number()) throw Error(ErrorKind::Config, key + " must contain numbers only");
        out.push_back(v.get<double>());
    }
    return out;
}

} // namespace

RunConfig load_config(const std::string& path, const std::string& command) {
    const std::string text = read_file(path);
    const json doc = parse_strict(text);
    if (!doc.is_object()) throw Error(ErrorKind::Config, "config root must be an object");

    static const std::set<std::string> top_allowed = {
        "model", "synthetic", "threshold", "window", "u_list", "N_list", "mc", "constants"};
    check_keys(doc, top_allowed, "config");

    RunConfig cfg;
    cfg.echo = text;

    const bool has_model = doc.contains("model");
    const bool has_synth = doc.contains("synthetic");
    if (has_model && has_synth)
        throw Error(ErrorKind::Config, "config must name exactly one of model/synthetic");
    if (has_model) {
        cfg.source = parse_model(doc["model"]);
        cfg.has_source = true;
    } else if (has_synth) {
        cfg.source = parse_synthetic(doc["synthetic"]);
        cfg.has_source = true;
    }

    if (doc.contains("threshold")) {
        const auto& t = doc["threshold"];
        check_keys(t, {"u", "N"}, "threshold");
        if (t.contains("u") == t.contains("N"))
            throw Error(ErrorKind::Config, "threshold needs exactly one of u/N");
        if (t.contains("u")) cfg.u = need_number(t, "u", "threshold");
        else cfg.big_n = need_number(t, "N", "threshold");
    }
    if (doc.contains("window")) {
        const auto& w = doc["window"];
        check_keys(w, {"T", "T_u"}, "window");
        if (w.contains("T") == w.contains("T_u"))
            throw Error(ErrorKind::Config, "window needs exactly one of T/T_u");
        if (w.contains("T")) cfg.T = need_number(w, "T", "window");
        else cfg.t_u = need_number(w, "T_u", "window");
    }
    if (doc.contains("u_list")) cfg.u_list = parse_list(doc, "u_list");
    if (doc.contains("N_list")) cfg.n_list = parse_list(doc, "N_list");
    if (has_synth && (!cfg.n_list.empty() || cfg.big_n))
        throw Error(ErrorKind::Config, "synthetic sources take u thresholds, not N");

    if (doc.contains("mc")) {
        const auto& m = doc["mc"];
        check_keys(m, {"replicates", "seed", "dt", "dt_floor", "domain_halfwidth", "workers"},
                   "mc");
        cfg.mc.replicates = static_cast<long>(opt_number(m, "replicates", 1e5, "mc"));
        cfg.mc.seed = static_cast<std::uint64_t>(opt_number(m, "seed", 1, "mc"));
        cfg.mc.dt = opt_number(m, "dt", 0.0, "mc");
        cfg.mc.dt_floor = opt_number(m, "dt_floor", 0.0, "mc");
        cfg.mc.domain_halfwidth = opt_number(m, "domain_halfwidth", 0.0, "mc");
        cfg.mc.workers = static_cast<int>(opt_number(m, "workers", 0, "mc"));
        if (cfg.mc.replicates < 1)
            throw Error(ErrorKind::Config, "range error: mc.replicates must be >= 1");
    }

    if (doc.contains("constants")) {
        const auto& c = doc["constants"];
        check_keys(c, {"mode", "value", "lambda", "grid_step", "replicates", "seed"},
                   "constants");
        if (!c.contains("mode") || !c["mode"].is_string())
            throw Error(ErrorKind::Config, "constants.mode must be \"fixed\" or \"estimate\"");
        const std::string mode = c["mode"].get<std::string>();
        if (mode == "fixed") {
            cfg.constants.mode = ConstantsConfig::Mode::Fixed;
            cfg.constants.value = need_number(c, "value", "constants");
            if (!(cfg.constants.value > 0.0))
                throw Error(ErrorKind::Config, "range error: constants.value must be > 0");
        } else if (mode == "estimate") {
            cfg.constants.mode = ConstantsConfig::Mode::Estimate;
            cfg.constants.lambda = opt_number(c, "lambda", 8.0, "constants");
            cfg.constants.grid_step = opt_number(c, "grid_step", 1.0 / 128.0, "constants");
            cfg.constants.replicates =
                static_cast<long>(opt_number(c, "replicates", 10000, "constants"));
            cfg.constants.seed = static_cast<std::uint64_t>(opt_number(c, "seed", 7, "constants"));
        } else {
            throw Error(ErrorKind::Config, "constants.mode must be \"fixed\" or \"estimate\"");
        }
    }

    // per-command requirements
    auto require = [&](bool ok, const std::string& what) {
        if (!ok) throw Error(ErrorKind::Config, command + " config requires " + what);
    };
    if (command == "mipr-analyze") {
        require(has_model, "a `model` section");
    } else if (command == "asymptotic") {
        require(cfg.has_source, "a `model` or `synthetic` section");
        require(cfg.T.has_value(), "window.T (threshold-scaled window)");
    } else if (command == "mc-ruin") {
        require(cfg.has_source, "a `model` or `synthetic` section");
        require(cfg.u.has_value() || cfg.big_n.has_value(), "a threshold");
        require(cfg.T.has_value() || cfg.t_u.has_value(), "a window");
    } else if (command == "compare") {
        // an empty threshold list is legal and yields a header-only table
        require(cfg.has_source, "a `model` or `synthetic` section");
        require(cfg.T.has_value(), "window.T");
    }
    return cfg;
}

} // namespace parisian
