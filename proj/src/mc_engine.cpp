#include "parisian/mc_engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <thread>

#include "parisian/errors.hpp"

namespace parisian {

void SyntheticProcessSpec::validate() const {
    if (!(hurst > 0.0) || !(hurst < 1.0))
        throw Error(ErrorKind::Parameter, "hurst must lie in (0, 1)");
    if (!(A_minus > 0.0) || !(A_plus > 0.0) || !(gamma_minus > 0.0) || !(gamma_plus > 0.0))
        throw Error(ErrorKind::Parameter, "A_pm and gamma_pm must be strictly positive");
    if (!(base_time > 0.0)) throw Error(ErrorKind::Parameter, "base_time must be > 0");
}

LocalExpansion SyntheticProcessSpec::expansion() const {
    validate();
    LocalExpansion exp;
    exp.A_minus = A_minus;
    exp.gamma_minus = gamma_minus;
    exp.A_plus = A_plus;
    exp.gamma_plus = gamma_plus;
    exp.alpha = 2.0 * hurst;
    exp.D_corr = 1.0 / (2.0 * std::pow(base_time, 2.0 * hurst));
    exp.t_star = 0.0;
    exp.sigma_star = 1.0;
    return exp;
}

double SyntheticProcessSpec::sigma(double t) const {
    const double pen = t >= 0.0 ? A_plus * std::pow(t, gamma_plus)
                                : A_minus * std::pow(-t, gamma_minus);
    return 1.0 / (1.0 + pen);
}

double SyntheticProcessSpec::cov(double t1, double t2) const {
    const double x1 = base_time + t1;
    const double x2 = base_time + t2;
    if (!(x1 > 0.0) || !(x2 > 0.0))
        throw Error(ErrorKind::Parameter, "synthetic process needs t > -base_time");
    const double h = hurst;
    const double corr = cov_fbm(h, x1, x2) / (std::pow(x1, h) * std::pow(x2, h));
    return sigma(t1) * sigma(t2) * corr;
}

std::pair<double, double> build_vicinity(const LocalExpansion& exp, double u,
                                         const VicinityRule& rule) {
    if (rule.mode == VicinityMode::None)
        throw Error(ErrorKind::Usage, "build_vicinity called without a vicinity mode");
    if (!(u > 2.718281828459045235))
        throw Error(ErrorKind::Parameter, "vicinity construction needs u > e");
    if (rule.mode == VicinityMode::Lambda && !(rule.lambda > 0.0))
        throw Error(ErrorKind::Parameter, "lambda vicinity needs Lambda > 0");

    auto width = [&](double gamma) {
        const double scale = std::pow(u, -2.0 / gamma);
        if (rule.mode == VicinityMode::Log) return scale * std::pow(std::log(u), 2.0 / gamma);
        return rule.lambda * scale;
    };
    return {width(exp.gamma_minus), width(exp.gamma_plus)};
}

namespace {

constexpr long kBlock = 1024;
constexpr long kCholeskyGuard = 4096;

double wilson_lo(double p, double n) {
    const double z = 1.959963984540054;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return std::max(0.0, (center - half) / denom);
}

double wilson_hi(double p, double n) {
    const double z = 1.959963984540054;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = p + z2 / (2.0 * n);
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return std::min(1.0, (center + half) / denom);
}

struct ResolvedSource {
    const RiskModel* model = nullptr;           // set for MIPR
    const SyntheticProcessSpec* synth = nullptr; // set for synthetic
    LocalExpansion exp;
    double u_std = 0.0;
    double u_raw = 0.0;
};

ResolvedSource resolve(const RuinSource& source, const Threshold& threshold) {
    ResolvedSource r;
    if (std::holds_alternative<RiskModel>(source)) {
        r.model = &std::get<RiskModel>(source);
        r.model->validate();
        r.exp = local_expansion(*r.model);
        if (threshold.kind == Threshold::Kind::BigN) {
            if (!(threshold.value > 0.0))
                throw Error(ErrorKind::Parameter, "N must be > 0");
            r.u_raw = std::sqrt(threshold.value);
            r.u_std = r.u_raw / r.exp.sigma_star;
        } else {
            r.u_std = threshold.value;
            r.u_raw = threshold.value * r.exp.sigma_star;
        }
    } else {
        r.synth = &std::get<SyntheticProcessSpec>(source);
        r.synth->validate();
        r.exp = r.synth->expansion();
        if (threshold.kind == Threshold::Kind::BigN)
            throw Error(ErrorKind::Usage, "synthetic sources take a u threshold, not N");
        r.u_std = r.u_raw = threshold.value;
    }
    return r;
}

// Runs `body(replicate_index) -> bool` over all replicates in fixed blocks;
// the integer hit reduction is identical for every worker count.
long run_blocks(long replicates, int workers, const std::function<long(long, long)>& block_fn) {
    const long n_blocks = (replicates + kBlock - 1) / kBlock;
    std::vector<long> hits(static_cast<std::size_t>(n_blocks), 0);
    std::atomic<long> next{0};
    auto worker = [&]() {
        for (;;) {
            const long b = next.fetch_add(1);
            if (b >= n_blocks) return;
            const long lo = b * kBlock;
            const long hi = std::min(replicates, lo + kBlock);
            hits[static_cast<std::size_t>(b)] = block_fn(lo, hi);
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    long total = 0;
    for (long h : hits) total += h;
    return total;
}

} // namespace

MCEstimate estimate_ruin(const RuinSource& source, const Threshold& threshold,
                         const WindowRule& window_rule, const McParams& params,
                         const VicinityRule& vicinity) {
    if (params.replicates < 1) throw Error(ErrorKind::Parameter, "need replicates >= 1");
    const ResolvedSource src = resolve(source, threshold);
    const CaseLabel label = classify(src.exp);

    // window length in time
    double t_u = 0.0;
    if (window_rule.kind == WindowRule::Kind::FixedTu) {
        if (window_rule.value < 0.0) throw Error(ErrorKind::Parameter, "T_u must be >= 0");
        t_u = window_rule.value;
    } else {
        if (window_rule.value < 0.0) throw Error(ErrorKind::Parameter, "T must be >= 0");
        if (!(src.u_std > 0.0))
            throw Error(ErrorKind::Parameter, "a scaled window needs a positive threshold");
        t_u = window_rule.value * std::pow(src.u_std, -2.0 / label.nu);
    }

    // dt rule: resolve both the window and the Pickands scale
    const double q = src.u_std > 1.0 ? std::pow(src.u_std, -2.0 / label.nu) : 1.0;
    double dt = params.dt_override;
    if (!(dt > 0.0)) {
        dt = (t_u > 0.0 ? std::min(t_u, q) : q) / 8.0;
        if (params.dt_floor > 0.0) dt = std::max(dt, params.dt_floor);
    }
    if (t_u > 0.0 && t_u < 2.0 * dt)
        throw Error(ErrorKind::Dimension, "grid does not resolve the Parisian window");

    const WindowSpec window = WindowSpec::from_time(t_u, dt);
    const long w = window.window_len;

    MCEstimate est;
    est.replicates = params.replicates;
    est.dt = dt;
    est.window = window;
    est.window_time = t_u;
    est.threshold_std = src.u_std;
    est.threshold_raw = src.u_raw;
    est.master_seed = params.master_seed;
    est.branch = case_name(label.tag);

    long hits = 0;
    if (vicinity.mode != VicinityMode::None) {
        const auto [d_minus, d_plus] = build_vicinity(src.exp, src.u_std, vicinity);
        const double center = src.exp.t_star;

        long j_lo = -static_cast<long>(std::ceil(d_minus / dt));
        long j_hi = static_cast<long>(std::ceil(d_plus / dt));
        if (src.model) {
            // keep the grid strictly inside (0, S]
            const long min_j = static_cast<long>(std::ceil((dt - center) / dt));
            j_lo = std::max(j_lo, min_j);
            if (!src.model->unbounded_horizon()) {
                const long max_j =
                    static_cast<long>(std::floor((src.model->horizon - center) / dt));
                j_hi = std::min(j_hi, max_j);
            }
        } else {
            const double base = src.synth->base_time;
            const long min_j = static_cast<long>(std::ceil((dt - base) / dt));
            j_lo = std::max(j_lo, min_j);
        }
        if (j_hi < j_lo) throw Error(ErrorKind::Dimension, "empty vicinity grid");

        const long n_pts = j_hi - j_lo + w + 1;
        if (n_pts > kCholeskyGuard)
            throw Error(ErrorKind::Dimension,
                        "vicinity grid too fine for the dense sampler; raise dt_floor");

        std::vector<double> times(static_cast<std::size_t>(n_pts));
        for (long j = 0; j < n_pts; ++j)
            times[static_cast<std::size_t>(j)] = center + static_cast<double>(j_lo + j) * dt;

        std::vector<double> cov(static_cast<std::size_t>(n_pts * n_pts));
        for (long i = 0; i < n_pts; ++i)
            for (long j = 0; j <= i; ++j) {
                double c;
                if (src.model) {
                    const double ti = times[static_cast<std::size_t>(i)];
                    const double tj = times[static_cast<std::size_t>(j)];
                    c = cov_fbm(src.model->hurst, ti, tj) /
                        (barrier(*src.model, ti) * barrier(*src.model, tj));
                } else {
                    c = src.synth->cov(times[static_cast<std::size_t>(i)],
                                       times[static_cast<std::size_t>(j)]);
                }
                cov[static_cast<std::size_t>(i * n_pts + j)] = c;
                cov[static_cast<std::size_t>(j * n_pts + i)] = c;
            }
        const std::vector<double> low =
            cholesky_lower(std::move(cov), static_cast<std::size_t>(n_pts), 1e-12);

        const long e_last = j_hi - j_lo;
        const double u_raw = src.u_raw;
        hits = run_blocks(params.replicates, params.workers, [&](long lo, long hi) {
            std::vector<double> z(static_cast<std::size_t>(n_pts));
            std::vector<double> path(static_cast<std::size_t>(n_pts));
            std::vector<long> scratch;
            long h = 0;
            for (long r = lo; r < hi; ++r) {
                Rng rng(derive_seed(params.master_seed, static_cast<std::uint64_t>(r)));
                for (auto& x : z) x = rng.normal();
                for (long i = 0; i < n_pts; ++i) {
                    double s = 0.0;
                    const double* li = &low[static_cast<std::size_t>(i * n_pts)];
                    for (long k = 0; k <= i; ++k) s += li[k] * z[static_cast<std::size_t>(k)];
                    path[static_cast<std::size_t>(i)] = s;
                }
                if (sup_inf_kernel(path, 0, e_last, w, scratch) > u_raw) ++h;
            }
            return h;
        });

        est.vicinity = std::make_pair(-static_cast<double>(j_lo) * dt,
                                      static_cast<double>(j_hi) * dt);
        est.extent_lo = times.front();
        est.extent_hi = times.back();
    } else if (src.model) {
        if (src.model->unbounded_horizon())
            throw Error(ErrorKind::Dimension,
                        "full-domain simulation needs a finite horizon; use a vicinity");
        const long n_e = static_cast<long>(std::floor(src.model->horizon / dt));
        const long n_steps = n_e + w;
        if (n_steps + 1 > params.max_grid)
            throw Error(ErrorKind::Dimension, "full-domain grid exceeds max_grid");
        const FgnSampler gen(src.model->hurst, static_cast<std::size_t>(n_steps));

        std::vector<double> inv_d(static_cast<std::size_t>(n_steps + 1));
        for (long j = 0; j <= n_steps; ++j)
            inv_d[static_cast<std::size_t>(j)] =
                1.0 / barrier(*src.model, static_cast<double>(j) * dt);
        const double scale = std::pow(dt, src.model->hurst);
        const double u_raw = src.u_raw;

        hits = run_blocks(params.replicates, params.workers, [&](long lo, long hi) {
            std::vector<double> fgn(static_cast<std::size_t>(n_steps));
            std::vector<double> path(static_cast<std::size_t>(n_steps + 1));
            std::vector<long> scratch;
            long h = 0;
            for (long r = lo; r < hi; ++r) {
                Rng rng(derive_seed(params.master_seed, static_cast<std::uint64_t>(r)));
                gen.sample(rng, fgn);
                path[0] = 0.0;
                double acc = 0.0;
                for (long j = 0; j < n_steps; ++j) {
                    acc += fgn[static_cast<std::size_t>(j)];
                    path[static_cast<std::size_t>(j + 1)] =
                        scale * acc * inv_d[static_cast<std::size_t>(j + 1)];
                }
                if (sup_inf_kernel(path, 0, n_e, w, scratch) > u_raw) ++h;
            }
            return h;
        });
        est.extent_lo = 0.0;
        est.extent_hi = static_cast<double>(n_steps) * dt;
    } else {
        // synthetic full domain on a grid anchored so that base_time + t = j*dt
        const double base = src.synth->base_time;
        const double h_dom = params.domain_halfwidth > 0.0 ? params.domain_halfwidth
                                                           : 0.5 * base;
        if (!(h_dom < base))
            throw Error(ErrorKind::Parameter, "domain_halfwidth must be < base_time");
        const long jx_lo = static_cast<long>(std::ceil((base - h_dom) / dt));
        const long jx_hi = static_cast<long>(std::floor((base + h_dom) / dt));
        const long n_steps = jx_hi + w;
        if (jx_lo < 1 || jx_hi < jx_lo)
            throw Error(ErrorKind::Dimension, "empty synthetic domain grid");
        if (n_steps + 1 > params.max_grid)
            throw Error(ErrorKind::Dimension, "full-domain grid exceeds max_grid");
        const FgnSampler gen(src.synth->hurst, static_cast<std::size_t>(n_steps));

        const long n_pts = n_steps - jx_lo + 1;
        std::vector<double> weight(static_cast<std::size_t>(n_pts));
        for (long j = 0; j < n_pts; ++j) {
            const double x = static_cast<double>(jx_lo + j) * dt;
            weight[static_cast<std::size_t>(j)] =
                src.synth->sigma(x - base) / std::pow(x, src.synth->hurst);
        }
        const double scale = std::pow(dt, src.synth->hurst);
        const long e_last = jx_hi - jx_lo;
        const double u_raw = src.u_raw;

        hits = run_blocks(params.replicates, params.workers, [&](long lo, long hi) {
            std::vector<double> fgn(static_cast<std::size_t>(n_steps));
            std::vector<double> path(static_cast<std::size_t>(n_pts));
            std::vector<long> scratch;
            long h = 0;
            for (long r = lo; r < hi; ++r) {
                Rng rng(derive_seed(params.master_seed, static_cast<std::uint64_t>(r)));
                gen.sample(rng, fgn);
                double acc = 0.0;
                for (long j = 1; j <= n_steps; ++j) {
                    acc += fgn[static_cast<std::size_t>(j - 1)];
                    if (j >= jx_lo)
                        path[static_cast<std::size_t>(j - jx_lo)] =
                            scale * acc * weight[static_cast<std::size_t>(j - jx_lo)];
                }
                if (sup_inf_kernel(path, 0, e_last, w, scratch) > u_raw) ++h;
            }
            return h;
        });
        est.extent_lo = static_cast<double>(jx_lo) * dt - base;
        est.extent_hi = static_cast<double>(n_steps) * dt - base;
    }

    est.hits = hits;
    est.p_hat = static_cast<double>(hits) / static_cast<double>(params.replicates);
    const double n = static_cast<double>(params.replicates);
    est.ci_lo = wilson_lo(est.p_hat, n);
    est.ci_hi = wilson_hi(est.p_hat, n);
    return est;
}

std::vector<ComparisonRow> compare_table(const RuinSource& source, Threshold::Kind kind,
                                         std::vector<double> thresholds, double T,
                                         const std::optional<ConstantEstimate>& pickands_const,
                                         const std::optional<ConstantEstimate>& piterbarg_const,
                                         const McParams& params, const VicinityRule& vicinity) {
    std::sort(thresholds.begin(), thresholds.end());
    std::vector<ComparisonRow> rows;
    rows.reserve(thresholds.size());
    for (double tv : thresholds) {
        const auto t0 = std::chrono::steady_clock::now();
        const Threshold thr{kind, tv};
        const MCEstimate mc = estimate_ruin(source, thr, WindowRule::scaled_t(T), params,
                                            vicinity);
        AsymptoticValue asym;
        if (std::holds_alternative<RiskModel>(source)) {
            const auto& model = std::get<RiskModel>(source);
            const double big_n = kind == Threshold::Kind::BigN
                                     ? tv
                                     : mc.threshold_raw * mc.threshold_raw;
            asym = mipr_tail_asymptotic(model, big_n, T, pickands_const, piterbarg_const);
        } else {
            const auto& synth = std::get<SyntheticProcessSpec>(source);
            asym = tail_asymptotic(synth.expansion(), T, tv, pickands_const, piterbarg_const);
        }
        ComparisonRow row;
        row.u = tv;
        row.p_mc = mc.p_hat;
        row.ci_lo = mc.ci_lo;
        row.ci_hi = mc.ci_hi;
        row.p_asym = asym.value;
        row.ratio = mc.hits > 0 ? std::exp(std::log(mc.p_hat) - asym.log_value) : 0.0;
        row.branch = mc.branch;
        row.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace parisian
