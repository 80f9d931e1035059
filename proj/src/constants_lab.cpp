#include "parisian/constants_lab.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "parisian/errors.hpp"
#include "parisian/parisian_functional.hpp"

namespace parisian {

double DriftSpec::eval(double x) const {
    if (x >= 0.0) return A_plus * std::pow(x, gamma_plus);
    return A_minus * std::pow(-x, gamma_minus);
}

namespace {

long exact_steps(double length, double step, const char* what) {
    const double ratio = length / step;
    const long n = std::lround(ratio);
    if (std::abs(ratio - static_cast<double>(n)) > 1e-9 * std::max(1.0, std::abs(ratio)))
        throw Error(ErrorKind::Dimension,
                    std::string("grid_step does not divide ") + what);
    return n;
}

} // namespace

void DriftedFieldSpec::validate() const {
    if (!(alpha > 0.0) || !(alpha <= 2.0))
        throw Error(ErrorKind::Parameter, "alpha must lie in (0, 2]");
    if (T < 0.0) throw Error(ErrorKind::Parameter, "T must be >= 0");
    if (!(lambda > 0.0)) throw Error(ErrorKind::Parameter, "lambda must be > 0");
    if (!(grid_step > 0.0)) throw Error(ErrorKind::Parameter, "grid_step must be > 0");
    const long n_lam = exact_steps(lambda, grid_step, "lambda");
    const long n_win = exact_steps(T, grid_step, "T");
    const long factor = convention == IntervalConvention::Symmetric ? 2 : 1;
    if (factor * n_lam + n_win > (1L << 22))
        throw Error(ErrorKind::Dimension, "field grid exceeds 2^22 points; coarsen grid_step");
    if (drift) {
        if (!(drift->A_minus >= 0.0) || !(drift->A_plus >= 0.0) ||
            !(drift->gamma_minus > 0.0) || !(drift->gamma_plus > 0.0))
            throw Error(ErrorKind::Parameter, "drift needs A >= 0 and gamma > 0");
    }
}

long DriftedFieldSpec::steps_neg() const {
    return convention == IntervalConvention::Symmetric ? exact_steps(lambda, grid_step, "lambda")
                                                       : 0;
}

long DriftedFieldSpec::steps_outer() const {
    const long n_lam = exact_steps(lambda, grid_step, "lambda");
    return steps_neg() + n_lam;
}

long DriftedFieldSpec::window_len() const { return exact_steps(T, grid_step, "T"); }

long DriftedFieldSpec::steps_total() const { return steps_outer() + window_len(); }

namespace {

// One replicate's field values; reusable buffers live in the caller.
void fill_field(const DriftedFieldSpec& spec, const FgnSampler& gen, Rng& rng,
                std::vector<double>& bm_buf, std::vector<double>& out) {
    const long n_neg = spec.steps_neg();
    const long n_total = spec.steps_total();
    const double dt = spec.grid_step;
    const double sqrt2 = 1.4142135623730950488;

    bm_buf = sample_fbm_two_sided(gen, rng, static_cast<std::size_t>(n_neg),
                                  static_cast<std::size_t>(n_total - n_neg), dt);
    out.resize(static_cast<std::size_t>(n_total + 1));
    for (long j = 0; j <= n_total; ++j) {
        const double x = static_cast<double>(j - n_neg) * dt;
        double w = sqrt2 * bm_buf[static_cast<std::size_t>(j)] - std::pow(std::abs(x), spec.alpha);
        if (spec.drift) w -= spec.drift->eval(x);
        out[static_cast<std::size_t>(j)] = w;
    }
}

struct BlockSums {
    double y = 0.0;   // exp(sup-inf)
    double c = 0.0;   // control: grid mean of exp(W + h)
    double yy = 0.0;
    double cc = 0.0;
    double yc = 0.0;
};

} // namespace

PathGrid sample_drifted_field(const DriftedFieldSpec& spec, std::uint64_t seed) {
    spec.validate();
    const long n_neg = spec.steps_neg();
    FgnSampler gen(spec.alpha / 2.0, static_cast<std::size_t>(spec.steps_total()));
    Rng rng(seed);

    PathGrid path;
    path.hurst = spec.alpha / 2.0;
    path.origin = -static_cast<double>(n_neg) * spec.grid_step;
    path.dt = spec.grid_step;
    std::vector<double> bm;
    fill_field(spec, gen, rng, bm, path.values);
    return path;
}

ConstantEstimate estimate_constant(const DriftedFieldSpec& spec, long replicates,
                                   std::uint64_t master_seed, Normalization normalization,
                                   int workers) {
    spec.validate();
    if (replicates < 100)
        throw Error(ErrorKind::Parameter, "need at least 100 replicates");
    if (workers < 1) workers = 1;

    const long n_neg = spec.steps_neg();
    const long n_outer = spec.steps_outer();
    const long w = spec.window_len();
    const long n_total = spec.steps_total();
    const FgnSampler gen(spec.alpha / 2.0, static_cast<std::size_t>(n_total));
    const double dt = spec.grid_step;

    // Fixed-size blocks accumulated into indexed slots make the reduction
    // independent of the worker count.
    const long block = 1024;
    const long n_blocks = (replicates + block - 1) / block;
    std::vector<BlockSums> sums(static_cast<std::size_t>(n_blocks));

    std::atomic<long> next_block{0};
    auto worker_fn = [&]() {
        std::vector<double> bm, field;
        std::vector<long> scratch;
        for (;;) {
            const long b = next_block.fetch_add(1);
            if (b >= n_blocks) return;
            const long r_lo = b * block;
            const long r_hi = std::min(replicates, r_lo + block);
            BlockSums acc;
            for (long r = r_lo; r < r_hi; ++r) {
                Rng rng(derive_seed(master_seed, static_cast<std::uint64_t>(r)));
                fill_field(spec, gen, rng, bm, field);
                const double sup_inf = sup_inf_kernel(field, 0, n_outer, w, scratch);
                const double y = std::exp(sup_inf);

                // control: exp(W + h) = exp(sqrt2 B - |x|^alpha), mean 1 at
                // every grid point of the outer interval
                double csum = 0.0;
                for (long j = 0; j <= n_outer; ++j) {
                    const double x = static_cast<double>(j - n_neg) * dt;
                    const double drift_back = spec.drift ? spec.drift->eval(x) : 0.0;
                    csum += std::exp(field[static_cast<std::size_t>(j)] + drift_back);
                }
                const double c = csum / static_cast<double>(n_outer + 1);

                acc.y += y;
                acc.c += c;
                acc.yy += y * y;
                acc.cc += c * c;
                acc.yc += y * c;
            }
            sums[static_cast<std::size_t>(b)] = acc;
        }
    };

    if (workers == 1) {
        worker_fn();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int t = 0; t < workers; ++t) pool.emplace_back(worker_fn);
        for (auto& th : pool) th.join();
    }

    double sy = 0.0, sc = 0.0, syy = 0.0, scc = 0.0, syc = 0.0;
    for (const auto& s : sums) {
        sy += s.y;
        sc += s.c;
        syy += s.yy;
        scc += s.cc;
        syc += s.yc;
    }
    const double n = static_cast<double>(replicates);
    const double ybar = sy / n;
    const double cbar = sc / n;

    const double outer_len =
        (spec.convention == IntervalConvention::Symmetric ? 2.0 : 1.0) * spec.lambda;

    ConstantEstimate est;
    est.spec = spec;
    est.normalization = normalization;
    est.replicates = replicates;
    est.master_seed = master_seed;
    est.control_mean = cbar;
    if (normalization == Normalization::PerLength) {
        // Self-normalized against the martingale control: the un-sampleable
        // tail mass of E exp(sup) cancels pathwise between the two means.
        const double theta = ybar / cbar;
        const double vyy = syy / n - ybar * ybar;
        const double vcc = scc / n - cbar * cbar;
        const double vyc = syc / n - ybar * cbar;
        const double var_resid =
            std::max(0.0, vyy - 2.0 * theta * vyc + theta * theta * vcc);
        const double se = std::sqrt(var_resid / n) / cbar;
        est.value = (theta - 1.0) / outer_len;
        est.stderr_est = se / outer_len;
    } else {
        // Raw mode (drift-localized Piterbarg functionals): the plain mean is
        // adequate and the long-interval control would only add noise.
        const double vyy = std::max(0.0, syy / n - ybar * ybar);
        est.value = ybar;
        est.stderr_est = std::sqrt(vyy / n);
    }
    return est;
}

} // namespace parisian
