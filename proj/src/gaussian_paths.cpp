#include "parisian/gaussian_paths.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "parisian/errors.hpp"
#include "parisian/fft.hpp"

namespace parisian {

namespace {

void check_hurst(double hurst) {
    if (!(hurst > 0.0) || !(hurst <= 1.0))
        throw Error(ErrorKind::Parameter, "hurst must lie in (0, 1]");
}

} // namespace

double cov_fgn(double hurst, long k) {
    check_hurst(hurst);
    if (k < 0) throw Error(ErrorKind::Parameter, "lag k must be >= 0");
    const double h2 = 2.0 * hurst;
    const double kd = static_cast<double>(k);
    if (k == 0) return 1.0;
    return 0.5 * (std::pow(kd + 1.0, h2) - 2.0 * std::pow(kd, h2) + std::pow(kd - 1.0, h2));
}

double cov_fbm(double hurst, double s, double t) {
    check_hurst(hurst);
    if (s < 0.0 || t < 0.0)
        throw Error(ErrorKind::Parameter, "fBm covariance needs s, t >= 0");
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) - std::pow(std::abs(t - s), h2));
}

FgnSampler::FgnSampler(double hurst, std::size_t n) : hurst_(hurst) {
    check_hurst(hurst);
    if (n == 0) throw Error(ErrorKind::Parameter, "fGn length must be >= 1");
    half_ = next_pow2(n);
    const std::size_t m = 2 * half_;

    std::vector<std::complex<double>> row(m);
    for (std::size_t j = 0; j <= half_; ++j)
        row[j] = cov_fgn(hurst, static_cast<long>(j));
    for (std::size_t j = 1; j < half_; ++j)
        row[m - j] = row[j];
    fft_pow2(row);

    double max_eig = 0.0;
    for (const auto& e : row) max_eig = std::max(max_eig, e.real());
    amp_.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        double eig = row[k].real();
        if (eig < 0.0) {
            if (eig < -1e-8 * max_eig)
                throw Error(ErrorKind::Internal,
                            "circulant embedding has a significantly negative eigenvalue");
            eig = 0.0;
        }
        amp_[k] = std::sqrt(eig / static_cast<double>(m));
    }
}

void FgnSampler::sample(Rng& rng, std::span<double> out) const {
    if (out.size() > half_)
        throw Error(ErrorKind::Dimension, "requested more fGn values than sampler capacity");
    const std::size_t m = amp_.size();
    const std::size_t half_m = m / 2;

    std::vector<std::complex<double>> a(m);
    a[0] = amp_[0] * rng.normal();
    a[half_m] = amp_[half_m] * rng.normal();
    const double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t k = 1; k < half_m; ++k) {
        const double re = rng.normal() * inv_sqrt2;
        const double im = rng.normal() * inv_sqrt2;
        a[k] = amp_[k] * std::complex<double>(re, im);
        a[m - k] = amp_[m - k] * std::complex<double>(re, -im);
    }
    fft_pow2(a);
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = a[j].real();
}

PathGrid sample_fbm(double hurst, std::size_t n, double dt, std::uint64_t seed) {
    if (!(dt > 0.0)) throw Error(ErrorKind::Parameter, "dt must be > 0");
    if (n == 0) throw Error(ErrorKind::Parameter, "need n >= 1");
    FgnSampler gen(hurst, n);
    Rng rng(seed);

    std::vector<double> fgn(n);
    gen.sample(rng, fgn);

    PathGrid path;
    path.hurst = hurst;
    path.origin = 0.0;
    path.dt = dt;
    path.values.resize(n + 1);
    path.values[0] = 0.0;
    const double scale = std::pow(dt, hurst);
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        acc += fgn[j];
        path.values[j + 1] = scale * acc;
    }
    return path;
}

std::vector<double> cholesky_lower(std::vector<double> m, std::size_t n, double rel_jitter) {
    if (m.size() != n * n)
        throw Error(ErrorKind::Dimension, "cholesky: matrix size mismatch");
    if (rel_jitter > 0.0) {
        double tr = 0.0;
        for (std::size_t i = 0; i < n; ++i) tr += m[i * n + i];
        const double eps = rel_jitter * tr / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) m[i * n + i] += eps;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double d = m[j * n + j];
        for (std::size_t k = 0; k < j; ++k) d -= m[j * n + k] * m[j * n + k];
        if (!(d > 0.0))
            throw Error(ErrorKind::Internal, "covariance matrix is not positive definite");
        const double ljj = std::sqrt(d);
        m[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m[i * n + j];
            for (std::size_t k = 0; k < j; ++k) s -= m[i * n + k] * m[j * n + k];
            m[i * n + j] = s / ljj;
        }
        for (std::size_t k = j + 1; k < n; ++k) m[j * n + k] = 0.0;
    }
    return m;
}

PathGrid sample_fbm_cholesky(double hurst, std::size_t n, double dt, std::uint64_t seed) {
    check_hurst(hurst);
    if (!(dt > 0.0)) throw Error(ErrorKind::Parameter, "dt must be > 0");
    if (n == 0 || n > 512)
        throw Error(ErrorKind::Parameter, "cholesky fBm oracle supports 1 <= n <= 512");

    std::vector<double> cov(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            cov[i * n + j] = cov_fbm(hurst, static_cast<double>(i + 1) * dt,
                                     static_cast<double>(j + 1) * dt);
    const std::vector<double> low = cholesky_lower(std::move(cov), n, 1e-13);

    Rng rng(seed);
    std::vector<double> z(n);
    for (auto& x : z) x = rng.normal();

    PathGrid path;
    path.hurst = hurst;
    path.origin = 0.0;
    path.dt = dt;
    path.values.assign(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = 0; k <= i; ++k) s += low[i * n + k] * z[k];
        path.values[i + 1] = s;
    }
    return path;
}

std::vector<double> sample_fbm_two_sided(const FgnSampler& gen, Rng& rng,
                                         std::size_t n_neg, std::size_t n_pos, double dt) {
    if (!(dt > 0.0)) throw Error(ErrorKind::Parameter, "dt must be > 0");
    const std::size_t steps = n_neg + n_pos;
    if (steps == 0 || steps > gen.capacity())
        throw Error(ErrorKind::Dimension, "two-sided grid does not fit sampler capacity");

    std::vector<double> fgn(steps);
    gen.sample(rng, fgn);

    // partial sums S_0..S_steps, then pin at the origin index
    std::vector<double> out(steps + 1);
    out[0] = 0.0;
    double acc = 0.0;
    for (std::size_t j = 0; j < steps; ++j) {
        acc += fgn[j];
        out[j + 1] = acc;
    }
    const double pin = out[n_neg];
    const double scale = std::pow(dt, gen.hurst());
    for (auto& v : out) v = scale * (v - pin);
    out[n_neg] = 0.0;
    return out;
}

} // namespace parisian
