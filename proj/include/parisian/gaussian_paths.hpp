#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "parisian/rng.hpp"

namespace parisian {

// A Gaussian path sampled on a uniform grid: values[j] lives at origin + j*dt.
// For an fBm sample with origin 0, values[0] == 0 exactly.
struct PathGrid {
    double hurst = 0.5;
    double origin = 0.0;
    double dt = 1.0;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    double time_at(std::size_t j) const { return origin + static_cast<double>(j) * dt; }
};

// Lag-k autocovariance of unit-step fractional Gaussian noise,
// (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.  H in (0,1]; H = 1 is the
// degenerate perfectly-correlated case needed for alpha = 2 fields.
double cov_fgn(double hurst, long k);

// fBm covariance (s^{2H} + t^{2H} - |t-s|^{2H}) / 2 for s,t >= 0.
double cov_fbm(double hurst, double s, double t);

// Exact stationary fGn sampler via circulant embedding of the covariance.
// The embedding size is the next power of two >= n, doubled; its eigenvalues
// are nonnegative for fGn, and tiny negative round-off (> -1e-8 relative) is
// clamped to zero. Immutable after construction; safe to share across workers.
class FgnSampler {
  public:
    FgnSampler(double hurst, std::size_t n);

    std::size_t capacity() const { return half_; }
    double hurst() const { return hurst_; }

    // Fills out[0..count) with one exact fGn draw. count <= capacity().
    void sample(Rng& rng, std::span<double> out) const;

  private:
    double hurst_;
    std::size_t half_;                 // m: usable length per draw
    std::vector<double> amp_;          // sqrt(lambda_k / M) scaling, M = 2m
};

// Exact fBm sample on {0, dt, ..., n*dt} (n+1 values, values[0] = 0),
// deterministic in `seed`.
PathGrid sample_fbm(double hurst, std::size_t n, double dt, std::uint64_t seed);

// Dense-Cholesky fBm sampler (n <= 512). Slower route kept as a
// cross-validation oracle for the circulant sampler.
PathGrid sample_fbm_cholesky(double hurst, std::size_t n, double dt, std::uint64_t seed);

// Two-sided fBm pinned at zero: returns B(j*dt) for j = -n_neg..n_pos as a
// vector indexed from 0 (index n_neg is the pinned origin, exactly 0).
std::vector<double> sample_fbm_two_sided(const FgnSampler& gen, Rng& rng,
                                         std::size_t n_neg, std::size_t n_pos, double dt);

// Lower-triangular Cholesky factor of a symmetric positive-definite matrix
// stored row-major; adds `rel_jitter`*mean(diag) to the diagonal first.
std::vector<double> cholesky_lower(std::vector<double> matrix, std::size_t n,
                                   double rel_jitter = 0.0);

} // namespace parisian
