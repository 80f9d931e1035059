#pragma once

#include <cstdint>
#include <optional>

#include "parisian/gaussian_paths.hpp"

namespace parisian {

// Two-sided power drift h(x) = A_- |x|^{g-} for x <= 0, A_+ x^{g+} for x >= 0,
// applied to t+s.
struct DriftSpec {
    double A_minus = 0.0;
    double gamma_minus = 1.0;
    double A_plus = 0.0;
    double gamma_plus = 1.0;

    double eval(double x) const;
};

enum class IntervalConvention { Symmetric, Half };
enum class Normalization { PerLength, Raw };

// Field W(x) = sqrt(2) B_{alpha/2}(x) - |x|^alpha - h(x) on a uniform grid
// covering [-lambda, lambda+T] (symmetric) or [0, lambda+T] (half),
// pinned so W(0) = 0 exactly.
struct DriftedFieldSpec {
    double alpha = 1.0;          // in (0, 2]
    double T = 0.0;              // Parisian window length
    double lambda = 1.0;         // outer half-width
    double grid_step = 1.0 / 128.0;
    std::optional<DriftSpec> drift;
    IntervalConvention convention = IntervalConvention::Half;

    void validate() const;
    long steps_neg() const;   // grid points left of 0
    long steps_outer() const; // index of the outer interval's right end
    long steps_total() const; // index of lambda + T
    long window_len() const;  // T / grid_step
};

// Monte Carlo estimate of a generalized Pickands/Piterbarg constant.
// value for PerLength is (E exp(sup-inf) - 1) / outer-length, targeting
// lim_lambda E exp(sup-inf)/lambda; Raw is E exp(sup-inf) itself.
// The mean is estimated self-normalized against the exponential-martingale
// control (grid average of exp(W + h), exact mean 1), which keeps the
// estimator usable where the plain sample mean cannot see the tail mass.
struct ConstantEstimate {
    double value = 0.0;
    double stderr_est = 0.0;
    long replicates = 0;
    DriftedFieldSpec spec;
    Normalization normalization = Normalization::PerLength;
    double control_mean = 1.0;   // sample mean of the control, diagnostics
    std::uint64_t master_seed = 0;
};

PathGrid sample_drifted_field(const DriftedFieldSpec& spec, std::uint64_t seed);

ConstantEstimate estimate_constant(const DriftedFieldSpec& spec, long replicates,
                                   std::uint64_t master_seed,
                                   Normalization normalization = Normalization::PerLength,
                                   int workers = 1);

} // namespace parisian
