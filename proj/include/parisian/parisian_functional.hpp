#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "parisian/gaussian_paths.hpp"

namespace parisian {

// Parisian window in grid steps: window_len = round(T_u / dt). The rounding
// slack is recorded so reports can surface the discretization bias.
struct WindowSpec {
    long window_len = 0;
    double rounding_slack = 0.0;

    static WindowSpec from_time(double window_time, double dt);
};

struct IndexRange {
    long first = 0;
    long last = 0; // inclusive
};

// m[j] = min(values[j..j+w]) for j = 0..len-1-w, via a monotonic deque, O(n).
std::vector<double> sliding_min(std::span<const double> values, long w);

// Core kernel: max over j in [first,last] of min(values[j..j+w]).
// Caller guarantees last + w < values.size(). No allocation beyond `scratch`.
double sup_inf_kernel(std::span<const double> values, long first, long last, long w,
                      std::vector<long>& scratch);

// sup_{t in E} inf_{s in [0,T]} f(t+s) restricted to the grid. The path must
// cover E extended by the window; a short path is a dimension error, never a
// silent truncation.
double parisian_sup_inf(const PathGrid& path, IndexRange e_range, const WindowSpec& window);

// Strict exceedance event {sup-inf > u}.
bool parisian_event(const PathGrid& path, IndexRange e_range, const WindowSpec& window,
                    double u);

// Simultaneous multivariate functional: max over j of min over the window of
// the componentwise minimum (all components beyond the barrier throughout one
// window). Rows share the grid.
double parisian_multi(const std::vector<std::vector<double>>& rows, IndexRange e_range,
                      const WindowSpec& window);

} // namespace parisian
