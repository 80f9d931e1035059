#include "parisian/parisian_functional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "parisian/errors.hpp"

namespace parisian {

WindowSpec WindowSpec::from_time(double window_time, double dt) {
    if (window_time < 0.0) throw Error(ErrorKind::Parameter, "window time must be >= 0");
    if (!(dt > 0.0)) throw Error(ErrorKind::Parameter, "dt must be > 0");
    const double ratio = window_time / dt;
    WindowSpec w;
    w.window_len = std::llround(ratio);
    w.rounding_slack = std::abs(ratio - static_cast<double>(w.window_len));
    return w;
}

std::vector<double> sliding_min(std::span<const double> values, long w) {
    if (w < 0) throw Error(ErrorKind::Parameter, "window length must be >= 0");
    const long n = static_cast<long>(values.size());
    if (w + 1 > n)
        throw Error(ErrorKind::Dimension, "window longer than the value sequence");

    std::vector<double> out(static_cast<std::size_t>(n - w));
    std::vector<long> deque(static_cast<std::size_t>(n));
    long head = 0, tail = 0; // indices into deque; [head, tail)
    for (long i = 0; i < n; ++i) {
        while (tail > head && values[static_cast<std::size_t>(deque[tail - 1])] >= values[static_cast<std::size_t>(i)])
            --tail;
        deque[tail++] = i;
        const long j = i - w; // window [j, i] complete
        if (j >= 0) {
            if (deque[head] < j) ++head;
            out[static_cast<std::size_t>(j)] = values[static_cast<std::size_t>(deque[head])];
        }
    }
    return out;
}

double sup_inf_kernel(std::span<const double> values, long first, long last, long w,
                      std::vector<long>& scratch) {
    scratch.clear();
    if (scratch.capacity() < static_cast<std::size_t>(w + 1))
        scratch.reserve(static_cast<std::size_t>(w + 1));

    double best = -std::numeric_limits<double>::infinity();
    long head = 0;
    for (long i = first; i <= last + w; ++i) {
        const double v = values[static_cast<std::size_t>(i)];
        while (static_cast<long>(scratch.size()) > head &&
               values[static_cast<std::size_t>(scratch.back())] >= v)
            scratch.pop_back();
        scratch.push_back(i);
        const long j = i - w;
        if (j >= first) {
            if (scratch[static_cast<std::size_t>(head)] < j) ++head;
            const double m = values[static_cast<std::size_t>(scratch[static_cast<std::size_t>(head)])];
            if (m > best) best = m;
        }
    }
    return best;
}

namespace {

void check_range(std::size_t path_len, IndexRange e, long w) {
    if (w < 0) throw Error(ErrorKind::Parameter, "window length must be >= 0");
    if (e.first < 0 || e.last < e.first)
        throw Error(ErrorKind::Dimension, "bad index range");
    if (static_cast<std::size_t>(e.last + w) >= path_len)
        throw Error(ErrorKind::Dimension,
                    "path does not cover the outer range extended by the window");
}

} // namespace

double parisian_sup_inf(const PathGrid& path, IndexRange e, const WindowSpec& window) {
    check_range(path.values.size(), e, window.window_len);
    std::vector<long> scratch;
    return sup_inf_kernel(path.values, e.first, e.last, window.window_len, scratch);
}

bool parisian_event(const PathGrid& path, IndexRange e, const WindowSpec& window, double u) {
    return parisian_sup_inf(path, e, window) > u;
}

double parisian_multi(const std::vector<std::vector<double>>& rows, IndexRange e,
                      const WindowSpec& window) {
    if (rows.empty()) throw Error(ErrorKind::Dimension, "need at least one component");
    const std::size_t n = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != n) throw Error(ErrorKind::Dimension, "ragged component rows");
    check_range(n, e, window.window_len);

    // min over components first; min over s and i commute
    std::vector<double> combined(n);
    for (std::size_t j = 0; j < n; ++j) {
        double m = rows[0][j];
        for (std::size_t i = 1; i < rows.size(); ++i) m = std::min(m, rows[i][j]);
        combined[j] = m;
    }
    std::vector<long> scratch;
    return sup_inf_kernel(combined, e.first, e.last, window.window_len, scratch);
}

} // namespace parisian
