#include "parisian/risk_model.hpp"

#include <algorithm>
#include <cmath>

#include "parisian/errors.hpp"

namespace parisian {

namespace {

struct EffLine {
    double a; // alpha_i / sigma_i
    double m; // mu_i / sigma_i
    std::size_t index;
};

std::vector<EffLine> effective_lines(const RiskModel& model) {
    std::vector<EffLine> out;
    out.reserve(model.lines.size());
    for (std::size_t i = 0; i < model.lines.size(); ++i) {
        const auto& l = model.lines[i];
        out.push_back({l.alpha / l.sigma, l.mu / l.sigma, i});
    }
    return out;
}

std::size_t active_line(const std::vector<EffLine>& lines, double t) {
    std::size_t best = 0;
    double val = lines[0].a + lines[0].m * t;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const double v = lines[i].a + lines[i].m * t;
        if (v > val) {
            val = v;
            best = i;
        }
    }
    return best;
}

double g_of(const RiskModel& model, const EffLine& line, double t) {
    return model.hurst * (line.a + line.m * t) - t * line.m;
}

} // namespace

void RiskModel::validate() const {
    if (lines.empty()) throw Error(ErrorKind::Parameter, "model needs at least one line");
    for (const auto& l : lines)
        if (!(l.alpha > 0.0) || !(l.mu > 0.0) || !(l.sigma > 0.0))
            throw Error(ErrorKind::Parameter, "line parameters must be strictly positive");
    if (!(hurst > 0.0) || !(hurst < 1.0))
        throw Error(ErrorKind::Parameter, "hurst must lie in (0, 1)");
    if (!(horizon > 0.0)) throw Error(ErrorKind::Parameter, "horizon must be > 0");
}

double barrier(const RiskModel& model, double t) {
    model.validate();
    if (t < 0.0) throw Error(ErrorKind::Parameter, "barrier needs t >= 0");
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& l : model.lines) best = std::max(best, (l.alpha + l.mu * t) / l.sigma);
    return best;
}

double barrier_derivative(const RiskModel& model, double t, int side) {
    model.validate();
    const auto lines = effective_lines(model);
    const double eps = 1e-9 * std::max(1.0, std::abs(t));
    const double probe = side >= 0 ? t + eps : std::max(t - eps, 0.0);
    return lines[active_line(lines, probe)].m;
}

double sigma_Z(const RiskModel& model, double t) {
    if (!(t > 0.0)) throw Error(ErrorKind::Parameter, "sigma_Z needs t > 0");
    return std::pow(t, model.hurst) / barrier(model, t);
}

OptimalPoint find_tstar(const RiskModel& model) {
    model.validate();
    const auto lines = effective_lines(model);
    const double s_end = model.unbounded_horizon() ? std::numeric_limits<double>::infinity()
                                                   : model.horizon;

    // Breakpoints of the upper envelope: pairwise intersections where the
    // active line actually changes.
    std::vector<double> cand;
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (std::size_t j = i + 1; j < lines.size(); ++j) {
            const double dm = lines[i].m - lines[j].m;
            if (dm == 0.0) continue;
            const double t = (lines[j].a - lines[i].a) / dm;
            if (t > 0.0 && t < s_end) cand.push_back(t);
        }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end(),
                           [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)); }),
               cand.end());

    std::vector<double> brk;         // envelope kinks, increasing
    std::vector<std::size_t> active; // active line on each piece, size brk.size()+1
    {
        // probe each interval between candidate intersections at its midpoint
        active.push_back(active_line(lines, cand.empty() ? 1.0 : 0.5 * cand.front()));
        for (std::size_t k = 0; k < cand.size(); ++k) {
            const double next = (k + 1 < cand.size()) ? cand[k + 1] : 2.0 * cand[k] + 1.0;
            const std::size_t nxt = active_line(lines, 0.5 * (cand[k] + next));
            if (nxt != active.back()) {
                brk.push_back(cand[k]);
                active.push_back(nxt);
            }
        }
    }

    const double g_scale = model.hurst * barrier(model, std::max(1.0, brk.empty() ? 1.0 : brk.back()));
    const double g_tol = 1e-9 * g_scale;

    OptimalPoint opt;
    // Walk pieces left to right; G decreases within each piece and jumps down
    // at kinks, so the first sign change is the unique maximizer.
    double piece_lo = 0.0;
    for (std::size_t p = 0; p < active.size(); ++p) {
        const double piece_hi = (p < brk.size()) ? brk[p] : s_end;
        const EffLine& ln = lines[active[p]];
        const double g_lo = g_of(model, ln, piece_lo);
        const double g_hi = std::isinf(piece_hi)
                                ? -std::numeric_limits<double>::infinity()
                                : g_of(model, ln, piece_hi);

        if (g_lo < -g_tol && p == 0)
            throw Error(ErrorKind::Internal, "G(0+) must be positive for a positive-drift model");

        if (g_hi > g_tol) {
            piece_lo = piece_hi;
            continue; // still increasing; move on
        }

        if (std::abs(g_hi) <= g_tol && p < brk.size()) {
            // stationary exactly at the kink from the left
            const EffLine& rn = lines[active[p + 1]];
            const double g_right = g_of(model, rn, piece_hi);
            if (std::abs(g_right) <= g_tol)
                throw Error(ErrorKind::Degeneracy,
                            "stationary condition degenerate on both sides of a kink");
            opt.t_star = piece_hi;
            opt.kind = OptimalKind::Coincident;
            opt.active_left = lines[active[p]].index;
            opt.active_right = rn.index;
            break;
        }

        if (g_lo > g_tol) {
            // sign change inside this piece: stationary point, located by
            // bisection (G is linear here, bisection is unconditionally safe)
            double lo = piece_lo, hi = std::isinf(piece_hi) ? std::max(piece_lo * 2.0 + 1.0, 1.0)
                                                            : piece_hi;
            if (std::isinf(piece_hi))
                while (g_of(model, ln, hi) > 0.0) hi *= 2.0;
            for (int it = 0; it < 200 && (hi - lo) > 1e-12 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                (g_of(model, ln, mid) > 0.0 ? lo : hi) = mid;
            }
            opt.t_star = 0.5 * (lo + hi);
            opt.kind = OptimalKind::Stationary;
            opt.active_left = opt.active_right = ln.index;
            break;
        }

        // g_lo ~ 0 or negative at the piece start: the previous kink is the max
        if (p == 0) throw Error(ErrorKind::Internal, "no ascent at the origin");
        opt.t_star = piece_lo;
        opt.kind = (std::abs(g_lo) <= g_tol) ? OptimalKind::Coincident : OptimalKind::Kink;
        opt.active_left = lines[active[p - 1]].index;
        opt.active_right = ln.index;
        break;
    }

    if (opt.t_star <= 0.0)
        throw Error(ErrorKind::BoundaryCase, "maximizer not located strictly inside (0, S)");
    if (!model.unbounded_horizon() && opt.t_star >= model.horizon)
        throw Error(ErrorKind::BoundaryCase,
                    "sigma_Z maximized at or beyond the horizon; boundary case unsupported");

    // Reject ambiguous kinks where three or more lines meet the envelope.
    if (opt.kind != OptimalKind::Stationary) {
        const double d_at = barrier(model, opt.t_star);
        int on_envelope = 0;
        for (const auto& l : lines)
            if (std::abs(l.a + l.m * opt.t_star - d_at) <= 1e-9 * std::abs(d_at)) ++on_envelope;
        if (on_envelope > 2)
            throw Error(ErrorKind::Degeneracy, "more than two lines meet at the optimal kink");
    }

    opt.sigma_star = sigma_Z(model, opt.t_star);
    return opt;
}

LocalExpansion local_expansion(const RiskModel& model) {
    const OptimalPoint opt = find_tstar(model);
    const auto lines = effective_lines(model);

    const EffLine* left = nullptr;
    const EffLine* right = nullptr;
    for (const auto& l : lines) {
        if (l.index == opt.active_left) left = &l;
        if (l.index == opt.active_right) right = &l;
    }

    const double h = model.hurst;
    const double ts = opt.t_star;

    auto one_sided_ratio = [&](const EffLine& ln) {
        return h / ts - ln.m / (ln.a + ln.m * ts);
    };
    // Taylor coefficient of sigma/sigma* = 1 - A (t-t*)^2 at a stationary
    // point: A = -(sigma''/sigma)/2 = (H/t*^2 - m^2/(a+m t*)^2) / 2.
    auto second_order = [&](const EffLine& ln) {
        const double lm = ln.m / (ln.a + ln.m * ts);
        return 0.5 * (h / (ts * ts) - lm * lm);
    };

    const double r_minus = one_sided_ratio(*left);
    const double r_plus = one_sided_ratio(*right);
    const double tol = 1e-9 * (h / ts);

    LocalExpansion exp;
    exp.t_star = ts;
    exp.sigma_star = opt.sigma_star;
    exp.alpha = 2.0 * h;
    exp.D_corr = 1.0 / (2.0 * std::pow(ts, 2.0 * h));

    // Left of a maximum sigma_Z increases, so the oriented coefficient is
    // +r_minus; right of it decreases, so it is -r_plus.
    if (r_minus > tol) {
        exp.gamma_minus = 1.0;
        exp.A_minus = r_minus;
    } else if (r_minus >= -tol) {
        exp.gamma_minus = 2.0;
        exp.A_minus = second_order(*left);
        if (!(exp.A_minus > 0.0))
            throw Error(ErrorKind::Degeneracy, "second-order coefficient not positive (left)");
    } else {
        throw Error(ErrorKind::Internal, "sigma_Z decreasing on the left of its maximum");
    }

    if (r_plus < -tol) {
        exp.gamma_plus = 1.0;
        exp.A_plus = -r_plus;
    } else if (r_plus <= tol) {
        exp.gamma_plus = 2.0;
        exp.A_plus = second_order(*right);
        if (!(exp.A_plus > 0.0))
            throw Error(ErrorKind::Degeneracy, "second-order coefficient not positive (right)");
    } else {
        throw Error(ErrorKind::Internal, "sigma_Z increasing on the right of its maximum");
    }

    return exp;
}

double n_hat(const RiskModel& model, double big_n) {
    if (big_n < 0.0) throw Error(ErrorKind::Parameter, "N must be >= 0");
    const OptimalPoint opt = find_tstar(model);
    return std::sqrt(big_n) / opt.sigma_star;
}

} // namespace parisian
