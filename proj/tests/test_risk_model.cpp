#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "parisian/errors.hpp"
#include "parisian/rng.hpp"
#include "parisian/risk_model.hpp"

using namespace parisian;

namespace {

RiskModel one_line(double a, double mu, double s, double hurst) {
    RiskModel m;
    m.lines = {{a, mu, s}};
    m.hurst = hurst;
    return m;
}

RiskModel two_lines(double hurst) {
    RiskModel m;
    m.lines = {{1.0, 3.0, 1.0}, {2.0, 1.0, 1.0}};
    m.hurst = hurst;
    return m;
}

// grid maximizer of sigma_Z, used as the oracle for find_tstar
double grid_argmax(const RiskModel& m, double lo, double hi, long n) {
    double best_t = lo, best = -1.0;
    for (long j = 0; j <= n; ++j) {
        const double t = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(n);
        if (t <= 0.0) continue;
        const double v = sigma_Z(m, t);
        if (v > best) {
            best = v;
            best_t = t;
        }
    }
    return best_t;
}

RiskModel random_model(Rng& rng) {
    RiskModel m;
    const int d = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int i = 0; i < d; ++i)
        m.lines.push_back({0.2 + 3.0 * rng.uniform(), 0.2 + 3.0 * rng.uniform(),
                           0.3 + 2.0 * rng.uniform()});
    m.hurst = 0.15 + 0.7 * rng.uniform();
    return m;
}

} // namespace

TEST_CASE("barrier basics") {
    CHECK(barrier(one_line(1, 1, 1, 0.5), 2.0) == doctest::Approx(3.0));
    const RiskModel m = two_lines(0.5);
    CHECK(barrier(m, 0.0) == doctest::Approx(2.0));
    CHECK(barrier(m, 1.0) == doctest::Approx(4.0));

    // convex, increasing, piecewise linear
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const RiskModel r = random_model(rng);
        double prev = barrier(r, 0.0);
        double prev_slope = 0.0;
        for (int j = 1; j <= 40; ++j) {
            const double t = 0.25 * j;
            const double cur = barrier(r, t);
            const double slope = (cur - prev) / 0.25;
            CHECK(cur >= prev);
            CHECK(slope >= prev_slope - 1e-9);
            prev = cur;
            prev_slope = slope;
        }
    }
}

TEST_CASE("sigma_Z closed form and limits") {
    const RiskModel m = one_line(1, 1, 1, 0.5);
    CHECK(sigma_Z(m, 1.0) == doctest::Approx(0.5));
    CHECK(sigma_Z(m, 1e-6) < 1e-2);
    CHECK(sigma_Z(m, 1e6) < 1e-2);
    CHECK_THROWS_AS(sigma_Z(m, 0.0), Error);
    CHECK_THROWS_AS(sigma_Z(m, -1.0), Error);
}

TEST_CASE("stationary optimal point closed form") {
    const RiskModel m = one_line(1, 1, 1, 0.5);
    const OptimalPoint opt = find_tstar(m);
    CHECK(opt.kind == OptimalKind::Stationary);
    CHECK(opt.t_star == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(opt.sigma_star == doctest::Approx(0.5).epsilon(1e-10));

    // d=1 closed form H a / (mu (1-H)) across parameters
    Rng rng(6);
    for (int trial = 0; trial < 200; ++trial) {
        const double a = 0.2 + 3.0 * rng.uniform();
        const double mu = 0.2 + 3.0 * rng.uniform();
        const double h = 0.1 + 0.8 * rng.uniform();
        const RiskModel r = one_line(a, mu, 1.0, h);
        const double expected = h * a / (mu * (1.0 - h));
        CHECK(find_tstar(r).t_star == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("kink optimal point at the line intersection") {
    const RiskModel m = two_lines(0.5);
    const OptimalPoint opt = find_tstar(m);
    CHECK(opt.kind == OptimalKind::Kink);
    CHECK(opt.t_star == doctest::Approx(0.5).epsilon(1e-12));
    // left active line is (2,1), right is (1,3)
    CHECK(opt.active_left == 1);
    CHECK(opt.active_right == 0);
}

TEST_CASE("grid search confirms uniqueness and location on random models") {
    Rng rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        const RiskModel m = random_model(rng);
        const OptimalPoint opt = find_tstar(m);
        const double hi = 4.0 * opt.t_star;
        const long n = 10000;
        const double oracle = grid_argmax(m, hi / n, hi, n);
        CHECK(std::abs(oracle - opt.t_star) <= 2.0 * hi / n);

        // increasing before, decreasing after (on coarse probes)
        for (int j = 1; j < 8; ++j) {
            const double t1 = opt.t_star * static_cast<double>(j) / 8.0;
            const double t2 = opt.t_star * static_cast<double>(j + 1) / 8.0;
            CHECK(sigma_Z(m, t1) < sigma_Z(m, t2) + 1e-12);
        }
        for (int j = 0; j < 8; ++j) {
            const double t1 = opt.t_star * (1.0 + static_cast<double>(j) / 4.0);
            const double t2 = opt.t_star * (1.0 + static_cast<double>(j + 1) / 4.0);
            CHECK(sigma_Z(m, t1) >= sigma_Z(m, t2) - 1e-12);
        }
    }
}

TEST_CASE("boundary maxima are rejected") {
    RiskModel m = one_line(1, 1, 1, 0.5); // t* = 1
    m.horizon = 0.5;
    CHECK_THROWS_AS(find_tstar(m), Error);
    m.horizon = 2.0;
    CHECK_NOTHROW(find_tstar(m));
}

TEST_CASE("local expansion: stationary quadratic coefficients") {
    const RiskModel m = one_line(1, 1, 1, 0.5);
    const LocalExpansion exp = local_expansion(m);
    CHECK(exp.gamma_minus == 2.0);
    CHECK(exp.gamma_plus == 2.0);
    // Taylor coefficient of the one-term variance expansion
    CHECK(exp.A_minus == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(exp.A_plus == doctest::Approx(0.125).epsilon(1e-10));
    CHECK(exp.alpha == doctest::Approx(1.0));
    CHECK(exp.D_corr == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("local expansion: kink one-sided slopes") {
    const LocalExpansion exp = local_expansion(two_lines(0.5));
    CHECK(exp.gamma_minus == 1.0);
    CHECK(exp.gamma_plus == 1.0);
    CHECK(exp.A_minus == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(exp.A_plus == doctest::Approx(0.2).epsilon(1e-10));
}

TEST_CASE("one-sided finite differences confirm the expansion") {
    Rng rng(8);
    for (int trial = 0; trial < 60; ++trial) {
        const RiskModel m = random_model(rng);
        const LocalExpansion exp = local_expansion(m);
        const double ts = exp.t_star;
        const double s_star = exp.sigma_star;

        // the residual of the one-term expansion is o(delta^gamma): halving
        // delta must shrink it by at least 1.5 (gamma=1) or 2.5 (gamma=2);
        // the true orders are delta^2 and delta^3, so there is headroom
        auto resid = [&](double delta, double a, double g, int side) {
            const double t = side > 0 ? ts + delta : ts - delta;
            const double lhs = sigma_Z(m, t) / s_star;
            return std::abs(lhs - (1.0 - a * std::pow(delta, g)));
        };
        const double d0 = 1e-3 * ts;
        for (int side : {-1, +1}) {
            const double a = side > 0 ? exp.A_plus : exp.A_minus;
            const double g = side > 0 ? exp.gamma_plus : exp.gamma_minus;
            const double r1 = resid(d0, a, g, side);
            const double r2 = resid(d0 / 2.0, a, g, side);
            const double factor = g == 1.0 ? 1.5 : 2.5;
            if (r1 > 1e-13) // both residuals at rounding level otherwise
                CHECK(r2 <= r1 / factor + 1e-15);
        }
    }
}

TEST_CASE("coincident kink classifies per side") {
    // kink at t*=1 whose left line is also stationary there: with H=0.5 the
    // stationary condition for (a, mu) is a = mu; the right line is steeper
    // and crosses at the same point.
    RiskModel m;
    m.hurst = 0.5;
    m.lines = {{1.0, 1.0, 1.0}, {0.5, 1.5, 1.0}};
    const OptimalPoint opt = find_tstar(m);
    CHECK(opt.kind == OptimalKind::Coincident);
    CHECK(opt.t_star == doctest::Approx(1.0).epsilon(1e-10));
    const LocalExpansion exp = local_expansion(m);
    CHECK(exp.gamma_minus == 2.0); // stationary side
    CHECK(exp.gamma_plus == 1.0);  // kink side
    CHECK(exp.A_plus == doctest::Approx(std::abs(0.5 - 1.5 / 2.0)).epsilon(1e-9));
}

TEST_CASE("scaling consistency") {
    Rng rng(9);
    for (int trial = 0; trial < 50; ++trial) {
        const RiskModel m = random_model(rng);
        const double c = 0.5 + 2.0 * rng.uniform();
        RiskModel scaled = m;
        for (auto& l : scaled.lines) {
            l.alpha *= c;
            l.mu *= c;
        }
        const OptimalPoint a = find_tstar(m);
        const OptimalPoint b = find_tstar(scaled);
        CHECK(b.t_star == doctest::Approx(a.t_star).epsilon(1e-9));
        CHECK(b.sigma_star == doctest::Approx(a.sigma_star / c).epsilon(1e-9));
        CHECK(n_hat(scaled, 100.0) == doctest::Approx(n_hat(m, 100.0) * c).epsilon(1e-9));
    }
}

TEST_CASE("G is positive at zero and decreasing") {
    Rng rng(10);
    for (int trial = 0; trial < 50; ++trial) {
        const RiskModel m = random_model(rng);
        const double h = m.hurst;
        double prev = h * barrier(m, 1e-9); // G(0+) = H D(0) > 0
        CHECK(prev > 0.0);
        const double ts = find_tstar(m).t_star;
        for (int j = 1; j <= 64; ++j) {
            const double t = 3.0 * ts * static_cast<double>(j) / 64.0;
            const double g = h * barrier(m, t) - t * barrier_derivative(m, t, +1);
            CHECK(g <= prev + 1e-9);
            prev = g;
        }
    }
}

TEST_CASE("n_hat") {
    const RiskModel m = one_line(1, 1, 1, 0.5);
    CHECK(n_hat(m, 100.0) == doctest::Approx(20.0));
    CHECK(n_hat(m, 0.0) == doctest::Approx(0.0));
    CHECK(n_hat(m, 400.0) == doctest::Approx(40.0));
    CHECK_THROWS_AS(n_hat(m, -1.0), Error);
}

TEST_CASE("model validation errors") {
    RiskModel bad;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.lines = {{1, 1, 1}};
    bad.hurst = 1.2;
    CHECK_THROWS_AS(bad.validate(), Error);
    bad.hurst = 0.5;
    bad.lines = {{-1, 1, 1}};
    CHECK_THROWS_AS(bad.validate(), Error);
}
