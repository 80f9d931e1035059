#include "parisian/asymptotics.hpp"

#include <cmath>

#include "parisian/errors.hpp"

namespace parisian {

const char* case_name(CaseTag tag) {
    switch (tag) {
        case CaseTag::Pickands: return "pickands";
        case CaseTag::Piterbarg: return "piterbarg";
        case CaseTag::TalagrandSymmetric: return "talagrand_symmetric";
        case CaseTag::TalagrandLeftLight: return "talagrand_left_light";
        case CaseTag::TalagrandRightLight: return "talagrand_right_light";
    }
    return "unknown";
}

double psi(double u) {
    return 0.5 * std::erfc(u * 0.70710678118654752440);
}

double log_psi(double u) {
    if (u <= 26.0) {
        return std::log(psi(u));
    }
    // Mills series: Psi(u) = phi(u)/u * (1 - 1/u^2 + 3/u^4 - ...)
    const double u2 = u * u;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 12; ++k) {
        term *= -static_cast<double>(2 * k - 1) / u2;
        const double prev = sum;
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum) || std::abs(sum - prev) == 0.0) break;
    }
    const double log_phi = -0.5 * u2 - 0.91893853320467274178; // log sqrt(2 pi)
    return log_phi - std::log(u) + std::log(sum);
}

namespace {

void check_exponents(const LocalExpansion& exp) {
    if (!(exp.gamma_minus > 0.0) || !(exp.gamma_plus > 0.0) || !(exp.A_minus > 0.0) ||
        !(exp.A_plus > 0.0))
        throw Error(ErrorKind::Parameter, "expansion coefficients must be strictly positive");
    if (!(exp.alpha > 0.0) || !(exp.alpha <= 2.0))
        throw Error(ErrorKind::Parameter, "alpha must lie in (0, 2]");
    if (!(exp.D_corr > 0.0)) throw Error(ErrorKind::Parameter, "D must be > 0");
}

bool close_rel(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

CaseLabel classify(const LocalExpansion& exp) {
    check_exponents(exp);
    CaseLabel label;
    const double gm = exp.gamma_minus, gp = exp.gamma_plus, a = exp.alpha;
    label.nu = std::min({a, gm, gp});
    label.gamma = std::max(gm, gp);
    label.zeta_minus = 2.0 / label.nu - 2.0 / gm;
    label.zeta_plus = 2.0 / label.nu - 2.0 / gp;
    label.zeta = std::max(label.zeta_minus, label.zeta_plus);

    if (std::min(gm, gp) < a) {
        if (gm == gp) label.tag = CaseTag::TalagrandSymmetric;
        else if (gp < gm) label.tag = CaseTag::TalagrandRightLight;
        else label.tag = CaseTag::TalagrandLeftLight;
    } else if (gm == a && gp == a) {
        label.tag = CaseTag::Piterbarg;
    } else {
        label.tag = CaseTag::Pickands;
    }
    return label;
}

double talagrand_constant(const LocalExpansion& exp, double T) {
    if (T < 0.0) throw Error(ErrorKind::Parameter, "T must be >= 0");
    const CaseLabel label = classify(exp);
    if (!label.is_talagrand())
        throw Error(ErrorKind::Usage, "talagrand_constant needs a Talagrand case");
    if (label.tag != CaseTag::TalagrandSymmetric || T == 0.0) return 1.0;

    // minimax of the window penalty: increasing A_- mu^g meets decreasing
    // A_+ (T-mu)^g at mu* = T / (1 + (A_-/A_+)^{1/g})
    const double g = exp.gamma_minus;
    const double mu_star = T / (1.0 + std::pow(exp.A_minus / exp.A_plus, 1.0 / g));
    const double v = exp.A_minus * std::pow(mu_star, g);
    return std::exp(-v);
}

namespace {

void require_pickands_estimate(const ConstantEstimate& est, const LocalExpansion& exp,
                               double T_scaled) {
    if (!(est.value > 0.0))
        throw Error(ErrorKind::Parameter, "constant estimate must be positive");
    if (est.normalization != Normalization::PerLength ||
        est.spec.convention != IntervalConvention::Half)
        throw Error(ErrorKind::Dependency,
                    "Pickands branch consumes half-interval per-length estimates");
    if (est.spec.drift)
        throw Error(ErrorKind::Dependency, "Pickands constant must be drift-free");
    if (!close_rel(est.spec.alpha, exp.alpha, 1e-9))
        throw Error(ErrorKind::Dependency, "constant estimated at a different alpha");
    if (!close_rel(est.spec.T, T_scaled, 1e-9))
        throw Error(ErrorKind::Dependency,
                    "constant estimated at a different window argument");
}

void require_piterbarg_estimate(const ConstantEstimate& est, const LocalExpansion& exp,
                                double T_scaled) {
    if (!(est.value > 0.0))
        throw Error(ErrorKind::Parameter, "constant estimate must be positive");
    if (est.normalization != Normalization::Raw ||
        est.spec.convention != IntervalConvention::Symmetric)
        throw Error(ErrorKind::Dependency,
                    "Piterbarg branch consumes raw symmetric-interval estimates");
    if (!est.spec.drift)
        throw Error(ErrorKind::Dependency, "Piterbarg constant needs the drift field");
    if (!close_rel(est.spec.alpha, exp.alpha, 1e-9) || !close_rel(est.spec.T, T_scaled, 1e-9))
        throw Error(ErrorKind::Dependency, "constant estimated at different (alpha, T)");
    const double scale_m = std::pow(exp.D_corr, -exp.gamma_minus / exp.alpha);
    const double scale_p = std::pow(exp.D_corr, -exp.gamma_plus / exp.alpha);
    if (!close_rel(est.spec.drift->A_minus, exp.A_minus * scale_m, 1e-9) ||
        !close_rel(est.spec.drift->A_plus, exp.A_plus * scale_p, 1e-9) ||
        !close_rel(est.spec.drift->gamma_minus, exp.gamma_minus, 1e-12) ||
        !close_rel(est.spec.drift->gamma_plus, exp.gamma_plus, 1e-12))
        throw Error(ErrorKind::Dependency, "Piterbarg drift does not match the expansion");
}

} // namespace

AsymptoticValue tail_asymptotic(const LocalExpansion& exp, double T, double u,
                               const std::optional<ConstantEstimate>& pickands_const,
                               const std::optional<ConstantEstimate>& piterbarg_const) {
    check_exponents(exp);
    if (T < 0.0) throw Error(ErrorKind::Parameter, "T must be >= 0");
    const CaseLabel label = classify(exp);
    const double d_root = std::pow(exp.D_corr, 1.0 / exp.alpha);
    const double T_scaled = d_root * T;

    AsymptoticValue out;
    out.u = u;
    out.branch = label.tag;

    switch (label.tag) {
        case CaseTag::Pickands: {
            if (!pickands_const)
                throw Error(ErrorKind::Dependency, "Pickands branch needs a constant estimate");
            require_pickands_estimate(*pickands_const, exp, T_scaled);
            double c_s = 0.0;
            if (exp.gamma_plus == label.gamma)
                c_s += std::pow(exp.A_plus, -1.0 / exp.gamma_plus) * d_root *
                       std::tgamma(1.0 / exp.gamma_plus + 1.0);
            if (exp.gamma_minus == label.gamma)
                c_s += std::pow(exp.A_minus, -1.0 / exp.gamma_minus) * d_root *
                       std::tgamma(1.0 / exp.gamma_minus + 1.0);
            out.prefactor = c_s * pickands_const->value;
            out.power = 2.0 / label.nu - 2.0 / label.gamma;
            out.constant_source = pickands_const;
            break;
        }
        case CaseTag::Piterbarg: {
            if (!piterbarg_const)
                throw Error(ErrorKind::Dependency, "Piterbarg branch needs a constant estimate");
            require_piterbarg_estimate(*piterbarg_const, exp, T_scaled);
            out.prefactor = piterbarg_const->value;
            out.power = 0.0;
            out.constant_source = piterbarg_const;
            break;
        }
        default: {
            out.prefactor = talagrand_constant(exp, T);
            out.power = 0.0;
            break;
        }
    }

    if (out.power != 0.0 && !(u > 0.0))
        throw Error(ErrorKind::Parameter, "u must be > 0 for a polynomial branch");
    out.log_value = std::log(out.prefactor) + (out.power != 0.0 ? out.power * std::log(u) : 0.0) +
                    log_psi(u);
    out.value = std::exp(out.log_value);
    return out;
}

AsymptoticValue mipr_tail_asymptotic(const RiskModel& model, double big_n, double T,
                                const std::optional<ConstantEstimate>& pickands_const,
                                const std::optional<ConstantEstimate>& piterbarg_const) {
    if (!(big_n > 0.0)) throw Error(ErrorKind::Parameter, "N must be > 0");
    const LocalExpansion exp = local_expansion(model);

    // D^{1/alpha} must reproduce the 1/(2^{1/2H} t*) scaling of the model route
    const double lhs = std::pow(exp.D_corr, 1.0 / exp.alpha);
    const double rhs = 1.0 / (std::pow(2.0, 1.0 / exp.alpha) * exp.t_star);
    if (!close_rel(lhs, rhs, 1e-9))
        throw Error(ErrorKind::Internal, "many-inputs scaling identity violated");

    const double u = n_hat(model, big_n);
    return tail_asymptotic(exp, T, u, pickands_const, piterbarg_const);
}

} // namespace parisian
