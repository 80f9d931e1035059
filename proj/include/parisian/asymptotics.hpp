#pragma once

#include <optional>
#include <string>

#include "parisian/constants_lab.hpp"
#include "parisian/risk_model.hpp"

namespace parisian {

enum class CaseTag {
    Pickands,           // nu = alpha != gamma
    Piterbarg,          // gamma_- = gamma_+ = alpha
    TalagrandSymmetric, // gamma_- = gamma_+ < alpha
    TalagrandLeftLight, // gamma_- < gamma_+ and gamma_- < alpha
    TalagrandRightLight // gamma_+ < gamma_- and gamma_+ < alpha
};

const char* case_name(CaseTag tag);

struct CaseLabel {
    double nu = 0.0;         // min{alpha, gamma_-, gamma_+}
    double gamma = 0.0;      // max{gamma_-, gamma_+}
    double zeta_minus = 0.0; // 2/nu - 2/gamma_-
    double zeta_plus = 0.0;  // 2/nu - 2/gamma_+
    double zeta = 0.0;       // max of the two
    CaseTag tag = CaseTag::Pickands;

    bool is_talagrand() const {
        return tag == CaseTag::TalagrandSymmetric || tag == CaseTag::TalagrandLeftLight ||
               tag == CaseTag::TalagrandRightLight;
    }
};

// Standard normal survival function and its logarithm; the log form stays
// accurate (no underflow) through u = 40.
double psi(double u);
double log_psi(double u);

CaseLabel classify(const LocalExpansion& exp);

// Constant of the Talagrand branch. Only the sides whose exponent equals nu
// keep a penalty in the limit, so the value is
//   exp( -min_{mu in [0,T]} max(A_- mu^{g-} [g-=nu], A_+ (T-mu)^{g+} [g+=nu]) ):
// exp(-minimax) in the symmetric case and exactly 1 in both asymmetric ones.
double talagrand_constant(const LocalExpansion& exp, double T);

struct AsymptoticValue {
    double prefactor = 0.0; // C in C u^zeta Psi(u)
    double power = 0.0;     // zeta (0 for Piterbarg/Talagrand)
    double u = 0.0;
    double value = 0.0;
    double log_value = 0.0;
    CaseTag branch = CaseTag::Pickands;
    std::optional<ConstantEstimate> constant_source;
};

// First-order tail approximation of Pi(u) = P{sup-inf > u}. The Pickands branch
// needs an H^P_alpha(D^{1/alpha} T) estimate (half convention, per-length),
// the Piterbarg branch an H^P_{alpha,h}(D^{1/alpha} T) estimate (raw,
// symmetric, drift A_pm D^{-gamma_pm/alpha}); provenance is checked.
AsymptoticValue tail_asymptotic(const LocalExpansion& exp, double T, double u,
                               const std::optional<ConstantEstimate>& pickands_const = {},
                               const std::optional<ConstantEstimate>& piterbarg_const = {});

// Many-inputs route: u = n_hat(model, N) with the model's own local
// expansion (alpha = 2H, D = 1/(2 t*^{2H})).
AsymptoticValue mipr_tail_asymptotic(const RiskModel& model, double big_n, double T,
                                const std::optional<ConstantEstimate>& pickands_const = {},
                                const std::optional<ConstantEstimate>& piterbarg_const = {});

} // namespace parisian
