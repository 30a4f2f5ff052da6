#pragma once

#include <array>
#include <optional>
#include <vector>

#include "suppflow/body.hpp"
#include "suppflow/grid.hpp"

namespace suppflow {

// Strictly positive factor on the sphere, either a cosine polynomial
// c * (1 + sum a_i cos(f_i theta + phase_i)) or a tabulated angle/value curve
// with linear interpolation.
struct SphericalFactor {
    double constant = 1.0;
    std::vector<PerturbationMode> modes;
    std::vector<std::pair<double, double>> table;  // sorted by angle

    double operator()(double theta) const;
    bool is_constant() const { return modes.empty() && table.empty(); }
};

enum class ForcingKind {
    PsiURho,    // c * psi(x) * u^{alpha-1} * rho^delta
    NuU,        // c * f(x) * u^{p-1}            (the phi(nu, u) family)
    Composite,  // c * f(x) * u^{p-1} * g(X/|X|) * |X|^delta
};

struct ForcingSpec {
    ForcingKind kind = ForcingKind::PsiURho;
    SphericalFactor psi;  // psi(x) or f(x)
    SphericalFactor dir;  // g(xi), composite kind only
    double alpha = 1.0;   // psi_u_rho exponent
    double delta = 0.0;   // rho / |X| exponent
    double p = 1.0;       // u-exponent of the phi(nu, u) family
    double scale = 1.0;   // c > 0

    // exponent of u in G (alpha - 1 or p - 1)
    double u_exponent() const { return kind == ForcingKind::PsiURho ? alpha - 1.0 : p - 1.0; }
    // total scaling degree of G under (u, rho) -> (m u, m rho)
    double scaling_degree() const {
        return u_exponent() + (kind == ForcingKind::NuU ? 0.0 : delta);
    }
    bool x_independent() const;
};

ForcingSpec power_forcing(double c, double alpha, double delta);  // c * u^{alpha-1} rho^delta

// G at explicit arguments; xi_angle is the direction of X (composite kind only).
double eval_G_at(const ForcingSpec& spec, double theta, double u, double rho,
                 double xi_angle);
ScalarField eval_G(const ForcingSpec& spec, const ConvexBodyState& body);

// phi(x, s) profile of the nu-u family: c * f(x) * s^{p-1}
double phi_nu_u(const ForcingSpec& spec, double theta, double s);
// phi_hat radial profile of the composite kind: g(xi) * s^delta
double phi_hat(const ForcingSpec& spec, double xi_angle, double s);

enum class Verdict { Pass, Fail, Inconclusive };

// Asymptotic barrier condition: G(x, sx) s^beta below 1 for large s, above 1
// for small s, probed on a log-spaced fan of rays.
struct ConditionIReport {
    Verdict verdict = Verdict::Inconclusive;
    std::array<double, 2> lower_bracket{0.0, 0.0};  // min-curve crossing of 1
    std::array<double, 2> upper_bracket{0.0, 0.0};  // max-curve crossing of 1
};
ConditionIReport check_condition_i(const ForcingSpec& spec, double beta,
                                   int directions = 64);

// Positivity of [D^2 w + w I] for w = (G u)^{1/(beta+1)} with the ambient
// argument pinned per node (second derivatives of u contribute -u).
struct ConditionIIReport {
    bool pass = false;
    double min_eigenvalue = 0.0;
    int worst_node = -1;
};
ConditionIIReport check_condition_ii(const ForcingSpec& spec, double beta,
                                     const ConvexBodyState& body);

// u G_u / G + rho G_rho / G + beta <= 0 over a sampled (u, rho) box;
// requires a spec without genuine x-dependence.
struct ConditionIIIReport {
    bool pass = false;
    double worst_value = 0.0;  // max of the log-derivative combination
};
ConditionIIIReport check_condition_iii_decay(const ForcingSpec& spec, double beta);

// No m > 1 may satisfy G(x, m s1, m s2) >= G(x, s1, s2) m^{-beta}.
struct UniquenessReport {
    bool pass = false;
    double worst_margin = 0.0;  // most positive violation of the strict inequality
};
UniquenessReport check_uniqueness_condition(const ForcingSpec& spec, double beta);

}  // namespace suppflow
