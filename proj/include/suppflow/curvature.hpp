#pragma once

#include <random>
#include <vector>

#include "suppflow/body.hpp"
#include "suppflow/grid.hpp"

namespace suppflow {

enum class CurvatureKind {
    SigmaKRoot,     // (sigma_k / C(n,k))^{1/k}
    Gauss,          // sigma_n^{1/n}
    SigmaQuotient,  // ((sigma_k / sigma_l) * C(n,l)/C(n,k))^{1/(k-l)}
};

// Normalized degree-1 curvature function of the principal radii, F(1,..,1) = 1.
struct CurvatureSpec {
    CurvatureKind kind = CurvatureKind::SigmaKRoot;
    int k = 1;
    int l = 0;  // quotient kind only
    int n = 1;  // ambient sphere dimension

    // exponent of F paired with the W_F functional (k, or n for gauss)
    int functional_power() const { return kind == CurvatureKind::Gauss ? n : k; }
};

CurvatureSpec sigma_k_root(int k, int n);
CurvatureSpec gauss_curvature(int n);
CurvatureSpec sigma_quotient(int k, int l, int n);

// The distinct radii fields of the body (see ConvexBodyState).
const std::vector<ScalarField>& principal_radii(const ConvexBodyState& body);

double eval_F(const CurvatureSpec& spec, const std::vector<double>& radii);
ScalarField eval_F(const CurvatureSpec& spec, const ConvexBodyState& body);

// dF/dlambda_i, closed form; Euler identity sum lambda_i dF_i = F.
std::vector<double> grad_F(const CurvatureSpec& spec, const std::vector<double>& radii);

// F^p with F^k meaning sigma_k / C(n,k) for the sigma family (p = functional_power)
double eval_F_power(const CurvatureSpec& spec, const std::vector<double>& radii);
ScalarField eval_F_power(const CurvatureSpec& spec, const ConvexBodyState& body);

struct ConcavityReport {
    bool pass = false;
    double worst_violation = 0.0;  // most negative midpoint-concavity margin
    int samples = 0;
};

// Midpoint concavity probe of the dual F_*(kappa) = 1/F(1/kappa) at random
// positive points. Numerical evidence only, never a proof.
ConcavityReport inverse_concavity_probe(const CurvatureSpec& spec, int sample_count,
                                        unsigned seed = 0);

// True exactly for the sigma_k family (F^k proportional to sigma_k); gates W_F.
bool divergence_free_eligible(const CurvatureSpec& spec);

}  // namespace suppflow
