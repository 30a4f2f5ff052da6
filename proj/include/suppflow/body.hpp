#pragma once

#include <array>
#include <random>
#include <vector>

#include "suppflow/grid.hpp"

namespace suppflow {

// Support-function geometry of a strictly convex body containing the origin.
// All derived fields are computed once at construction and kept immutable.
// On axisymmetric grids the distinct principal radii are
//   lambda1 = u'' + u            (multiplicity 1)
//   lambda2 = u' cot(theta) + u  (multiplicity n - 1, pole limit u'' + u)
// On the circle there is the single radius u'' + u.
struct ConvexBodyState {
    ScalarField u;    // support function
    ScalarField du;   // Du
    ScalarField d2u;  // D^2 u
    ScalarField rho;  // sqrt(u^2 + |Du|^2)
    std::vector<ScalarField> radii;       // distinct principal radii fields
    std::vector<int> radii_multiplicity;  // same length as radii
    std::vector<std::array<double, 2>> embedding;  // meridian-plane X_j, |X_j| = rho_j

    const SphereGrid& grid() const { return *u.grid; }
    int dimension() const { return u.grid->dimension; }
    // smallest principal radius over all nodes and indices
    double lambda_min() const;
    // the n radii at node j (lambda2 repeated for axisymmetric grids)
    std::vector<double> radii_at(int j) const;
    double asphericity() const;  // max |Du| / u
};

enum class BodyKind { Ball, OffsetBall, Ellipse, PerturbedBall };

struct PerturbationMode {
    int frequency = 2;
    double amplitude = 0.0;
    double phase = 0.0;  // ignored on axisymmetric grids
};

struct BodyRecipe {
    BodyKind kind = BodyKind::Ball;
    double radius = 1.0;                    // ball / offset-ball / perturbed-ball
    std::array<double, 2> center{0.0, 0.0};  // offset-ball (axial component only for axisymmetric)
    double semi_axis_a = 2.0, semi_axis_b = 1.0;  // ellipse
    std::vector<PerturbationMode> modes;    // perturbed-ball
};

BodyRecipe ball_recipe(double radius);

// Builds the body state; throws std::invalid_argument naming the offending
// node if the recipe yields u <= 0 or a non-positive radius anywhere.
ConvexBodyState realize(const BodyRecipe& recipe, const GridPtr& grid);

// Rebuild all derived fields from a support-function sample.
ConvexBodyState body_from_support(ScalarField u, bool validate = true);

// rho(xi) by discrete minimization of u_j / <x_j, xi> plus one quadratic refinement.
// xi is given by its polar angle.
double radial_function(const ConvexBodyState& state, double xi_angle);

// |Jac A*|(x) = u / (rho^{n+1} K), the pullback weight d(xi) = |Jac A*| dx.
ScalarField gauss_jacobian(const ConvexBodyState& state);

struct CheckResult {
    std::string name;
    bool pass = false;
    double margin = 0.0;  // >= 0 means satisfied
};

struct BodyReport {
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

BodyReport verify_body(const ConvexBodyState& state, double tol = 1e-8);

// node angle, u, rho, lambda_1..lambda_n per row
std::string body_to_csv(const ConvexBodyState& state);

// sup distance between support functions on the same grid
double sup_distance(const ConvexBodyState& a, const ConvexBodyState& b);

// Perturbed balls u = R(1 + sum eps_i q_i) with amplitudes capped so that
// min lambda > R/2 holds without a per-sample search.
BodyRecipe random_perturbed_ball(std::mt19937& rng, double r_min = 0.7, double r_max = 1.6,
                                 double eps_total = 0.35, int max_frequency = 3);

}  // namespace suppflow
