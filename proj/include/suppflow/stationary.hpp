#pragma once

#include <optional>
#include <string>
#include <vector>

#include "suppflow/flow.hpp"

namespace suppflow {

struct StationaryResult {
    ConvexBodyState final_body;
    double residual = 0.0;            // max |G F^beta - 1| on the returned body
    double curvature_residual = 0.0;  // max |F_*(kappa) - G^{1/beta}|
    double wall_seconds = 0.0;
    bool converged = false;
    double asphericity = 0.0;   // max |Du| / u of the returned body
    // pairwise sup distance of seed end states, set when >= 2 seeds converged
    // and the uniqueness condition holds
    std::optional<double> cross_distance;
    std::optional<double> predicted_radius;  // sphere root when G is x-independent
    std::vector<FlowResult> seed_runs;
    int best_seed = -1;  // index into seed_runs of the returned body

    std::string to_kv() const;
};

// Scalar root of G(R, R) R^beta = 1 by bisection over the condition-(i)
// bracket, to 1e-12 relative. Throws when no bracket exists.
double sphere_solution_radius(const ForcingSpec& forcing, double beta);

// Flows each seed to a stationary solution of G F^beta = 1 and returns the
// best-residual end state. Default seeds are balls at 0.5 and 2 times the
// predicted sphere radius (1 when no prediction applies).
StationaryResult solve_stationary(const FlowConfig& config,
                                  const std::vector<BodyRecipe>& seeds = {});

enum class RoundnessVerdict { Pass, Fail, NotApplicable };

// Pass iff asphericity < 1e-5 and the trace's fitted decay slope is negative
// with R^2 >= 0.99; NotApplicable when condition (iii) did not hold.
RoundnessVerdict roundness_certificate(const StationaryResult& result);

}  // namespace suppflow
