#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "suppflow/body.hpp"
#include "suppflow/curvature.hpp"
#include "suppflow/forcing.hpp"

namespace suppflow {

enum class FlowMode { Normalized, Unnormalized };

struct FlowConfig {
    double beta = 0.5;
    CurvatureSpec curvature;
    ForcingSpec forcing;
    BodyRecipe initial;
    int grid_n = 1;
    int grid_m = 128;
    GridKind grid_kind = GridKind::Circle;

    // sigma_dt in (0, 1]; RK4 with trigonometric differentiation needs
    // sigma pi^2 within the real-axis stability interval, hence the default
    double dt_safety = 0.25;
    double dt_max = 0.05;
    double tol_res = 1e-8;
    double t_max = 50.0;
    FlowMode mode = FlowMode::Normalized;
    double c0 = 0.0;           // rescaling constant; <= 0 means choose automatically
    int checkpoint_every = 25;  // accepted steps between trace rows
    double eps_floor = 0.0;    // potentials; <= 0 means 0.05 * min u0
    bool waive_checks = false;

    void validate() const;
};

struct TraceRow {
    double t = 0.0;
    double u_min = 0.0, u_max = 0.0;
    double rho_min = 0.0, rho_max = 0.0;
    double f_min = 0.0, f_max = 0.0;
    double lambda_min = 0.0;
    double residual = 0.0;        // max |Q - 1|, Q = G F^beta
    double q_minus_1_min = 0.0, q_minus_1_max = 0.0;
    int sign_class = 0;           // +1 / -1 if Q - 1 one-signed, else 0
    double grad_ratio = 0.0;      // max |Du| / u
    double w_f = std::numeric_limits<double>::quiet_NaN();
    double u_pot = std::numeric_limits<double>::quiet_NaN();
    double v_pot = std::numeric_limits<double>::quiet_NaN();
    double dt = 0.0;
};

enum class FlowStatus { Converged, NotConverged, Stalled };

struct FlowTrace {
    std::vector<TraceRow> rows;
    double beta = 0.0;
    // condition-(i) crossing brackets, for the C0 sandwich monitor
    double lower_bracket_lo = 0.0, upper_bracket_hi = 0.0;
    bool condition_iii_pass = false;
    bool checks_waived = false;
    double tol_res = 1e-8;

    std::string to_csv() const;
};

struct FlowResult {
    FlowTrace trace;
    ConvexBodyState final_body;
    FlowStatus status = FlowStatus::NotConverged;
    double residual = 0.0;
    int steps = 0;
};

// Q = G F^beta per node.
ScalarField flow_speed(const ConvexBodyState& body, const FlowConfig& config);
double flow_residual(const ConvexBodyState& body, const FlowConfig& config);

// One classical RK4 update of du/dt = (G F^beta - 1) u (normalized) or
// du/dt = G F^beta u (unnormalized). Empty result means the step produced an
// inadmissible body and was rejected.
std::optional<ConvexBodyState> step(const ConvexBodyState& body, const FlowConfig& config,
                                    double dt);

// Parabolic CFL suggestion sigma h^2 / (beta max G u F^{beta-1} sum dF/dlambda).
double suggest_dt(const ConvexBodyState& body, const FlowConfig& config);

FlowResult run_normalized(const FlowConfig& config,
                          const std::vector<double>& sample_times = {});

struct RescalingReport {
    std::vector<double> t_checkpoints;     // unnormalized time
    std::vector<double> tau_checkpoints;   // paired normalized time
    std::vector<double> discrepancy;       // sup |phi^{-1} u - u_normalized|
    double max_discrepancy = 0.0;
    double c0 = 0.0;
    FlowResult unnormalized;
    FlowResult normalized;
};

// Integrates the unnormalized flow and compares phi^{-1}(t) u against the
// paired normalized run at tau(t). Requires the psi u^{alpha-1} rho^delta
// family with alpha + delta + beta < 1.
RescalingReport run_unnormalized_and_compare(const FlowConfig& config, double tau_end,
                                             int checkpoints = 12);

struct MonitorVerdicts {
    bool sandwich_pass = false;        // C0 bounds move the right way vs the brackets
    bool sign_preserved = false;       // one-signed Q - 1 stays one-signed
    bool f_bounded = false;            // F stays in fixed bounds after burn-in
    bool roundness_applicable = false; // condition (iii) held
    bool roundness_pass = false;
    double decay_slope = 0.0;
    double decay_r2 = 0.0;
    double final_asphericity = 0.0;
};

MonitorVerdicts monitor_suite(const FlowTrace& trace);

}  // namespace suppflow
