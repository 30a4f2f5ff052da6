#include "suppflow/flow.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "suppflow/functionals.hpp"

namespace suppflow {

namespace {

struct RunInternal {
    FlowResult result;
    std::vector<ConvexBodyState> snapshots;  // at the requested sample times
};

double phi_of_t(double c0, double s, double t) {
    return std::pow(c0 + (1.0 - s) * t, 1.0 / (1.0 - s));
}

double t_of_tau(double c0, double s, double tau) {
    return c0 * std::expm1((1.0 - s) * tau) / (1.0 - s);
}

}  // namespace

void FlowConfig::validate() const {
    if (!(beta > 0.0)) throw std::invalid_argument("flow: beta must be > 0");
    if (!(tol_res > 0.0)) throw std::invalid_argument("flow: tol_res must be > 0");
    if (!(dt_safety > 0.0) || dt_safety > 1.0)
        throw std::invalid_argument("flow: dt_safety must lie in (0, 1]");
    if (checkpoint_every < 1) throw std::invalid_argument("flow: checkpoint cadence >= 1");
}

ScalarField flow_speed(const ConvexBodyState& body, const FlowConfig& config) {
    ScalarField G = eval_G(config.forcing, body);
    ScalarField F = eval_F(config.curvature, body);
    ScalarField Q(body.u.grid);
    for (int j = 0; j < Q.size(); ++j) Q[j] = G[j] * std::pow(F[j], config.beta);
    return Q;
}

double flow_residual(const ConvexBodyState& body, const FlowConfig& config) {
    ScalarField Q = flow_speed(body, config);
    double r = 0.0;
    for (int j = 0; j < Q.size(); ++j) r = std::max(r, std::abs(Q[j] - 1.0));
    return r;
}

namespace {

// du/dt at given support samples; throws on inadmissible intermediate states
std::vector<double> flow_rhs(const ScalarField& u, const FlowConfig& config) {
    ConvexBodyState body = body_from_support(u);
    ScalarField Q = flow_speed(body, config);
    std::vector<double> out(u.values.size());
    const double shift = config.mode == FlowMode::Normalized ? 1.0 : 0.0;
    for (size_t j = 0; j < out.size(); ++j) out[j] = (Q[j] - shift) * u.values[j];
    return out;
}

}  // namespace

std::optional<ConvexBodyState> step(const ConvexBodyState& body, const FlowConfig& config,
                                    double dt) {
    try {
        const auto& g = body.u.grid;
        auto advance = [&](const std::vector<double>& k, double f) {
            ScalarField u(g);
            for (int j = 0; j < u.size(); ++j) u[j] = body.u[j] + f * k[j];
            return u;
        };
        std::vector<double> k1 = flow_rhs(body.u, config);
        std::vector<double> k2 = flow_rhs(advance(k1, 0.5 * dt), config);
        std::vector<double> k3 = flow_rhs(advance(k2, 0.5 * dt), config);
        std::vector<double> k4 = flow_rhs(advance(k3, dt), config);
        ScalarField u(g);
        for (int j = 0; j < u.size(); ++j)
            u[j] = body.u[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        return body_from_support(std::move(u));
    } catch (const std::invalid_argument&) {
        return std::nullopt;
    }
}

double suggest_dt(const ConvexBodyState& body, const FlowConfig& config) {
    ScalarField G = eval_G(config.forcing, body);
    ScalarField F = eval_F(config.curvature, body);
    double stiff = 0.0;
    for (int j = 0; j < body.u.size(); ++j) {
        auto lam = body.radii_at(j);
        auto grad = grad_F(config.curvature, lam);
        double gsum = 0.0;
        for (double gi : grad) gsum += gi;
        stiff = std::max(stiff, G[j] * body.u[j] * std::pow(F[j], config.beta - 1.0) * gsum);
    }
    double h = body.grid().spacing;
    double dt = config.dt_safety * h * h / (config.beta * stiff);
    return std::min(dt, config.dt_max);
}

namespace {

TraceRow make_row(const ConvexBodyState& body, const FlowConfig& config, double t,
                  double dt, double eps_floor) {
    TraceRow row;
    row.t = t;
    row.dt = dt;
    row.u_min = body.u.min();
    row.u_max = body.u.max();
    row.rho_min = body.rho.min();
    row.rho_max = body.rho.max();
    ScalarField F = eval_F(config.curvature, body);
    row.f_min = F.min();
    row.f_max = F.max();
    row.lambda_min = body.lambda_min();
    ScalarField Q = flow_speed(body, config);
    row.q_minus_1_min = Q.min() - 1.0;
    row.q_minus_1_max = Q.max() - 1.0;
    row.residual = std::max(std::abs(row.q_minus_1_min), std::abs(row.q_minus_1_max));
    const double slack = 1e-12;
    if (row.q_minus_1_min >= -slack)
        row.sign_class = +1;
    else if (row.q_minus_1_max <= slack)
        row.sign_class = -1;
    row.grad_ratio = body.asphericity();

    if (divergence_free_eligible(config.curvature)) {
        try {
            row.w_f = modified_quermassintegral(body, config.curvature);
        } catch (const std::exception&) {
        }
        if (config.forcing.kind != ForcingKind::PsiURho) {
            try {
                row.u_pot = u_potential(body, config.forcing, config.beta,
                                        config.curvature.functional_power(), eps_floor);
            } catch (const std::exception&) {
            }
        }
        if (config.forcing.kind == ForcingKind::Composite) {
            try {
                row.v_pot = v_potential(body, config.forcing, config.beta, eps_floor);
            } catch (const std::exception&) {
            }
        }
    }
    return row;
}

RunInternal run_flow(const FlowConfig& config, ConvexBodyState body, double t_end,
                     std::vector<double> sample_times, bool stop_on_residual) {
    RunInternal run;
    FlowTrace& trace = run.result.trace;
    trace.beta = config.beta;
    trace.tol_res = config.tol_res;
    trace.checks_waived = config.waive_checks;

    auto cond_i = check_condition_i(config.forcing, config.beta);
    trace.lower_bracket_lo = cond_i.lower_bracket[0];
    trace.upper_bracket_hi = cond_i.upper_bracket[1];
    try {
        trace.condition_iii_pass =
            check_condition_iii_decay(config.forcing, config.beta).pass;
    } catch (const std::invalid_argument&) {
        trace.condition_iii_pass = false;  // x-dependent spec: not applicable
    }

    double eps_floor =
        config.eps_floor > 0.0 ? config.eps_floor : 0.05 * body.u.min();

    std::sort(sample_times.begin(), sample_times.end());
    size_t next_sample = 0;

    double t = 0.0;
    trace.rows.push_back(make_row(body, config, t, 0.0, eps_floor));
    if (!sample_times.empty() && sample_times[0] <= 0.0) {
        run.snapshots.push_back(body);
        ++next_sample;
    }

    const double dt_floor = 1e-12 * std::max(t_end, 1.0);
    int since_checkpoint = 0;
    run.result.status = FlowStatus::NotConverged;
    while (t < t_end * (1.0 - 1e-14)) {
        double r = flow_residual(body, config);
        if (stop_on_residual && r <= config.tol_res) {
            run.result.status = FlowStatus::Converged;
            break;
        }
        double dt = std::min(suggest_dt(body, config), t_end - t);
        bool want_sample = false;
        if (next_sample < sample_times.size()) {
            double gap = sample_times[next_sample] - t;
            if (gap <= dt * (1.0 + 1e-12)) {
                dt = gap;
                want_sample = true;
            }
        }
        std::optional<ConvexBodyState> next;
        while (!(next = step(body, config, dt)) && dt > dt_floor) {
            dt *= 0.5;
            want_sample = false;
        }
        if (!next) {
            run.result.status = FlowStatus::Stalled;
            break;
        }
        body = std::move(*next);
        // land exactly on the sample time, avoiding dt underflow near it
        t = want_sample ? sample_times[next_sample] : t + dt;
        ++run.result.steps;
        ++since_checkpoint;
        if (want_sample) {
            run.snapshots.push_back(body);
            ++next_sample;
        }
        if (since_checkpoint >= config.checkpoint_every || want_sample ||
            t >= t_end * (1.0 - 1e-14)) {
            trace.rows.push_back(make_row(body, config, t, dt, eps_floor));
            since_checkpoint = 0;
        }
    }
    if (trace.rows.empty() || trace.rows.back().t < t)
        trace.rows.push_back(make_row(body, config, t, 0.0, eps_floor));
    run.result.residual = flow_residual(body, config);
    if (stop_on_residual && run.result.residual <= config.tol_res)
        run.result.status = FlowStatus::Converged;
    run.result.final_body = std::move(body);
    return run;
}

}  // namespace

FlowResult run_normalized(const FlowConfig& config, const std::vector<double>& sample_times) {
    config.validate();
    auto grid = build_grid(config.grid_n, config.grid_m, config.grid_kind);
    ConvexBodyState body = realize(config.initial, grid);
    FlowConfig c = config;
    c.mode = FlowMode::Normalized;
    return run_flow(c, std::move(body), config.t_max, sample_times, true).result;
}

RescalingReport run_unnormalized_and_compare(const FlowConfig& config, double tau_end,
                                             int checkpoints) {
    config.validate();
    if (config.forcing.kind != ForcingKind::PsiURho)
        throw std::invalid_argument("rescaling: forcing must be psi u^{alpha-1} rho^delta");
    const double s = config.forcing.alpha + config.forcing.delta + config.beta;
    if (!(s < 1.0))
        throw std::invalid_argument("rescaling: requires alpha + delta + beta < 1");

    auto grid = build_grid(config.grid_n, config.grid_m, config.grid_kind);
    ConvexBodyState body0 = realize(config.initial, grid);

    FlowConfig cfg = config;
    cfg.mode = FlowMode::Unnormalized;
    double min_q0 = flow_speed(body0, cfg).min();
    double c0 = config.c0 > 0.0 ? config.c0 : std::max(1.0, 1.0 / min_q0);
    if (c0 * min_q0 < 1.0 - 1e-9 && !config.waive_checks)
        throw std::invalid_argument("rescaling: C0 too small, normalized speed below 1");

    RescalingReport rep;
    rep.c0 = c0;
    for (int i = 1; i <= checkpoints; ++i) {
        double tau = tau_end * i / checkpoints;
        rep.tau_checkpoints.push_back(tau);
        rep.t_checkpoints.push_back(t_of_tau(c0, s, tau));
    }

    double t_end = rep.t_checkpoints.back();
    RunInternal unnorm = run_flow(cfg, body0, t_end, rep.t_checkpoints, false);

    // paired normalized run from the rescaled initial body
    ScalarField u0(body0.u.grid);
    double phi0 = std::pow(c0, 1.0 / (1.0 - s));
    for (int j = 0; j < u0.size(); ++j) u0[j] = body0.u[j] / phi0;
    FlowConfig ncfg = config;
    ncfg.mode = FlowMode::Normalized;
    RunInternal norm = run_flow(ncfg, body_from_support(std::move(u0)), tau_end,
                                rep.tau_checkpoints, false);

    size_t count = std::min(unnorm.snapshots.size(), norm.snapshots.size());
    for (size_t i = 0; i < count; ++i) {
        double phi = phi_of_t(c0, s, rep.t_checkpoints[i]);
        double d = 0.0;
        const auto& uu = unnorm.snapshots[i].u;
        const auto& un = norm.snapshots[i].u;
        for (int j = 0; j < uu.size(); ++j) d = std::max(d, std::abs(uu[j] / phi - un[j]));
        rep.discrepancy.push_back(d);
        rep.max_discrepancy = std::max(rep.max_discrepancy, d);
    }
    rep.unnormalized = std::move(unnorm.result);
    rep.normalized = std::move(norm.result);
    return rep;
}

std::string FlowTrace::to_csv() const {
    std::ostringstream os;
    os.precision(17);
    os << "t,u_min,u_max,rho_min,rho_max,f_min,f_max,lambda_min,residual,"
          "q_minus_1_min,q_minus_1_max,sign_class,grad_ratio,w_f,u_pot,v_pot,dt\n";
    for (const auto& r : rows)
        os << r.t << "," << r.u_min << "," << r.u_max << "," << r.rho_min << ","
           << r.rho_max << "," << r.f_min << "," << r.f_max << "," << r.lambda_min << ","
           << r.residual << "," << r.q_minus_1_min << "," << r.q_minus_1_max << ","
           << r.sign_class << "," << r.grad_ratio << "," << r.w_f << "," << r.u_pot << ","
           << r.v_pot << "," << r.dt << "\n";
    return os.str();
}

MonitorVerdicts monitor_suite(const FlowTrace& trace) {
    MonitorVerdicts v;
    const auto& rows = trace.rows;
    if (rows.empty()) return v;

    // (a) C0 sandwich against the condition-(i) crossing brackets
    v.sandwich_pass = true;
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        double slack = 1e-10 * (1.0 + rows[i].u_max);
        if (trace.upper_bracket_hi > 0.0 && rows[i].u_max > trace.upper_bracket_hi &&
            rows[i + 1].u_max > rows[i].u_max + slack)
            v.sandwich_pass = false;
        if (trace.lower_bracket_lo > 0.0 && rows[i].u_min < trace.lower_bracket_lo &&
            rows[i + 1].u_min < rows[i].u_min - slack)
            v.sandwich_pass = false;
    }

    // (b) sign preservation
    v.sign_preserved = true;
    if (rows.front().sign_class == +1) {
        for (const auto& r : rows)
            if (r.q_minus_1_min < -1e-8) v.sign_preserved = false;
    } else if (rows.front().sign_class == -1) {
        for (const auto& r : rows)
            if (r.q_minus_1_max > 1e-8) v.sign_preserved = false;
    }

    // (c) F bounds after burn-in
    size_t burn = rows.size() / 5;
    double flo = rows[burn].f_min, fhi = rows[burn].f_max;
    v.f_bounded = true;
    for (size_t i = burn; i < rows.size(); ++i)
        if (rows[i].f_min < 0.5 * flo || rows[i].f_max > 2.0 * fhi) v.f_bounded = false;

    // (d) exponential roundness
    v.roundness_applicable = trace.condition_iii_pass;
    v.final_asphericity = rows.back().grad_ratio;
    if (v.roundness_applicable) {
        std::vector<double> xs, ys;
        for (size_t i = rows.size() / 2; i < rows.size(); ++i)
            if (rows[i].grad_ratio > 0.0) {
                xs.push_back(rows[i].t);
                ys.push_back(std::log(rows[i].grad_ratio));
            }
        if (v.final_asphericity < 1e-13) {
            v.roundness_pass = true;  // already round to rounding level
        } else if (xs.size() >= 3) {
            double n = static_cast<double>(xs.size());
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < xs.size(); ++i) {
                sx += xs[i];
                sy += ys[i];
                sxx += xs[i] * xs[i];
                sxy += xs[i] * ys[i];
            }
            double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
            double intercept = (sy - slope * sx) / n;
            double ss_res = 0, ss_tot = 0, ymean = sy / n;
            for (size_t i = 0; i < xs.size(); ++i) {
                double e = ys[i] - (slope * xs[i] + intercept);
                ss_res += e * e;
                ss_tot += (ys[i] - ymean) * (ys[i] - ymean);
            }
            v.decay_slope = slope;
            v.decay_r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
            v.roundness_pass = slope < 0.0 && v.decay_r2 >= 0.99;
        }
    }
    return v;
}

}  // namespace suppflow
