#include "suppflow/body.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace suppflow {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<ScalarField> compute_radii(const ScalarField& u, const ScalarField& du,
                                       const ScalarField& d2u) {
    const auto& g = *u.grid;
    ScalarField l1(u.grid);
    for (int j = 0; j < u.size(); ++j) l1[j] = d2u[j] + u[j];
    if (g.kind == GridKind::Circle) return {l1};

    ScalarField l2(u.grid);
    for (int j = 0; j < u.size(); ++j) {
        double th = g.node_angles[j];
        bool near_pole = th < g.spacing || kPi - th < g.spacing;
        // L'Hopital limit of u' cot(theta) + u at the poles
        l2[j] = near_pole ? d2u[j] + u[j] : du[j] / std::tan(th) + u[j];
    }
    return {l1, l2};
}

}  // namespace

double ConvexBodyState::lambda_min() const {
    double m = radii.front().min();
    for (const auto& f : radii) m = std::min(m, f.min());
    return m;
}

std::vector<double> ConvexBodyState::radii_at(int j) const {
    std::vector<double> out;
    out.reserve(dimension());
    for (size_t i = 0; i < radii.size(); ++i)
        for (int c = 0; c < radii_multiplicity[i]; ++c) out.push_back(radii[i][j]);
    return out;
}

double ConvexBodyState::asphericity() const {
    double a = 0.0;
    for (int j = 0; j < u.size(); ++j) a = std::max(a, std::abs(du[j]) / u[j]);
    return a;
}

ConvexBodyState body_from_support(ScalarField u, bool validate) {
    ConvexBodyState s;
    s.du = differentiate(u, 1);
    s.d2u = differentiate(u, 2);
    s.rho = ScalarField(u.grid);
    for (int j = 0; j < u.size(); ++j) s.rho[j] = std::hypot(u[j], s.du[j]);
    s.radii = compute_radii(u, s.du, s.d2u);
    s.radii_multiplicity.assign(s.radii.size(), 1);
    if (s.radii.size() == 2) s.radii_multiplicity[1] = u.grid->dimension - 1;
    s.embedding.resize(u.size());
    for (int j = 0; j < u.size(); ++j) {
        double th = u.grid->node_angles[j], c = std::cos(th), sn = std::sin(th);
        s.embedding[j] = {u[j] * c - s.du[j] * sn, u[j] * sn + s.du[j] * c};
    }
    s.u = std::move(u);
    if (validate) {
        for (int j = 0; j < s.u.size(); ++j) {
            if (!(s.u[j] > 0.0))
                throw std::invalid_argument("body: support function not positive at node " +
                                            std::to_string(j));
            for (double l : s.radii_at(j))
                if (!(l > 0.0))
                    throw std::invalid_argument("body: non-positive principal radius at node " +
                                                std::to_string(j));
        }
    }
    return s;
}

BodyRecipe ball_recipe(double radius) {
    BodyRecipe r;
    r.kind = BodyKind::Ball;
    r.radius = radius;
    return r;
}

ConvexBodyState realize(const BodyRecipe& recipe, const GridPtr& grid) {
    ScalarField u(grid);
    const bool circle = grid->kind == GridKind::Circle;
    for (int j = 0; j < grid->resolution; ++j) {
        double th = grid->node_angles[j];
        switch (recipe.kind) {
            case BodyKind::Ball:
                u[j] = recipe.radius;
                break;
            case BodyKind::OffsetBall:
                // translation adds the degree-1 harmonic <c, x>
                u[j] = recipe.radius + recipe.center[0] * std::cos(th) +
                       (circle ? recipe.center[1] * std::sin(th) : 0.0);
                break;
            case BodyKind::Ellipse: {
                double a = recipe.semi_axis_a, b = recipe.semi_axis_b;
                u[j] = std::sqrt(a * a * std::cos(th) * std::cos(th) +
                                 b * b * std::sin(th) * std::sin(th));
                break;
            }
            case BodyKind::PerturbedBall: {
                double q = 1.0;
                for (const auto& mode : recipe.modes)
                    q += mode.amplitude *
                         std::cos(mode.frequency * th + (circle ? mode.phase : 0.0));
                u[j] = recipe.radius * q;
                break;
            }
        }
    }
    return body_from_support(std::move(u));
}

double radial_function(const ConvexBodyState& state, double xi_angle) {
    const auto& g = state.grid();
    const int m = g.resolution;
    int best = -1;
    double best_val = 0.0;
    auto ratio = [&](int j) {
        double c = std::cos(g.node_angles[(j % m + m) % m] - xi_angle);
        // wrap angles on the circle only; axisymmetric indices are clamped below
        return c > 1e-12 ? state.u[(j % m + m) % m] / c : std::numeric_limits<double>::infinity();
    };
    for (int j = 0; j < m; ++j) {
        double r = ratio(j);
        if (best < 0 || r < best_val) {
            best = j;
            best_val = r;
        }
    }
    int jl = best - 1, jr = best + 1;
    if (g.kind == GridKind::Axisymmetric) {
        jl = std::max(jl, 0);
        jr = std::min(jr, m - 1);
        if (jr - jl < 2) return best_val;
    }
    double f0 = ratio(jl), f1 = ratio(best), f2 = ratio(jr);
    if (!std::isfinite(f0) || !std::isfinite(f2)) return best_val;
    double denom = f0 - 2.0 * f1 + f2;
    if (denom <= 0.0) return best_val;
    return f1 - 0.125 * (f0 - f2) * (f0 - f2) / denom;
}

ScalarField gauss_jacobian(const ConvexBodyState& state) {
    ScalarField out(state.u.grid);
    const int n = state.dimension();
    for (int j = 0; j < out.size(); ++j) {
        double prod = 1.0;
        for (double l : state.radii_at(j)) prod *= l;  // 1/K
        out[j] = state.u[j] * prod / std::pow(state.rho[j], n + 1);
    }
    return out;
}

namespace {

// Extremum of the trigonometric interpolant through uniform periodic samples
// at theta_j = theta0 + j h (M h = 2 pi), refined by Newton from the discrete
// extremum. Smooth fields gain several orders over the raw discrete extremum.
double refined_extremum(const std::vector<double>& v, double theta0, double h,
                        bool want_max) {
    const int M = static_cast<int>(v.size());
    const int K = M / 2 - 1;
    std::vector<double> a(K + 1, 0.0), b(K + 1, 0.0);
    for (int j = 0; j < M; ++j) a[0] += v[j];
    a[0] /= M;
    for (int k = 1; k <= K; ++k) {
        for (int j = 0; j < M; ++j) {
            double th = theta0 + j * h;
            a[k] += v[j] * std::cos(k * th);
            b[k] += v[j] * std::sin(k * th);
        }
        a[k] *= 2.0 / M;
        b[k] *= 2.0 / M;
    }
    auto eval = [&](double th, int order) {
        double s = order == 0 ? a[0] : 0.0;
        for (int k = 1; k <= K; ++k) {
            double c = std::cos(k * th), sn = std::sin(k * th);
            if (order == 0)
                s += a[k] * c + b[k] * sn;
            else if (order == 1)
                s += k * (-a[k] * sn + b[k] * c);
            else
                s += -k * k * (a[k] * c + b[k] * sn);
        }
        return s;
    };
    int best = 0;
    for (int j = 1; j < M; ++j)
        if (want_max ? v[j] > v[best] : v[j] < v[best]) best = j;
    double th = theta0 + best * h;
    double anchor = th;
    for (int it = 0; it < 8; ++it) {
        double d2 = eval(th, 2);
        if (std::abs(d2) < 1e-14) break;
        double step = eval(th, 1) / d2;
        th -= step;
        if (std::abs(th - anchor) > h) {  // runaway Newton, keep the node value
            th = anchor;
            break;
        }
        if (std::abs(step) < 1e-14) break;
    }
    double refined = eval(th, 0);
    return want_max ? std::max(refined, v[best]) : std::min(refined, v[best]);
}

double field_extremum(const ScalarField& f, bool want_max) {
    const auto& g = *f.grid;
    if (g.kind == GridKind::Circle)
        return refined_extremum(f.values, g.node_angles[0], g.spacing, want_max);
    // even reflection doubles the half-period samples into a uniform periodic set
    const int m = g.resolution;
    std::vector<double> w(2 * m);
    for (int j = 0; j < m; ++j) {
        w[j] = f.values[j];
        w[m + j] = f.values[m - 1 - j];
    }
    return refined_extremum(w, g.node_angles[0], g.spacing, want_max);
}

}  // namespace

bool BodyReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

BodyReport verify_body(const ConvexBodyState& state, double tol) {
    BodyReport rep;
    auto add = [&](const std::string& name, double margin) {
        rep.checks.push_back({name, margin >= -tol, margin});
    };
    add("u_positive", state.u.min());
    add("radii_positive", state.lambda_min());
    // compare sub-grid refined extrema; the continuum identity holds exactly
    // while raw node extrema differ at O(h^2)
    add("max_u_eq_max_rho",
        -(std::abs(field_extremum(state.u, true) - field_extremum(state.rho, true))));
    add("min_u_eq_min_rho",
        -(std::abs(field_extremum(state.u, false) - field_extremum(state.rho, false))));

    const auto& g = state.grid();
    int jmax = 0, jmin = 0;
    for (int j = 1; j < state.u.size(); ++j) {
        if (state.u[j] > state.u[jmax]) jmax = j;
        if (state.rho[j] < state.rho[jmin]) jmin = j;
    }
    // rho samples live at the radial directions xi_j = X_j / |X_j|
    auto xi = [&](int j) {
        return std::atan2(state.embedding[j][1], state.embedding[j][0]);
    };
    double support_margin = std::numeric_limits<double>::infinity();
    double radial_margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j < state.u.size(); ++j) {
        double cs = std::cos(g.node_angles[j] - g.node_angles[jmax]);
        support_margin = std::min(support_margin, state.u[j] - cs * state.u[jmax]);
        double cr = std::cos(xi(j) - xi(jmin));
        radial_margin = std::min(radial_margin, state.rho[jmin] - state.rho[j] * cr);
    }
    add("support_lower_bound", support_margin);
    add("radial_upper_bound", radial_margin);
    return rep;
}

std::string body_to_csv(const ConvexBodyState& state) {
    std::ostringstream os;
    os.precision(17);
    const int n = state.dimension();
    os << "theta,u,rho";
    for (int i = 1; i <= n; ++i) os << ",lambda" << i;
    os << "\n";
    for (int j = 0; j < state.u.size(); ++j) {
        os << state.grid().node_angles[j] << "," << state.u[j] << "," << state.rho[j];
        for (double l : state.radii_at(j)) os << "," << l;
        os << "\n";
    }
    return os.str();
}

double sup_distance(const ConvexBodyState& a, const ConvexBodyState& b) {
    if (a.u.size() != b.u.size())
        throw std::invalid_argument("sup_distance: grid mismatch");
    double d = 0.0;
    for (int j = 0; j < a.u.size(); ++j) d = std::max(d, std::abs(a.u[j] - b.u[j]));
    return d;
}

BodyRecipe random_perturbed_ball(std::mt19937& rng, double r_min, double r_max,
                                 double eps_total, int max_frequency) {
    BodyRecipe r;
    r.kind = BodyKind::PerturbedBall;
    std::uniform_real_distribution<double> rad(r_min, r_max), unit(0.0, 1.0),
        ph(0.0, 2.0 * kPi);
    r.radius = rad(rng);
    std::uniform_int_distribution<int> nf(1, 2);
    int count = nf(rng);
    double budget = eps_total;
    for (int i = 0; i < count; ++i) {
        std::uniform_int_distribution<int> fr(2, max_frequency);
        PerturbationMode mode;
        mode.frequency = fr(rng);
        // keep sum of eps * (f^2 - 1) below 1/2 so min lambda > R/2
        double cap = budget / (count * (mode.frequency * mode.frequency - 1));
        mode.amplitude = cap * (0.2 + 0.8 * unit(rng));
        mode.phase = ph(rng);
        r.modes.push_back(mode);
    }
    return r;
}

}  // namespace suppflow
