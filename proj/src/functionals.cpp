#include "suppflow/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace suppflow {

namespace {

// adaptive Simpson on [a, b]
double simpson_rec(const std::function<double(double)>& f, double a, double fa, double b,
                   double fb, double fm, double whole, double tol, int depth) {
    double m = 0.5 * (a + b);
    double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    double flm = f(lm), frm = f(rm);
    double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return simpson_rec(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-10) {
    if (b <= a) return 0.0;
    double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, fa, b, fb, fm, whole, tol, 40);
}

void require_same_grid(const ConvexBodyState& a, const ConvexBodyState& b) {
    if (a.u.grid != b.u.grid && a.u.size() != b.u.size())
        throw std::invalid_argument("functionals: grid mismatch");
}

double xi_angle_of(const ConvexBodyState& body, int j) {
    return std::atan2(body.embedding[j][1], body.embedding[j][0]);
}

}  // namespace

double OrliczFunction::operator()(double x) const {
    switch (kind) {
        case OrliczKind::Linear:
            return x;
        case OrliczKind::Power:
            return std::pow(x, p);
        case OrliczKind::Tabulated: {
            if (x <= table.front().first) return table.front().second;
            if (x >= table.back().first) {
                // extend linearly past the table with the last slope
                auto& b = table[table.size() - 2];
                auto& e = table.back();
                return e.second + (x - e.first) * (e.second - b.second) / (e.first - b.first);
            }
            auto it = std::upper_bound(table.begin(), table.end(), std::make_pair(x, 0.0));
            auto lo = std::prev(it);
            double t = (x - lo->first) / (it->first - lo->first);
            return (1.0 - t) * lo->second + t * it->second;
        }
    }
    throw std::logic_error("OrliczFunction: unknown kind");
}

double OrliczFunction::left_derivative_at_1() const {
    switch (kind) {
        case OrliczKind::Linear:
            return 1.0;
        case OrliczKind::Power:
            return p;
        case OrliczKind::Tabulated: {
            double h = 1e-7;
            return ((*this)(1.0) - (*this)(1.0 - h)) / h;
        }
    }
    throw std::logic_error("OrliczFunction: unknown kind");
}

OrliczFunction orlicz_power(double p) {
    if (p < 1.0) throw std::invalid_argument("orlicz_power: need p >= 1");
    OrliczFunction f;
    f.kind = OrliczKind::Power;
    f.p = p;
    return f;
}

OrliczFunction orlicz_linear() { return OrliczFunction{}; }

double modified_quermassintegral(const ConvexBodyState& body, const CurvatureSpec& spec) {
    if (!divergence_free_eligible(spec))
        throw std::invalid_argument(
            "modified_quermassintegral: curvature spec is not divergence-free eligible");
    const int k = spec.functional_power();
    ScalarField fk = eval_F_power(spec, body);
    ScalarField integrand(body.u.grid);
    for (int j = 0; j < integrand.size(); ++j) integrand[j] = body.u[j] * fk[j];
    return integrate(integrand) / (k + 1);
}

double u_potential(const ConvexBodyState& body, const ForcingSpec& forcing, double beta,
                   int k, double eps_floor) {
    if (forcing.kind == ForcingKind::PsiURho)
        throw std::invalid_argument("u_potential: forcing must be of the phi(nu,u) family");
    if (!(eps_floor > 0.0) || eps_floor > body.u.min())
        throw std::invalid_argument("u_potential: eps_floor must lie in (0, min u]");
    const auto& g = body.grid();
    double total = 0.0;
    for (int j = 0; j < body.u.size(); ++j) {
        double th = g.node_angles[j];
        auto integrand = [&](double s) {
            return std::pow(phi_nu_u(forcing, th, s), -static_cast<double>(k) / beta);
        };
        total += g.quadrature_weights[j] * adaptive_simpson(integrand, eps_floor, body.u[j]);
    }
    return total;
}

double v_potential(const ConvexBodyState& body, const ForcingSpec& forcing, double beta,
                   double eps_floor) {
    if (forcing.kind != ForcingKind::Composite)
        throw std::invalid_argument("v_potential: forcing must be of composite kind");
    if (!(eps_floor > 0.0) || eps_floor > body.rho.min())
        throw std::invalid_argument("v_potential: eps_floor must lie in (0, min rho]");
    const auto& g = body.grid();
    const int n = g.dimension;
    ScalarField jac = gauss_jacobian(body);
    double total = 0.0;
    for (int j = 0; j < body.u.size(); ++j) {
        double xi = xi_angle_of(body, j);
        auto integrand = [&](double s) {
            return std::pow(phi_hat(forcing, xi, s), static_cast<double>(n) / beta) *
                   std::pow(s, n);
        };
        total += g.quadrature_weights[j] * jac[j] *
                 adaptive_simpson(integrand, eps_floor, body.rho[j]);
    }
    return total;
}

ScalarField orlicz_combination(const ScalarField& uK, const ScalarField& uL, double eps,
                               const OrliczFunction& phi1, const OrliczFunction& phi2) {
    if (uK.size() != uL.size())
        throw std::invalid_argument("orlicz_combination: grid mismatch");
    ScalarField out(uK.grid);
    for (int j = 0; j < uK.size(); ++j) {
        if (!(uK[j] > 0.0)) throw std::invalid_argument("orlicz_combination: uK must be > 0");
        if (eps == 0.0) {
            out[j] = uK[j];
            continue;
        }
        auto h = [&](double lam) { return phi1(uK[j] / lam) + eps * phi2(uL[j] / lam) - 1.0; };
        // h is decreasing in lambda; h(uK) >= 0
        double lo = uK[j], hi = uK[j] + eps * uL[j] + uK[j];
        while (h(hi) > 0.0) hi *= 2.0;
        for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
            double mid = 0.5 * (lo + hi);
            (h(mid) > 0.0 ? lo : hi) = mid;
        }
        double lam = 0.5 * (lo + hi);
        // Newton polish on the bracketed root
        for (int it = 0; it < 3; ++it) {
            double d = 1e-8 * lam;
            double slope = (h(lam + d) - h(lam - d)) / (2.0 * d);
            if (slope == 0.0) break;
            double next = lam - h(lam) / slope;
            if (next > 0.0) lam = next;
        }
        out[j] = lam;
    }
    return out;
}

double orlicz_mixed_quermassintegral(const ConvexBodyState& bodyK,
                                     const ConvexBodyState& bodyL,
                                     const CurvatureSpec& spec, const OrliczFunction& phi1,
                                     const OrliczFunction& phi2) {
    if (!divergence_free_eligible(spec))
        throw std::invalid_argument(
            "orlicz_mixed_quermassintegral: curvature spec not eligible");
    require_same_grid(bodyK, bodyL);
    ScalarField fk = eval_F_power(spec, bodyK);
    double dl = phi1.left_derivative_at_1();
    ScalarField integrand(bodyK.u.grid);
    for (int j = 0; j < integrand.size(); ++j)
        integrand[j] = bodyK.u[j] / dl * phi2(bodyL.u[j] / bodyK.u[j]) * fk[j];
    return integrate(integrand);
}

double lp_mixed_quermassintegral(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                                 const CurvatureSpec& spec, double p) {
    require_same_grid(bodyK, bodyL);
    ScalarField fk = eval_F_power(spec, bodyK);
    ScalarField integrand(bodyK.u.grid);
    for (int j = 0; j < integrand.size(); ++j)
        integrand[j] = std::pow(bodyL.u[j], p) * std::pow(bodyK.u[j], 1.0 - p) * fk[j];
    return integrate(integrand);
}

VariationalReport variational_check(const ConvexBodyState& bodyK,
                                    const ConvexBodyState& bodyL,
                                    const CurvatureSpec& spec, const OrliczFunction& phi1,
                                    const OrliczFunction& phi2,
                                    const std::vector<double>& eps_list) {
    VariationalReport rep;
    rep.eps_list = eps_list;
    rep.integral = orlicz_mixed_quermassintegral(bodyK, bodyL, spec, phi1, phi2);
    double wK = modified_quermassintegral(bodyK, spec);
    for (double eps : eps_list) {
        ScalarField u = orlicz_combination(bodyK.u, bodyL.u, eps, phi1, phi2);
        ConvexBodyState comb = body_from_support(std::move(u), false);
        auto verdict = verify_body(comb);
        if (!verdict.all_pass())
            rep.failures.push_back("combination at eps=" + std::to_string(eps) +
                                   " fails body verification");
        rep.quotients.push_back((modified_quermassintegral(comb, spec) - wK) / eps);
    }
    const size_t nq = rep.quotients.size();
    if (nq >= 2) {
        // eps_list is decreasing; last quotient is the finest
        double e1 = std::abs(rep.quotients[nq - 2] - rep.integral);
        double e2 = std::abs(rep.quotients[nq - 1] - rep.integral);
        double r = eps_list[nq - 2] / eps_list[nq - 1];
        rep.order = (e2 > 0.0) ? std::log(e1 / e2) / std::log(r) : 1.0;
        rep.extrapolated =
            (r * rep.quotients[nq - 1] - rep.quotients[nq - 2]) / (r - 1.0);
    } else if (nq == 1) {
        rep.extrapolated = rep.quotients[0];
    }
    return rep;
}

double dual_volume(const ConvexBodyState& body, double q) {
    ScalarField jac = gauss_jacobian(body);
    ScalarField integrand(body.u.grid);
    for (int j = 0; j < integrand.size(); ++j) {
        double r = body.rho[j];
        integrand[j] = jac[j] * (q == 0.0 ? std::log(r) : std::pow(r, q));
    }
    double v = integrate(integrand);
    return q == 0.0 ? v : v / q;
}

double lp_dual_mixed_volume(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                            double p, double q) {
    require_same_grid(bodyK, bodyL);
    ScalarField jac = gauss_jacobian(bodyK);
    ScalarField integrand(bodyK.u.grid);
    for (int j = 0; j < integrand.size(); ++j)
        integrand[j] = jac[j] * std::pow(bodyL.u[j] / bodyK.u[j], p) *
                       std::pow(bodyK.rho[j], q);
    return integrate(integrand);
}

ScalarField surface_measure_density(const ConvexBodyState& body, const CurvatureSpec& spec,
                                    const OrliczFunction& phi) {
    if (!divergence_free_eligible(spec))
        throw std::invalid_argument("surface_measure_density: curvature spec not eligible");
    ScalarField fk = eval_F_power(spec, body);
    ScalarField out(body.u.grid);
    for (int j = 0; j < out.size(); ++j)
        out[j] = body.u[j] * phi(1.0 / body.u[j]) * fk[j];
    return out;
}

MarginRow lp_mixed_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                         const CurvatureSpec& spec, double p, double tol) {
    const int k = spec.functional_power();
    if (!(p > k + 1))
        throw std::invalid_argument("lp_mixed_margin: requires p > k + 1");
    double lhs = lp_mixed_quermassintegral(bodyL, bodyK, spec, p);
    double rhs = p * modified_quermassintegral(bodyK, spec) +
                 (k + 1 - p) * modified_quermassintegral(bodyL, spec);
    double m = lhs - rhs;
    return {"lp_mixed", m, m >= -tol};
}

MarginRow power_integral_margin(const ConvexBodyState& body, const CurvatureSpec& spec, double p,
                         double tol) {
    const int k = spec.functional_power();
    if (!(p >= k + 1))
        throw std::invalid_argument("power_integral_margin: requires p >= k + 1");
    ScalarField up(body.u.grid);
    for (int j = 0; j < up.size(); ++j) up[j] = std::pow(body.u[j], p);
    double rhs = integrate(up) / p +
                 (1.0 / (k + 1) - 1.0 / p) * sphere_area(body.dimension());
    double m = rhs - modified_quermassintegral(body, spec);
    return {"power_integral", m, m >= -tol};
}

MarginRow dual_mixed_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                          double p, double q, double tol) {
    if (!(p > q) || p == 0.0 || q == 0.0)
        throw std::invalid_argument("dual_mixed_margin: requires p > q, pq != 0");
    double m = lp_dual_mixed_volume(bodyK, bodyL, p, q) - p * dual_volume(bodyL, q) -
               (q - p) * dual_volume(bodyK, q);
    return {"dual_mixed", m, m >= -tol};
}

MarginRow lp_minkowski_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                          double p, double tol) {
    const int n = bodyK.dimension();
    if (!(p > n + 1))
        throw std::invalid_argument("lp_minkowski_margin: requires p > n + 1");
    MarginRow row = dual_mixed_margin(bodyK, bodyL, p, n + 1, tol);
    row.name = "lp_minkowski";
    return row;
}

MarginRow stationary_potential_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                         const ForcingSpec& forcing, const CurvatureSpec& spec, double beta,
                         double tol) {
    require_same_grid(bodyK, bodyL);
    const int k = spec.functional_power();
    const auto& g = bodyK.grid();
    double rhs = 0.0;
    for (int j = 0; j < bodyK.u.size(); ++j) {
        double th = g.node_angles[j];
        auto integrand = [&](double s) {
            return std::pow(phi_nu_u(forcing, th, s), -static_cast<double>(k) / beta);
        };
        double lo = bodyL.u[j], hi = bodyK.u[j];
        double sign = 1.0;
        if (hi < lo) {
            std::swap(lo, hi);
            sign = -1.0;
        }
        rhs += sign * g.quadrature_weights[j] * adaptive_simpson(integrand, lo, hi);
    }
    double m = rhs - (modified_quermassintegral(bodyK, spec) -
                      modified_quermassintegral(bodyL, spec));
    return {"stationary_potential", m, m >= -tol};
}

}  // namespace suppflow
