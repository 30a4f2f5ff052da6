#pragma once

#include <string>
#include <vector>

#include "suppflow/body.hpp"
#include "suppflow/curvature.hpp"
#include "suppflow/forcing.hpp"

namespace suppflow {

enum class OrliczKind { Power, Linear, Tabulated };

// Convex, strictly increasing, phi(0) = 0, phi(1) = 1.
struct OrliczFunction {
    OrliczKind kind = OrliczKind::Linear;
    double p = 1.0;                                 // power kind, p >= 1
    std::vector<std::pair<double, double>> table;   // tabulated kind, sorted in x

    double operator()(double x) const;
    double left_derivative_at_1() const;
};

OrliczFunction orlicz_power(double p);
OrliczFunction orlicz_linear();

// W_F(K) = 1/(k+1) * int u F^k dx; requires a divergence-free-eligible F.
double modified_quermassintegral(const ConvexBodyState& body, const CurvatureSpec& spec);

// U = int int_eps^u phi^{-k/beta}(x, s) ds dx for the phi(nu, u) forcing family.
double u_potential(const ConvexBodyState& body, const ForcingSpec& forcing, double beta,
                   int k, double eps_floor);

// V = int int_eps^rho phi_hat^{n/beta}(xi, s) s^n ds dxi, computed by pullback
// through the reverse Gauss-map Jacobian.
double v_potential(const ConvexBodyState& body, const ForcingSpec& forcing, double beta,
                   double eps_floor);

// Per-node solution lambda of phi1(uK/lambda) + eps * phi2(uL/lambda) = 1.
ScalarField orlicz_combination(const ScalarField& uK, const ScalarField& uL, double eps,
                               const OrliczFunction& phi1, const OrliczFunction& phi2);

// Integral representation int uK/(phi1)'_l(1) phi2(uL/uK) F^k(K) dx.
double orlicz_mixed_quermassintegral(const ConvexBodyState& bodyK,
                                     const ConvexBodyState& bodyL,
                                     const CurvatureSpec& spec, const OrliczFunction& phi1,
                                     const OrliczFunction& phi2);

// Unnormalized L^p representation: W_{p,F}(K, L) = int uL^p uK^{1-p} F^k(K) dx.
double lp_mixed_quermassintegral(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                                 const CurvatureSpec& spec, double p);

struct VariationalReport {
    std::vector<double> eps_list;
    std::vector<double> quotients;
    double integral = 0.0;       // integral representation
    double extrapolated = 0.0;   // first-order Richardson limit of the quotients
    double order = 0.0;          // empirical convergence order in eps
    std::vector<std::string> failures;  // combinations failing verify_body
};

// Forward difference quotients of W_F along the Orlicz combination against
// the integral representation.
VariationalReport variational_check(const ConvexBodyState& bodyK,
                                    const ConvexBodyState& bodyL,
                                    const CurvatureSpec& spec, const OrliczFunction& phi1,
                                    const OrliczFunction& phi2,
                                    const std::vector<double>& eps_list);

// q-th dual volume (1/q) int rho^q dxi, log integrand at q = 0.
double dual_volume(const ConvexBodyState& body, double q);

// V_tilde_{p,q}(K, L, B^{n+1}) = int uL^p uK^{-p} rhoK^q dxi.
double lp_dual_mixed_volume(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                            double p, double q);

// dS_{phi,F}(K, x) = u phi(1/u) F^k dx density.
ScalarField surface_measure_density(const ConvexBodyState& body, const CurvatureSpec& spec,
                                    const OrliczFunction& phi);

struct MarginRow {
    std::string name;
    double margin = 0.0;
    bool pass = false;
};

// W_{p,F}(L, K) - p W_F(K) - (k+1-p) W_F(L), p > k+1.
MarginRow lp_mixed_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                         const CurvatureSpec& spec, double p, double tol = 1e-6);
// (1/p) int u^p dx + (1/(k+1) - 1/p)|S^n| - W_F(K), p >= k+1.
MarginRow power_integral_margin(const ConvexBodyState& body, const CurvatureSpec& spec, double p,
                         double tol = 1e-6);
// V_tilde_{p,q}(K,L,B) - p V_tilde_q(L) - (q-p) V_tilde_q(K), p > q, pq != 0.
MarginRow dual_mixed_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                          double p, double q, double tol = 1e-6);
// q = n+1 specialization of the above (L^p Minkowski type), p > n+1.
MarginRow lp_minkowski_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                          double p, double tol = 1e-6);
// int int_{uL}^{uK} phi^{-k/beta} ds dx - (W_F(K) - W_F(L)) where L solves the
// stationary equation of the forcing's flow.
MarginRow stationary_potential_margin(const ConvexBodyState& bodyK, const ConvexBodyState& bodyL,
                         const ForcingSpec& forcing, const CurvatureSpec& spec, double beta,
                         double tol = 1e-6);

}  // namespace suppflow
