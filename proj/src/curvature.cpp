#include "suppflow/curvature.hpp"

#include <cmath>
#include <stdexcept>

namespace suppflow {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

// elementary symmetric polynomial sigma_k
double sigma(const std::vector<double>& lam, int k) {
    const int n = static_cast<int>(lam.size());
    if (k == 0) return 1.0;
    if (k > n) return 0.0;
    // e[j] after processing all entries
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::min(k, i + 1); j >= 1; --j) e[j] += lam[i] * e[j - 1];
    return e[k];
}

// sigma_{k-1}(lambda | i)
double sigma_minus(const std::vector<double>& lam, int k, int skip) {
    std::vector<double> rest;
    rest.reserve(lam.size() - 1);
    for (size_t i = 0; i < lam.size(); ++i)
        if (static_cast<int>(i) != skip) rest.push_back(lam[i]);
    return sigma(rest, k - 1);
}

void require_positive(const std::vector<double>& radii) {
    for (double l : radii)
        if (!(l > 0.0)) throw std::invalid_argument("curvature: non-positive principal radius");
}

}  // namespace

CurvatureSpec sigma_k_root(int k, int n) {
    if (k < 1 || k > n) throw std::invalid_argument("sigma_k_root: need 1 <= k <= n");
    return {CurvatureKind::SigmaKRoot, k, 0, n};
}

CurvatureSpec gauss_curvature(int n) { return {CurvatureKind::Gauss, n, 0, n}; }

CurvatureSpec sigma_quotient(int k, int l, int n) {
    if (!(1 <= l && l < k && k <= n))
        throw std::invalid_argument("sigma_quotient: need 1 <= l < k <= n");
    return {CurvatureKind::SigmaQuotient, k, l, n};
}

const std::vector<ScalarField>& principal_radii(const ConvexBodyState& body) {
    return body.radii;
}

double eval_F(const CurvatureSpec& spec, const std::vector<double>& radii) {
    require_positive(radii);
    const int n = spec.n;
    switch (spec.kind) {
        case CurvatureKind::SigmaKRoot:
            return std::pow(sigma(radii, spec.k) / binom(n, spec.k), 1.0 / spec.k);
        case CurvatureKind::Gauss:
            return std::pow(sigma(radii, n), 1.0 / n);
        case CurvatureKind::SigmaQuotient: {
            double q = sigma(radii, spec.k) / sigma(radii, spec.l) * binom(n, spec.l) /
                       binom(n, spec.k);
            return std::pow(q, 1.0 / (spec.k - spec.l));
        }
    }
    throw std::logic_error("eval_F: unknown kind");
}

ScalarField eval_F(const CurvatureSpec& spec, const ConvexBodyState& body) {
    ScalarField out(body.u.grid);
    for (int j = 0; j < out.size(); ++j) out[j] = eval_F(spec, body.radii_at(j));
    return out;
}

std::vector<double> grad_F(const CurvatureSpec& spec, const std::vector<double>& radii) {
    require_positive(radii);
    const int n = static_cast<int>(radii.size());
    std::vector<double> g(n);
    const double F = eval_F(spec, radii);
    switch (spec.kind) {
        case CurvatureKind::SigmaKRoot:
        case CurvatureKind::Gauss: {
            int k = spec.kind == CurvatureKind::Gauss ? spec.n : spec.k;
            double sk = sigma(radii, k);
            for (int i = 0; i < n; ++i)
                g[i] = F / k * sigma_minus(radii, k, i) / sk;
            break;
        }
        case CurvatureKind::SigmaQuotient: {
            double sk = sigma(radii, spec.k), sl = sigma(radii, spec.l);
            for (int i = 0; i < n; ++i)
                g[i] = F / (spec.k - spec.l) *
                       (sigma_minus(radii, spec.k, i) / sk - sigma_minus(radii, spec.l, i) / sl);
            break;
        }
    }
    return g;
}

double eval_F_power(const CurvatureSpec& spec, const std::vector<double>& radii) {
    require_positive(radii);
    if (spec.kind == CurvatureKind::Gauss) return sigma(radii, spec.n);
    if (spec.kind == CurvatureKind::SigmaKRoot)
        return sigma(radii, spec.k) / binom(spec.n, spec.k);
    return std::pow(eval_F(spec, radii), spec.k - spec.l);
}

ScalarField eval_F_power(const CurvatureSpec& spec, const ConvexBodyState& body) {
    ScalarField out(body.u.grid);
    for (int j = 0; j < out.size(); ++j) out[j] = eval_F_power(spec, body.radii_at(j));
    return out;
}

ConcavityReport inverse_concavity_probe(const CurvatureSpec& spec, int sample_count,
                                        unsigned seed) {
    if (sample_count < 100)
        throw std::invalid_argument("inverse_concavity_probe: sample_count must be >= 100");
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(0.05, 10.0);
    auto dual = [&](const std::vector<double>& kappa) {
        std::vector<double> inv(kappa.size());
        for (size_t i = 0; i < kappa.size(); ++i) inv[i] = 1.0 / kappa[i];
        return 1.0 / eval_F(spec, inv);
    };
    ConcavityReport rep;
    rep.samples = sample_count;
    rep.worst_violation = 0.0;
    for (int s = 0; s < sample_count; ++s) {
        std::vector<double> a(spec.n), b(spec.n), mid(spec.n);
        for (int i = 0; i < spec.n; ++i) {
            a[i] = dist(rng);
            b[i] = dist(rng);
            mid[i] = 0.5 * (a[i] + b[i]);
        }
        double margin = dual(mid) - 0.5 * (dual(a) + dual(b));
        rep.worst_violation = std::min(rep.worst_violation, margin);
    }
    rep.pass = rep.worst_violation >= -1e-10;
    return rep;
}

bool divergence_free_eligible(const CurvatureSpec& spec) {
    return spec.kind == CurvatureKind::SigmaKRoot || spec.kind == CurvatureKind::Gauss;
}

}  // namespace suppflow
