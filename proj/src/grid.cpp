#include "suppflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

namespace suppflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

double sphere_area(int n) {
    return 2.0 * std::pow(kPi, 0.5 * (n + 1)) / std::tgamma(0.5 * (n + 1));
}

GridPtr build_grid(int n, int m, GridKind kind) {
    if (n < 1) throw std::invalid_argument("build_grid: dimension n must be >= 1");
    if (m < 8) throw std::invalid_argument("build_grid: resolution m must be >= 8");
    if (kind == GridKind::Circle && n != 1)
        throw std::invalid_argument("build_grid: circle kind requires n = 1");

    auto g = std::make_shared<SphereGrid>();
    g->dimension = n;
    g->kind = kind;
    g->resolution = m;
    g->node_angles.resize(m);
    g->quadrature_weights.resize(m);

    if (kind == GridKind::Circle) {
        if (m % 2 != 0)
            throw std::invalid_argument(
                "build_grid: circle kind requires an even resolution");
        g->spacing = 2.0 * kPi / m;
        for (int j = 0; j < m; ++j) {
            g->node_angles[j] = g->spacing * j;
            g->quadrature_weights[j] = g->spacing;
        }
        // closed-form trigonometric differentiation kernels (even m)
        g->derivative_kernel1.assign(m, 0.0);
        g->derivative_kernel2.assign(m, 0.0);
        for (int d = 1; d < m; ++d) {
            double sign = (d % 2 == 0) ? 1.0 : -1.0;
            double half = 0.5 * d * g->spacing;
            g->derivative_kernel1[d] = 0.5 * sign / std::tan(half);
            double s = std::sin(half);
            g->derivative_kernel2[d] = -sign / (2.0 * s * s);
        }
    } else {
        // Cell-centered midpoint rule against sin^{n-1}(theta) times |S^{n-1}|,
        // rescaled so constants integrate exactly.
        g->spacing = kPi / m;
        const double ring = sphere_area(n - 1);  // n = 1 gives |S^0| = 2
        double total = 0.0;
        for (int j = 0; j < m; ++j) {
            g->node_angles[j] = (j + 0.5) * g->spacing;
            double w = ring * g->spacing * std::pow(std::sin(g->node_angles[j]), n - 1);
            g->quadrature_weights[j] = w;
            total += w;
        }
        const double scale = sphere_area(n) / total;
        for (double& w : g->quadrature_weights) w *= scale;
    }
    return g;
}

ScalarField::ScalarField(GridPtr g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (static_cast<int>(values.size()) != grid->resolution)
        throw std::invalid_argument("ScalarField: value count does not match grid resolution");
}

double ScalarField::min() const { return *std::min_element(values.begin(), values.end()); }
double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

double integrate(const ScalarField& f) {
    double s = 0.0;
    for (int j = 0; j < f.size(); ++j) s += f.grid->quadrature_weights[j] * f.values[j];
    return s;
}

namespace {

// Trigonometric interpolation derivative applied as a circulant kernel.
// The sum runs over differences from the diagonal node: both kernels have
// the constant field in their null space, so constants map to exact zero.
std::vector<double> spectral_derivative(const SphereGrid& g,
                                        const std::vector<double>& u, int order) {
    const int m = static_cast<int>(u.size());
    const auto& ker = order == 1 ? g.derivative_kernel1 : g.derivative_kernel2;
    std::vector<double> out(m, 0.0);
    for (int j = 0; j < m; ++j) {
        double s = 0.0;
        for (int d = 1; d < m; ++d) s += ker[d] * (u[(j - d + m) % m] - u[j]);
        out[j] = s;
    }
    return out;
}

// Centered differences with even reflection across both poles.
std::vector<double> reflected_derivative(const std::vector<double>& u, double h, int order) {
    const int m = static_cast<int>(u.size());
    auto at = [&](int j) {
        if (j < 0) return u[-j - 1];
        if (j >= m) return u[2 * m - j - 1];
        return u[j];
    };
    std::vector<double> out(m);
    for (int j = 0; j < m; ++j) {
        if (order == 1)
            out[j] = (at(j + 1) - at(j - 1)) / (2.0 * h);
        else
            out[j] = (at(j + 1) - 2.0 * u[j] + at(j - 1)) / (h * h);
    }
    return out;
}

}  // namespace

ScalarField differentiate(const ScalarField& f, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("differentiate: order must be 1 or 2");
    ScalarField out(f.grid);
    if (f.grid->kind == GridKind::Circle)
        out.values = spectral_derivative(*f.grid, f.values, order);
    else
        out.values = reflected_derivative(f.values, f.grid->spacing, order);
    return out;
}

}  // namespace suppflow
