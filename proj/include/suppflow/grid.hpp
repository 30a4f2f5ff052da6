#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace suppflow {

enum class GridKind { Circle, Axisymmetric };

// Discretized parameter domain for S^n: the full circle (n = 1, periodic in
// [0, 2pi)) or the polar angle of an axisymmetric hypersurface (n >= 2,
// cell-centered nodes in (0, pi) so cot(theta) stays finite).
struct SphereGrid {
    int dimension = 1;  // n, the sphere dimension (ambient R^{n+1})
    GridKind kind = GridKind::Circle;
    int resolution = 0;                    // m, node count
    std::vector<double> node_angles;       // theta_j, strictly increasing
    std::vector<double> quadrature_weights;  // sum to |S^n|
    double spacing = 0.0;                  // h
    // circulant spectral differentiation kernels (circle kind only);
    // entry d is the coefficient of u_{j-d} in the derivative at node j
    std::vector<double> derivative_kernel1, derivative_kernel2;

    double theta(int j) const { return node_angles[j]; }
    double weight(int j) const { return quadrature_weights[j]; }
};

using GridPtr = std::shared_ptr<const SphereGrid>;

// |S^n| = 2 pi^{(n+1)/2} / Gamma((n+1)/2)
double sphere_area(int n);

// |S^{n-1}| factor absorbed into axisymmetric weights
GridPtr build_grid(int n, int m, GridKind kind);

struct ScalarField {
    GridPtr grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), values(grid->resolution, fill) {}
    ScalarField(GridPtr g, std::vector<double> v);

    int size() const { return static_cast<int>(values.size()); }
    double operator[](int j) const { return values[j]; }
    double& operator[](int j) { return values[j]; }
    double min() const;
    double max() const;
};

double integrate(const ScalarField& f);

// order 1 or 2. Circle grids use trigonometric (spectral) differentiation;
// axisymmetric grids use centered differences with even reflection at the poles.
ScalarField differentiate(const ScalarField& f, int order);

}  // namespace suppflow
