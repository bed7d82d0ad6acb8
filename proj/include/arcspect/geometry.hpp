#pragma once

// Elliptical cavity boundaries and their discretisation.
//
// Shapes follow the constant-area convention a*b = R^2, so the eccentricity
// e = sqrt(1 - (b/a)^2) is the only shape parameter and R fixes the length
// unit.

#include <array>
#include <vector>

namespace arcspect::geometry {

struct EllipseShape {
    double eccentricity = 0.0;
    double scale = 1.0;  // R = sqrt(a b)
    double semi_major = 1.0;
    double semi_minor = 1.0;
};

/// Throws DomainError unless 0 <= e <= 0.95 and R > 0.
EllipseShape make_ellipse(double eccentricity, double scale);

using Vec2 = std::array<double, 2>;

/// Boundary sampled at the midpoints of N elements of equal arclength,
/// starting from the positive x axis and running counter-clockwise.
///
/// Node j sits at arclength s_j = (j + 1/2) L / N. The equal-arclength
/// parameter sigma = 2 pi s / L turns the boundary into a smooth 2 pi-periodic
/// curve with |dx/dsigma| = L / (2 pi), which the BEM quadrature relies on.
struct BoundaryMesh {
    EllipseShape shape;
    int node_count = 0;
    double perimeter = 0.0;
    std::vector<Vec2> position;
    std::vector<Vec2> normal;  // outward unit normal
    std::vector<double> curvature;
    std::vector<double> weight;      // element length, L / N
    std::vector<double> arclength;   // s_j
    std::vector<double> parameter;   // polar-type angle t_j of (a cos t, b sin t)

    double element_length() const { return perimeter / node_count; }
    /// dx/dsigma magnitude of the equal-arclength parametrisation.
    double speed() const;
};

/// Throws DomainError for N < 64 or odd N.
BoundaryMesh discretize(const EllipseShape& shape, int node_count);

/// Perimeter by adaptive Gauss-Kronrod quadrature of the ellipse speed.
double ellipse_perimeter(const EllipseShape& shape);

/// Point on the ellipse at parameter t together with its outward normal and
/// curvature. Used for refinement and for trigonometric resampling.
struct BoundaryPoint {
    Vec2 position;
    Vec2 normal;
    double curvature;
};
BoundaryPoint ellipse_point(const EllipseShape& shape, double t);

/// True if (x, y) lies strictly inside the ellipse.
bool inside(const EllipseShape& shape, double x, double y);

/// Node permutations for the reflections y -> -y and x -> -x. Requires
/// N divisible by 4 so the node set maps onto itself.
int reflect_y_index(int node, int node_count);  // mirror across the x axis
int reflect_x_index(int node, int node_count);  // mirror across the y axis

}  // namespace arcspect::geometry
