#include "arcspect/geometry.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "arcspect/errors.hpp"

namespace arcspect::geometry {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double speed_at(const EllipseShape& shape, double t) {
    return std::hypot(shape.semi_major * std::sin(t), shape.semi_minor * std::cos(t));
}

// Arclength from parameter t0 to t1 over a short interval; 30-point
// Gauss-Legendre is exact to rounding for the smooth speed function there.
double arc_piece(const EllipseShape& shape, double t0, double t1) {
    return boost::math::quadrature::gauss<double, 30>::integrate(
        [&](double t) { return speed_at(shape, t); }, t0, t1);
}

}  // namespace

EllipseShape make_ellipse(double eccentricity, double scale) {
    if (!(eccentricity >= 0.0 && eccentricity <= 0.95))
        throw DomainError("eccentricity must lie in [0, 0.95], got " + std::to_string(eccentricity));
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw DomainError("scale R must be positive");
    const double root = std::pow(1.0 - eccentricity * eccentricity, 0.25);
    return {eccentricity, scale, scale / root, scale * root};
}

double ellipse_perimeter(const EllipseShape& shape) {
    double error = 0.0;
    // a quarter by symmetry keeps the integrand free of the endpoint kinks
    const double quarter = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        [&](double t) { return speed_at(shape, t); }, 0.0, std::numbers::pi / 2, 20, 1e-14,
        &error);
    return 4.0 * quarter;
}

BoundaryPoint ellipse_point(const EllipseShape& shape, double t) {
    const double a = shape.semi_major;
    const double b = shape.semi_minor;
    const double c = std::cos(t);
    const double s = std::sin(t);
    const double sp = std::hypot(a * s, b * c);
    return {{a * c, b * s}, {b * c / sp, a * s / sp}, a * b / (sp * sp * sp)};
}

double BoundaryMesh::speed() const { return perimeter / kTwoPi; }

BoundaryMesh discretize(const EllipseShape& shape, int node_count) {
    if (node_count < 64) throw DomainError("boundary needs at least 64 nodes");
    if (node_count % 2 != 0) throw DomainError("boundary node count must be even");

    BoundaryMesh mesh;
    mesh.shape = shape;
    mesh.node_count = node_count;
    mesh.perimeter = ellipse_perimeter(shape);
    const auto n = static_cast<std::size_t>(node_count);
    mesh.position.resize(n);
    mesh.normal.resize(n);
    mesh.curvature.resize(n);
    mesh.weight.assign(n, mesh.perimeter / node_count);
    mesh.arclength.resize(n);
    mesh.parameter.resize(n);

    // invert s(t) node by node with Newton steps on the cumulative arclength
    double t_prev = 0.0;
    double s_prev = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double target = (static_cast<double>(j) + 0.5) * mesh.perimeter / node_count;
        double t = kTwoPi * target / mesh.perimeter;
        if (t < t_prev) t = t_prev;
        for (int it = 0; it < 60; ++it) {
            const double s = s_prev + arc_piece(shape, t_prev, t);
            const double step = (s - target) / speed_at(shape, t);
            t -= step;
            if (std::abs(step) < 1e-15) break;
        }
        s_prev += arc_piece(shape, t_prev, t);
        t_prev = t;
        const BoundaryPoint p = ellipse_point(shape, t);
        mesh.position[j] = p.position;
        mesh.normal[j] = p.normal;
        mesh.curvature[j] = p.curvature;
        mesh.arclength[j] = target;
        mesh.parameter[j] = t;
    }
    return mesh;
}

bool inside(const EllipseShape& shape, double x, double y) {
    const double u = x / shape.semi_major;
    const double v = y / shape.semi_minor;
    return u * u + v * v < 1.0;
}

int reflect_y_index(int node, int node_count) { return node_count - 1 - node; }

int reflect_x_index(int node, int node_count) {
    const int r = node_count / 2 - 1 - node;
    return r < 0 ? r + node_count : r;
}

}  // namespace arcspect::geometry
