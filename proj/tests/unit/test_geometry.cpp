#include <doctest.h>

#include <cmath>
#include <numbers>

#include "arcspect/errors.hpp"
#include "arcspect/geometry.hpp"

using namespace arcspect::geometry;

namespace {

// Gauss-Kummer series in h = ((a - b) / (a + b))^2.
double perimeter_series(double a, double b) {
    const double h = std::pow((a - b) / (a + b), 2);
    double sum = 1.0, coeff = 1.0, hp = 1.0;
    for (int n = 1; n < 200; ++n) {
        // binomial(1/2, n)^2
        coeff *= (0.5 - (n - 1)) / n;
        hp *= h;
        sum += coeff * coeff * hp;
    }
    return std::numbers::pi * (a + b) * sum;
}

}  // namespace

TEST_CASE("ellipse keeps area and eccentricity") {
    const auto s = make_ellipse(0.78, 1.3);
    CHECK(s.semi_major * s.semi_minor == doctest::Approx(1.69).epsilon(1e-14));
    CHECK(std::sqrt(1 - std::pow(s.semi_minor / s.semi_major, 2)) == doctest::Approx(0.78).epsilon(1e-14));
    CHECK_THROWS_AS(make_ellipse(0.96, 1.0), arcspect::DomainError);
    CHECK_THROWS_AS(make_ellipse(-0.1, 1.0), arcspect::DomainError);
    CHECK_THROWS_AS(make_ellipse(0.5, 0.0), arcspect::DomainError);
}

TEST_CASE("perimeter against the Gauss-Kummer series") {
    for (double e : {0.0, 0.3, 0.7, 0.81, 0.95}) {
        const auto s = make_ellipse(e, 1.0);
        CHECK(ellipse_perimeter(s) == doctest::Approx(perimeter_series(s.semi_major, s.semi_minor)).epsilon(1e-12));
    }
}

TEST_CASE("mesh curvature integral, area and equal spacing") {
    for (double e : {0.0, 0.5, 0.8}) {
        const auto s = make_ellipse(e, 1.0);
        const auto mesh = discretize(s, 256);
        double turning = 0.0, area = 0.0;
        for (int j = 0; j < mesh.node_count; ++j) {
            turning += mesh.curvature[j] * mesh.weight[j];
            const auto& x = mesh.position[j];
            const auto& nrm = mesh.normal[j];
            area += 0.5 * (x[0] * nrm[0] + x[1] * nrm[1]) * mesh.weight[j];
            CHECK(std::hypot(nrm[0], nrm[1]) == doctest::Approx(1.0).epsilon(1e-14));
        }
        CHECK(turning == doctest::Approx(2 * std::numbers::pi).epsilon(1e-10));
        CHECK(area == doctest::Approx(std::numbers::pi).epsilon(1e-10));
        for (int j = 0; j < mesh.node_count; ++j) {
            const auto& p = mesh.position[j];
            CHECK(std::pow(p[0] / s.semi_major, 2) + std::pow(p[1] / s.semi_minor, 2) ==
                  doctest::Approx(1.0).epsilon(1e-12));
            const auto q = ellipse_point(s, mesh.parameter[j]);
            CHECK(std::abs(q.position[0] - p[0]) < 1e-12);
            CHECK(q.curvature == doctest::Approx(mesh.curvature[j]).epsilon(1e-12));
        }
        // chords between neighbours are equal up to curvature effects
        const double h = mesh.element_length();
        for (int j = 0; j < mesh.node_count; ++j) {
            CHECK(mesh.arclength[j] == doctest::Approx((j + 0.5) * h).epsilon(1e-12));
        }
        CHECK(mesh.speed() == doctest::Approx(mesh.perimeter / (2 * std::numbers::pi)));
    }
}

TEST_CASE("reflections map the node set onto itself") {
    const auto mesh = discretize(make_ellipse(0.6, 1.0), 128);
    for (int j = 0; j < 128; ++j) {
        const int ry = reflect_y_index(j, 128), rx = reflect_x_index(j, 128);
        CHECK(mesh.position[ry][0] == doctest::Approx(mesh.position[j][0]));
        CHECK(mesh.position[ry][1] == doctest::Approx(-mesh.position[j][1]));
        CHECK(mesh.position[rx][0] == doctest::Approx(-mesh.position[j][0]));
        CHECK(mesh.position[rx][1] == doctest::Approx(mesh.position[j][1]));
        CHECK(reflect_y_index(ry, 128) == j);
    }
}

TEST_CASE("inside test and mesh errors") {
    const auto s = make_ellipse(0.8, 1.0);
    CHECK(inside(s, 0.0, 0.0));
    CHECK(inside(s, s.semi_major * 0.999, 0.0));
    CHECK_FALSE(inside(s, 0.0, s.semi_minor * 1.001));
    CHECK_THROWS_AS(discretize(s, 32), arcspect::DomainError);
    CHECK_THROWS_AS(discretize(s, 101), arcspect::DomainError);
}
