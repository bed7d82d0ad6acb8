#include <doctest.h>

#include <cmath>
#include <numbers>

#include "arcspect/errors.hpp"
#include "arcspect/field.hpp"
#include "arcspect/specfun.hpp"

using namespace arcspect;
using namespace arcspect::bem;

TEST_CASE("trigonometric upsampling is exact for band-limited data") {
    const int n = 32;
    CVector s(n);
    auto f = [](double t) { return cplx{std::cos(3 * t) + 0.5 * std::sin(7 * t), std::cos(2 * t)}; };
    for (int j = 0; j < n; ++j) s[j] = f(2 * std::numbers::pi * (j + 0.5) / n);
    const CVector up = upsample_periodic(s, 4);
    REQUIRE(up.size() == 4 * n);
    for (int l = 0; l < 4 * n; ++l) CHECK(std::abs(up[l] - f(2 * std::numbers::pi * (l + 0.5) / (4 * n))) < 1e-12);
}

TEST_CASE("bounding grid") {
    const auto shape = geometry::make_ellipse(0.8, 1.0);
    const auto g = bounding_grid(shape, 101, 0.5);
    CHECK(g.nx == 101);
    CHECK(g.x_max == doctest::Approx(shape.semi_major + 0.5));
    CHECK(g.y_min == doctest::Approx(-shape.semi_minor - 0.5));
}

TEST_CASE("Dirichlet disk field matches the Bessel mode") {
    const auto mesh = geometry::discretize(geometry::make_ellipse(0.0, 1.0), 128);
    SolveOptions opt;
    opt.sector = Parity::ee;
    const double j21 = specfun::bessel_j_zero(2, 1);
    const auto r = find_resonance(mesh, ClosedDirichlet{1.0}, {j21, 0.0}, opt);
    const auto grid = bounding_grid(mesh.shape, 61, 0.0);
    FieldOptions fo;
    fo.interior_only = true;
    const auto field = evaluate_field(mesh, ClosedDirichlet{1.0}, r, grid, fo);
    double norm = 0.0, ref = 0.0;
    cplx cross{};
    for (int j = 0; j < grid.ny; ++j) {
        for (int i = 0; i < grid.nx; ++i) {
            const auto k = field.index(i, j);
            if (field.mask[k] != Region::inside) continue;
            const double x = grid.x(i), y = grid.y(j);
            const double u = specfun::cyl_bessel(specfun::BesselKind::J, 2, {j21 * std::hypot(x, y), 0.0}).real() *
                             std::cos(2 * std::atan2(y, x));
            norm += std::norm(field.values[k]);
            ref += u * u;
            cross += field.values[k] * u;
        }
    }
    CHECK(norm * field.cell_area() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::abs(cross) / std::sqrt(norm * ref) > 0.9999);
}

TEST_CASE("open disk field continues across the boundary") {
    const auto mesh = geometry::discretize(geometry::make_ellipse(0.0, 1.0), 128);
    SolveOptions opt;
    opt.sector = Parity::eo;
    const auto k = circle_resonance(3.3, 3, 2, Polarization::TM);
    const auto r = find_resonance(mesh, OpenDielectric{3.3}, k, opt);
    const double t = 0.3;
    std::vector<geometry::Vec2> pts{{0.97 * std::cos(t), 0.97 * std::sin(t)}, {1.03 * std::cos(t), 1.03 * std::sin(t)},
                                    {0.5, 0.1}};
    const auto v = evaluate_points(mesh, OpenDielectric{3.3}, r, pts);
    CHECK(v.regions[0] == Region::inside);
    CHECK(v.regions[1] == Region::outside);
    // disk mode: interior J_3(n k r), exterior H_3(k r) with matched values at r = 1
    const cplx ji = specfun::cyl_bessel(specfun::BesselKind::J, 3, 3.3 * r.k * 0.97);
    const cplx ho = specfun::hankel1(3, r.k * 1.03).value;
    const cplx scale_in = v.values[0] / ji, scale_out = v.values[1] / ho;
    const cplx jb = specfun::cyl_bessel(specfun::BesselKind::J, 3, 3.3 * r.k), hb = specfun::hankel1(3, r.k).value;
    CHECK(std::abs(scale_in * jb - scale_out * hb) < 1e-3 * std::abs(scale_in * jb));
}

TEST_CASE("field input checks") {
    const auto mesh = geometry::discretize(geometry::make_ellipse(0.0, 1.0), 64);
    Resonance r;
    r.k = {3.0, -0.01};
    r.boundary_psi = CVector::Ones(10);
    r.boundary_dpsi = CVector::Ones(10);
    CHECK_THROWS_AS(evaluate_field(mesh, OpenDielectric{3.3}, r, bounding_grid(mesh.shape, 11)), DomainError);
}
