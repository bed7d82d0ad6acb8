#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "arcspect/errors.hpp"
#include "arcspect/specfun.hpp"
#include "support/mp_bessel.hpp"

using namespace arcspect::specfun;

namespace {

double rel_err(cplx a, cplx b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

const std::vector<cplx> kArgs = {{0.3, 0.0},  {1.0, -0.2}, {4.5, -0.05}, {9.7, 0.3},
                                 {13.0, -0.4}, {17.5, -0.1}, {2.0, 1.5},  {24.0, -0.3},
                                 {31.0, -0.08}, {8.0, -1.5}};

}  // namespace

TEST_CASE("J and Y agree with the multiprecision series") {
    for (int m : {0, 1, 2, 3, 7, 12}) {
        for (cplx z : kArgs) {
            CAPTURE(m);
            CAPTURE(z);
            const cplx j = oracle::to_d(oracle::bessel_j(m, z));
            const cplx y = oracle::to_d(oracle::bessel_y(m, z));
            // absolute floor near zeros of the functions
            const double scale_j = std::max(std::abs(j), 1e-3);
            const double scale_y = std::max(std::abs(y), 1e-3);
            CHECK(std::abs(cyl_bessel(BesselKind::J, m, z) - j) / scale_j < 1e-11);
            CHECK(std::abs(cyl_bessel(BesselKind::Y, m, z) - y) / scale_y < 1e-11);
        }
    }
}

TEST_CASE("Wronskian and three-term recurrence") {
    for (cplx z : kArgs) {
        for (int m = 0; m < 20; ++m) {
            const cplx jm = cyl_bessel(BesselKind::J, m, z), jm1 = cyl_bessel(BesselKind::J, m + 1, z);
            const cplx ym = cyl_bessel(BesselKind::Y, m, z), ym1 = cyl_bessel(BesselKind::Y, m + 1, z);
            const cplx w = jm1 * ym - jm * ym1;
            CAPTURE(m);
            CAPTURE(z);
            CHECK(rel_err(w, 2.0 / (std::numbers::pi * z)) < 1e-10);
            if (m >= 1) {
                const cplx jp = cyl_bessel(BesselKind::J, m - 1, z);
                const cplx lhs = jp + jm1, rhs = 2.0 * m / z * jm;
                CHECK(std::abs(lhs - rhs) <= 1e-10 * (std::abs(jp) + std::abs(jm1) + std::abs(rhs)));
            }
        }
    }
}

TEST_CASE("Hankel derivative matches a central difference") {
    for (int m : {0, 3, 9}) {
        for (cplx z : {cplx{2.0, -0.1}, cplx{7.5, -0.3}, cplx{22.0, -0.05}}) {
            const auto h = hankel1(m, z);
            const double d = 1e-5;
            const cplx fd = (hankel1(m, z + d).value - hankel1(m, z - d).value) / (2 * d);
            CHECK(rel_err(h.derivative, fd) < 1e-7);
            const cplx expect = cyl_bessel(BesselKind::J, m, z) + cplx{0, 1} * cyl_bessel(BesselKind::Y, m, z);
            CHECK(rel_err(h.value, expect) < 1e-12);
        }
    }
}

TEST_CASE("Bessel zeros are roots and ordered") {
    for (int m : {0, 1, 3, 7, 15}) {
        double last = 0.0;
        for (int l = 1; l <= 6; ++l) {
            const double z = bessel_j_zero(m, l);
            CHECK(z > last + 1.0);
            // the oracle value at the zero is bounded by slope times tolerance
            CHECK(std::abs(oracle::to_d(oracle::bessel_j(m, {z, 0.0}))) < 1e-10);
            last = z;
        }
    }
    CHECK(bessel_j_zero(0, 1) == doctest::Approx(2.404825557695773).epsilon(1e-12));
    CHECK(bessel_j_zero(1, 1) == doctest::Approx(3.831705970207512).epsilon(1e-12));
}

TEST_CASE("Chebyshev line table reproduces direct evaluation") {
    for (cplx kappa : {cplx{3.3 * 4.8, -0.05}, cplx{5.0, -0.4}, cplx{1.2, 0.0}}) {
        const Bessel01Line line(kappa, 2.5);
        for (double d : {1e-4, 0.013, 0.2, 0.77, 1.5, 2.5}) {
            const auto a = line(d);
            const auto b = bessel01(kappa * d);
            CAPTURE(kappa);
            CAPTURE(d);
            CHECK(std::abs(a.j0 - b.j0) < 1e-12 * std::max(1.0, std::abs(b.j0)));
            CHECK(std::abs(a.j1 - b.j1) < 1e-12 * std::max(1.0, std::abs(b.j1)));
            CHECK(std::abs(a.y0 - b.y0) < 1e-12 * std::max(1.0, std::abs(b.y0)));
            CHECK(std::abs(a.y1 - b.y1) < 1e-12 * std::max(1.0, std::abs(b.y1)));
        }
    }
}

TEST_CASE("sequence evaluation matches single orders") {
    const cplx z{11.0, -0.2};
    std::vector<cplx> j(26), y(26);
    bessel_jy_sequence(25, z, j, y);
    for (int m = 0; m <= 25; ++m) {
        CHECK(rel_err(j[m], cyl_bessel(BesselKind::J, m, z)) < 1e-11);
        CHECK(rel_err(y[m], cyl_bessel(BesselKind::Y, m, z)) < 1e-11);
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(cyl_bessel(BesselKind::Y, 0, {0.0, 0.0}), arcspect::DomainError);
    CHECK_THROWS_AS(cyl_bessel(BesselKind::J, -1, {1.0, 0.0}), arcspect::DomainError);
    CHECK_THROWS_AS(cyl_bessel(BesselKind::J, 3, {2e4, 0.0}), arcspect::DomainError);
    CHECK_THROWS_AS(hankel1(0, {0.0, 0.0}), arcspect::DomainError);
    CHECK(cyl_bessel(BesselKind::J, 0, {0.0, 0.0}) == cplx{1.0, 0.0});
}
