#pragma once

// Cylinder functions of integer order and complex argument.
//
// Evaluation strategy by region:
//   |z| <= 12                   ascending power series (double)
//   12 < |z| <= 20              the same series in long double
//   |z| >  max(20, 2m)          Hankel asymptotic expansion of order m
//   otherwise                   Miller downward recurrence for J_m, upward
//                               recurrence of the recessive Hankel function
//                               for Y_m
//
// All functions are pure and thread-safe.

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace arcspect::specfun {

using cplx = std::complex<double>;

enum class BesselKind { J, Y };

/// Value of a cylinder function together with its z-derivative.
struct CylinderEval {
    int order = 0;
    cplx argument;
    cplx value;
    cplx derivative;
};

/// J_m(z) or Y_m(z). Throws DomainError for Y at z = 0 or outside the
/// supported range (|z| >= 1e4, order > 200, negative order).
cplx cyl_bessel(BesselKind kind, int order, cplx z);

/// H^(1)_m(z) and dH^(1)_m/dz. Requires z != 0 and Im z >= -50.
CylinderEval hankel1(int order, cplx z);

/// index-th positive zero of J_order, accurate to 1e-10 absolute.
double bessel_j_zero(int order, int index);

/// Orders 0 and 1 of J and Y in one pass; the BEM kernel hot path.
struct Bessel01 {
    cplx j0, j1, y0, y1;
};
Bessel01 bessel01(cplx z);

/// J0, J1, Y0, Y1 at z = kappa * d for real d in [0, d_max], interpolated
/// piecewise by Chebyshev series. The logarithmic and pole parts of Y are
/// split off analytically, so the interpolated functions are entire and the
/// table is accurate to about 1e-13 relative. Construction costs a few
/// hundred direct evaluations; lookups are cheap. Immutable after
/// construction.
class Bessel01Line {
public:
    Bessel01Line(cplx kappa, double d_max);
    /// Requires 0 < d <= d_max.
    Bessel01 operator()(double d) const;

private:
    static constexpr int kDegree = 16;
    cplx kappa_;
    cplx log_half_kappa_;
    double width_ = 1.0;
    int panels_ = 1;
    // per panel: kDegree coefficients for J0, J1, regular Y0, regular Y1
    std::vector<std::array<cplx, 4>> coeff_;
};

/// J_0..J_{max_order} and Y_0..Y_{max_order} at one argument. Spans must hold
/// max_order + 1 entries. Y is skipped when `y` is empty.
void bessel_jy_sequence(int max_order, cplx z, std::span<cplx> j, std::span<cplx> y);

}  // namespace arcspect::specfun
