#pragma once

// Two-level symmetric non-Hermitian effective Hamiltonian
//   H = [[eps1 + g11, g'], [g', eps2 + g22]].

#include <array>
#include <complex>
#include <vector>

#include "arcspect/spectrum.hpp"

namespace arcspect::toymodel {

using cplx = std::complex<double>;
using Vec2c = std::array<cplx, 2>;

struct ToyModel {
    double eps1 = 0.0;
    double eps2 = 0.0;
    cplx gamma11{};
    cplx gamma22{};
    cplx gamma_prime{};
};

struct ToySpectrum {
    cplx nu_plus{};
    cplx nu_minus{};
    std::array<Vec2c, 2> right_vectors{};  // [0] for nu_plus
    std::array<Vec2c, 2> left_vectors{};   // equal to the right vectors (no conjugation)
    std::array<cplx, 2> c_norms{};         // v.v of the unit-norm eigenvectors
    bool exceptional = false;
};

/// Closed-form eigenvalues nu = mean +- sqrt(disc)/2 with
/// disc = (nu1 - nu2)^2 + 4 g'^2. Eigenvectors are c-normalised (v.v = 1)
/// unless the c-norm is below 1e-10, in which case they keep unit
/// Euclidean norm. `exceptional` is set when |disc| < 1e-10.
ToySpectrum eigensystem(const ToyModel& m);

enum class Regime { RealCoupling, ImaginaryCoupling, ComplexCoupling };
const char* regime_name(Regime r);

/// DomainError for g' = 0 or tol <= 0.
Regime classify_regime(cplx gamma_prime, double tol = 1e-9);

/// |Re nu+ - Re nu-|. With assume_im_equal the model must satisfy
/// |Im g11 - Im g22| < 0.05 |g'| (AssumptionViolated otherwise).
double gap(const ToyModel& m, bool assume_im_equal = false);

struct ToyFit {
    std::vector<double> e;
    std::vector<double> re_gamma11, re_gamma22;  // Lamb shifts
    std::vector<double> im_gamma11, im_gamma22;  // -omega/2
    double gamma_prime_est = 0.0;                // gap_min / 2
    double residual = 0.0;                       // rms(model - observed gap) over the window
    double window_lo = 0.0;
    double window_hi = 0.0;
    double center = 0.0;  // fitted centre of the hyperbola
    double slope = 0.0;   // fitted detuning slope d(Delta)/de
    double self_energy_min_e = 0.0;  // argmin |Re g11 - Re g22|
};

/// Extracts self-energies from the Lamb-shift curves and widths, and fits
/// the avoided crossing with a constant real coupling: the observed Re gap
/// over [e_C - half_window, e_C + half_window] is compared with
///   sqrt(s^2 (e - e0)^2 + 4 g'^2),  g' = gap_min / 2,
/// where slope s and centre e0 are least-squares fitted.
/// Throws NoArc if the trajectories cross, GridMismatch on grid problems.
ToyFit fit_from_data(const spectrum::LambCurve& l1, const spectrum::LambCurve& l2,
                     const spectrum::Trajectory& t1, const spectrum::Trajectory& t2,
                     const spectrum::ArcSummary& arc, double half_window = 0.015);

}  // namespace arcspect::toymodel
