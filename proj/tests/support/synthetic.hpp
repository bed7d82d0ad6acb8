#pragma once

// Trajectories generated from the two-level model with a known coupling,
// used to check the ARC detector and the toy fit against exact answers.

#include <vector>

#include "arcspect/spectrum.hpp"
#include "arcspect/toymodel.hpp"

namespace synthetic {

using cplx = std::complex<double>;
namespace sp = arcspect::spectrum;
namespace bem = arcspect::bem;

struct Pair {
    sp::Trajectory open1, open2, closed1, closed2;
};

inline bem::Resonance resonance_at(cplx k, int slot) {
    bem::Resonance r;
    r.k = k;
    r.mu = k.real();
    r.omega = -2.0 * k.imag();
    r.boundary_psi = bem::CVector::Zero(4);
    r.boundary_dpsi = bem::CVector::Zero(4);
    r.boundary_psi[slot] = 1.0;
    return r;
}

/// eps1,2 = 5 +- slope (e - cross), self-energies g11, g22, coupling gp.
/// Open mode 1 follows nu_plus, mode 2 nu_minus.
inline Pair make_pair(const std::vector<double>& grid, double slope, double cross, cplx g11, cplx g22, cplx gp) {
    Pair p;
    p.open1.kind = bem::OpenDielectric{3.3};
    p.open2.kind = bem::OpenDielectric{3.3};
    p.closed1.kind = bem::ClosedDirichlet{3.3};
    p.closed2.kind = bem::ClosedDirichlet{3.3};
    p.open1.provenance = p.closed1.provenance = {7, 3};
    p.open2.provenance = p.closed2.provenance = {3, 4};
    p.open1.mode_label = sp::mode_label(p.open1.kind, p.open1.provenance);
    p.open2.mode_label = sp::mode_label(p.open2.kind, p.open2.provenance);
    p.closed1.mode_label = sp::mode_label(p.closed1.kind, p.closed1.provenance);
    p.closed2.mode_label = sp::mode_label(p.closed2.kind, p.closed2.provenance);
    for (double e : grid) {
        const double eps1 = 5.0 + slope * (e - cross), eps2 = 5.0 - slope * (e - cross);
        const auto s = arcspect::toymodel::eigensystem({eps1, eps2, g11, g22, gp});
        p.open1.points.push_back({e, resonance_at(s.nu_plus, 0)});
        p.open2.points.push_back({e, resonance_at(s.nu_minus, 1)});
        p.closed1.points.push_back({e, resonance_at({eps1, 0.0}, 0)});
        p.closed2.points.push_back({e, resonance_at({eps2, 0.0}, 1)});
    }
    return p;
}

inline std::vector<double> grid(double lo, double step, int count) {
    std::vector<double> g;
    for (int i = 0; i < count; ++i) g.push_back(lo + step * i);
    return g;
}

}  // namespace synthetic
