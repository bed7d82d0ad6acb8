#pragma once

#include <vector>

#include "arcspect/bem.hpp"

namespace arcspect::phase_space {

/// Distribution on boundary phase space: arclength fraction s in [0, 1)
/// times tangential momentum p = sin(chi) in (-1, 1). Cell (i, q) is centred
/// at s = i / n_s and p = -1 + (q + 1/2) * 2 / n_p.
struct HusimiMap {
    int n_s = 0;
    int n_p = 0;
    std::vector<double> values;  // index i * n_p + q
    double normalization = 0.0;  // mass before normalisation

    double ds() const { return 1.0 / n_s; }
    double dp() const { return 2.0 / n_p; }
    double s(int i) const { return static_cast<double>(i) / n_s; }
    double p(int q) const { return -1.0 + (q + 0.5) * dp(); }
    double& at(int i, int q) { return values[static_cast<std::size_t>(i) * n_p + q]; }
    double at(int i, int q) const { return values[static_cast<std::size_t>(i) * n_p + q]; }
    double mass() const;
};

struct CriticalBand {
    double p_c = 0.0;
    HusimiMap map;
};

struct HusimiOptions {
    int n_s = 128;
    int n_p = 128;
    double sigma = 0.0;  // coherent-state width in arclength; 0 selects the default
};

/// Default width sqrt(2 L / (n Re(k) 2 pi)).
double default_sigma(const geometry::BoundaryMesh& mesh, double n, double re_kR);

/// Incident Husimi distribution of a resonance seen from inside a medium
/// of index n, normalised to unit mass.
///   H(s0, p0) = cos(chi) |h(s0, p0) - i w h'(s0, p0)|^2,
///   w = 1 / (n Re(k) cos(chi)),  cos(chi) = sqrt(1 - p0^2),
/// where h and h' project the boundary field and its interior normal
/// derivative onto the coherent state
///   exp(-(s - s0)^2 / (2 sigma^2) + i n Re(k) p0 (s - s0)),
/// wrapped over neighbouring periods and truncated at 6 sigma.
/// Throws DomainError for grids below 64 points or mismatched data, and
/// NormalizationError if the distribution vanishes.
HusimiMap husimi_incident(const geometry::BoundaryMesh& mesh, const bem::Resonance& resonance,
                          double n, const HusimiOptions& options = {});

/// Zeroes cells with |p| > p_c and renormalises the rest to unit mass.
/// Throws DomainError unless 0 < p_c < 1, EmptyBand if the band holds
/// no more than 1e-12 of the mass.
CriticalBand restrict_below_critical(const HusimiMap& map, double p_c);

}  // namespace arcspect::phase_space
