#pragma once

// Parameter continuation of resonances in the eccentricity, and the
// derived avoided-crossing and Lamb-shift diagnostics.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "arcspect/bem.hpp"
#include "arcspect/geometry.hpp"

namespace arcspect::spectrum {

using bem::cplx;

/// Quantum numbers (m, l) of a mode at e = 0.
struct Provenance {
    int m = 0;
    int l = 0;
    bool operator==(const Provenance&) const = default;
};

struct TrajectoryPoint {
    double e = 0.0;
    bem::Resonance resonance;
};

struct Trajectory {
    std::string mode_label;
    bem::ProblemKind kind;
    bem::Parity sector = bem::Parity::unclassified;
    Provenance provenance;
    std::vector<TrajectoryPoint> points;

    std::vector<double> e_grid() const;
};

/// "open:m7l3" / "closed:m7l3".
std::string mode_label(const bem::ProblemKind& kind, Provenance p);

using MeshFactory = std::function<geometry::BoundaryMesh(double e)>;

struct TrackOptions {
    bem::SolveOptions solve;
    double max_jump = 0.15;     // |kR_found - kR_predicted|
    double min_overlap = 0.5;   // |<v_prev, v_found>| of boundary vectors
    double min_step = 1e-4;     // smallest sub-step after halving
};

/// Follows `seed` (a resonance at e_grid.front()) along e_grid. Each step is
/// predicted by linear extrapolation from the two previous points and
/// refined with find_resonance; a step is accepted when the prediction
/// error is below max_jump and the boundary overlap exceeds min_overlap.
/// Rejected steps are retried with halved sub-steps down to min_step; only
/// points on e_grid are recorded. Throws TrackingLost when the sub-step
/// limit is reached, DomainError for a non-increasing grid.
Trajectory track(const MeshFactory& mesh_factory, const bem::ProblemKind& kind,
                 const bem::Resonance& seed, const std::vector<double>& e_grid,
                 Provenance provenance, const TrackOptions& options = {});

struct ArcSummary {
    double e_c = 0.0;
    double gap_min = 0.0;
    std::vector<double> im_crossings;
    bool exchange_detected = false;
    bool real_crossing = false;  // Re kR difference changes sign on the grid
};

/// Avoided-crossing summary of two trajectories on one grid. The gap
/// minimum is refined by a parabola through the three grid points around
/// the grid minimum; if the Re difference changes sign, the crossing is
/// located by linear interpolation and the gap is 0.
/// Throws GridMismatch if the grids differ or have fewer than 3 points.
ArcSummary detect_arc(const Trajectory& t1, const Trajectory& t2);

struct LambCurve {
    std::vector<double> e;
    std::vector<double> shift;  // mu - epsilon
    std::string open_label;
    std::string closed_label;
};

/// L(e) = Re kR(open) - kR(closed). Throws GridMismatch on differing grids,
/// PairingError if the provenances differ.
LambCurve lamb_shift(const Trajectory& open, const Trajectory& closed);

struct DeltaCurves {
    std::vector<double> e;
    std::vector<double> delta_lamb;  // L1 - L2
    std::vector<double> delta_mu;    // mu1 - mu2
    std::vector<double> crossings;   // sign changes of |dmu| - |dL|
    std::optional<double> crossing_e;  // first of `crossings`
};

DeltaCurves delta_curves(const LambCurve& l1, const LambCurve& l2, const Trajectory& t1,
                         const Trajectory& t2);

/// Linear interpolation of `values` at e (clamped to the grid ends).
double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double e);

}  // namespace arcspect::spectrum
