#include "arcspect/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "arcspect/errors.hpp"

namespace arcspect::spectrum {

namespace {

double boundary_overlap(const bem::Resonance& a, const bem::Resonance& b) {
    return std::abs(a.boundary_psi.dot(b.boundary_psi) + a.boundary_dpsi.dot(b.boundary_dpsi));
}

void require_same_grid(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw GridMismatch("e grids differ in length");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) throw GridMismatch("e grids differ at index " + std::to_string(i));
}

std::vector<double> sign_changes(const std::vector<double>& e, const std::vector<double>& f) {
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < f.size(); ++i) {
        if (f[i] == 0.0) {
            out.push_back(e[i]);
        } else if (f[i] * f[i + 1] < 0.0) {
            out.push_back(e[i] + (e[i + 1] - e[i]) * f[i] / (f[i] - f[i + 1]));
        }
    }
    if (!f.empty() && f.back() == 0.0) out.push_back(e.back());
    return out;
}

}  // namespace

std::vector<double> Trajectory::e_grid() const {
    std::vector<double> e;
    e.reserve(points.size());
    for (const auto& p : points) e.push_back(p.e);
    return e;
}

std::string mode_label(const bem::ProblemKind& kind, Provenance p) {
    return std::string(bem::is_open(kind) ? "open" : "closed") + ":m" + std::to_string(p.m) + "l" +
           std::to_string(p.l);
}

Trajectory track(const MeshFactory& mesh_factory, const bem::ProblemKind& kind,
                 const bem::Resonance& seed, const std::vector<double>& e_grid,
                 Provenance provenance, const TrackOptions& options) {
    if (e_grid.empty()) throw DomainError("empty eccentricity grid");
    for (std::size_t i = 1; i < e_grid.size(); ++i)
        if (!(e_grid[i] > e_grid[i - 1])) throw DomainError("eccentricity grid must increase strictly");

    Trajectory traj;
    traj.kind = kind;
    traj.sector = options.solve.sector;
    traj.provenance = provenance;
    traj.mode_label = mode_label(kind, provenance);
    traj.points.push_back({e_grid.front(), seed});

    struct State {
        double e;
        bem::Resonance r;
    };
    std::deque<State> history{{e_grid.front(), seed}};

    for (std::size_t g = 1; g < e_grid.size(); ++g) {
        const double target = e_grid[g];
        double step = target - history.back().e;
        while (history.back().e < target) {
            const State& last = history.back();
            const double e_try = target - last.e <= step ? target : last.e + step;
            cplx predicted = last.r.k;
            if (history.size() >= 2) {
                const State& before = history[history.size() - 2];
                predicted += (last.r.k - before.r.k) * ((e_try - last.e) / (last.e - before.e));
            }
            if (!bem::is_open(kind)) predicted.imag(0.0);

            bool accepted = false;
            try {
                bem::Resonance found =
                    bem::find_resonance(mesh_factory(e_try), kind, predicted, options.solve);
                if (std::abs(found.k - predicted) < options.max_jump &&
                    boundary_overlap(found, last.r) > options.min_overlap) {
                    history.push_back({e_try, std::move(found)});
                    if (history.size() > 2) history.pop_front();
                    accepted = true;
                }
            } catch (const NoResonance&) {
            } catch (const NotConverged&) {
            }
            if (!accepted) {
                step *= 0.5;
                if (step < options.min_step)
                    throw TrackingLost(traj.mode_label + " lost near e = " + std::to_string(e_try));
            }
        }
        traj.points.push_back({target, history.back().r});
    }
    return traj;
}

ArcSummary detect_arc(const Trajectory& t1, const Trajectory& t2) {
    const auto e = t1.e_grid();
    require_same_grid(e, t2.e_grid());
    if (e.size() < 3) throw GridMismatch("ARC detection needs at least 3 grid points");

    std::vector<double> re_diff(e.size());
    std::vector<double> im_diff(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const cplx d = t1.points[i].resonance.k - t2.points[i].resonance.k;
        re_diff[i] = d.real();
        im_diff[i] = d.imag();
    }

    ArcSummary arc;
    arc.im_crossings = sign_changes(e, im_diff);
    const auto real_crossings = sign_changes(e, re_diff);
    if (!real_crossings.empty()) {
        arc.real_crossing = true;
        arc.e_c = real_crossings.front();
        arc.gap_min = 0.0;
    } else {
        std::size_t best = 0;
        for (std::size_t i = 1; i < e.size(); ++i)
            if (std::abs(re_diff[i]) < std::abs(re_diff[best])) best = i;
        arc.e_c = e[best];
        arc.gap_min = std::abs(re_diff[best]);
        if (best > 0 && best + 1 < e.size()) {
            // parabola through the three points around the grid minimum
            const double x0 = e[best - 1], x1 = e[best], x2 = e[best + 1];
            const double y0 = std::abs(re_diff[best - 1]), y1 = arc.gap_min,
                         y2 = std::abs(re_diff[best + 1]);
            const double d01 = (y1 - y0) / (x1 - x0);
            const double d12 = (y2 - y1) / (x2 - x1);
            const double curvature = (d12 - d01) / (x2 - x0);
            if (curvature > 0.0) {
                const double slope = d01 - curvature * (x0 + x1);
                const double vertex = -slope / (2.0 * curvature);
                if (vertex > x0 && vertex < x2) {
                    const double value = y1 + (vertex - x1) * (slope + curvature * (vertex + x1));
                    arc.e_c = vertex;
                    arc.gap_min = std::clamp(value, 0.0, y1);
                }
            }
        }
    }
    const auto& start = t1.points.front().resonance;
    arc.exchange_detected = boundary_overlap(start, t2.points.back().resonance) >
                            boundary_overlap(start, t1.points.back().resonance);
    return arc;
}

LambCurve lamb_shift(const Trajectory& open, const Trajectory& closed) {
    if (!bem::is_open(open.kind) || bem::is_open(closed.kind))
        throw PairingError("Lamb shift pairs an open trajectory with a closed one");
    if (!(open.provenance == closed.provenance))
        throw PairingError("trajectories " + open.mode_label + " and " + closed.mode_label +
                           " have different e = 0 quantum numbers");
    LambCurve curve;
    curve.e = open.e_grid();
    require_same_grid(curve.e, closed.e_grid());
    curve.open_label = open.mode_label;
    curve.closed_label = closed.mode_label;
    for (std::size_t i = 0; i < curve.e.size(); ++i)
        curve.shift.push_back(open.points[i].resonance.mu - closed.points[i].resonance.mu);
    return curve;
}

DeltaCurves delta_curves(const LambCurve& l1, const LambCurve& l2, const Trajectory& t1,
                         const Trajectory& t2) {
    DeltaCurves out;
    out.e = l1.e;
    require_same_grid(out.e, l2.e);
    require_same_grid(out.e, t1.e_grid());
    require_same_grid(out.e, t2.e_grid());
    std::vector<double> margin;
    for (std::size_t i = 0; i < out.e.size(); ++i) {
        out.delta_lamb.push_back(l1.shift[i] - l2.shift[i]);
        out.delta_mu.push_back(t1.points[i].resonance.mu - t2.points[i].resonance.mu);
        margin.push_back(std::abs(out.delta_mu.back()) - std::abs(out.delta_lamb.back()));
    }
    out.crossings = sign_changes(out.e, margin);
    if (!out.crossings.empty()) out.crossing_e = out.crossings.front();
    return out;
}

double interpolate(const std::vector<double>& grid, const std::vector<double>& values, double e) {
    if (grid.empty() || grid.size() != values.size()) throw GridMismatch("interpolation grid mismatch");
    if (e <= grid.front()) return values.front();
    if (e >= grid.back()) return values.back();
    const auto it = std::upper_bound(grid.begin(), grid.end(), e);
    const std::size_t i = static_cast<std::size_t>(it - grid.begin()) - 1;
    const double t = (e - grid[i]) / (grid[i + 1] - grid[i]);
    return values[i] + t * (values[i + 1] - values[i]);
}

}  // namespace arcspect::spectrum
