#pragma once

// End-to-end computation for a pair of modes followed through an
// eccentricity sweep: open and closed trajectories, per-e fields and
// Husimi bands, and the assembled report.

#include <functional>
#include <vector>

#include "arcspect/analysis.hpp"

namespace arcspect::pipeline {

struct PairConfig {
    double n = 3.3;
    bem::Polarization polarization = bem::Polarization::TM;
    bem::Parity sector = bem::Parity::eo;
    int nodes = 300;
    double scale = 1.0;                 // R
    std::vector<double> e_grid;         // recorded eccentricities
    double approach_step = 0.05;        // continuation step from e = 0 to the grid start
    spectrum::Provenance first{7, 3};
    spectrum::Provenance second{3, 4};
    spectrum::TrackOptions track;
};

struct AnalysisConfig {
    int field_resolution = 301;
    phase_space::HusimiOptions husimi;
    double p_c = 0.0;  // 0 selects 1/n
    double fit_half_window = 0.015;
    bem::FieldOptions field;
};

struct PairSweep {
    spectrum::Trajectory open1, open2, closed1, closed2;
};

spectrum::MeshFactory mesh_factory(const PairConfig& config);

/// Open resonance of the disk with quantum numbers p, refined by the
/// boundary solver on the e = 0 mesh.
bem::Resonance open_seed(const PairConfig& config, spectrum::Provenance p);
/// Dirichlet level j_{m,l} / n refined on the e = 0 mesh.
bem::Resonance closed_seed(const PairConfig& config, spectrum::Provenance p);

/// Tracks one mode from e = 0 and returns its points on config.e_grid.
spectrum::Trajectory track_mode(const PairConfig& config, const bem::ProblemKind& kind,
                                spectrum::Provenance p);

/// All four trajectories, distributed over `workers` threads.
PairSweep sweep_pair(const PairConfig& config, int workers = 1);

using Progress = std::function<void(std::size_t done, std::size_t total)>;

/// Fields, Husimi bands and report for a finished sweep.
analysis::ArcReport analyze_pair(const PairConfig& config, const PairSweep& sweep,
                                 const AnalysisConfig& analysis, const Progress& progress = {});

}  // namespace arcspect::pipeline
