#include "arcspect/pipeline.hpp"

#include <algorithm>

#include "arcspect/errors.hpp"
#include "arcspect/parallel.hpp"
#include "arcspect/specfun.hpp"

namespace arcspect::pipeline {

spectrum::MeshFactory mesh_factory(const PairConfig& config) {
    const int nodes = config.nodes;
    const double scale = config.scale;
    return [nodes, scale](double e) { return geometry::discretize(geometry::make_ellipse(e, scale), nodes); };
}

namespace {

bem::ProblemKind open_kind(const PairConfig& c) { return bem::OpenDielectric{c.n, c.polarization}; }
bem::ProblemKind closed_kind(const PairConfig& c) { return bem::ClosedDirichlet{c.n}; }

}  // namespace

bem::Resonance open_seed(const PairConfig& config, spectrum::Provenance p) {
    const bem::cplx guess = bem::circle_resonance(config.n, p.m, p.l, config.polarization);
    return bem::find_resonance(mesh_factory(config)(0.0), open_kind(config), guess, config.track.solve);
}

bem::Resonance closed_seed(const PairConfig& config, spectrum::Provenance p) {
    const double guess = specfun::bessel_j_zero(p.m, p.l) / config.n;
    return bem::find_resonance(mesh_factory(config)(0.0), closed_kind(config), guess, config.track.solve);
}

spectrum::Trajectory track_mode(const PairConfig& config, const bem::ProblemKind& kind,
                                spectrum::Provenance p) {
    if (config.e_grid.empty()) throw DomainError("empty eccentricity grid");
    if (!(config.approach_step > 0.0)) throw DomainError("approach step must be positive");
    std::vector<double> grid;
    const double start = config.e_grid.front();
    for (int i = 0; i * config.approach_step < start - 1e-12; ++i) grid.push_back(i * config.approach_step);
    const std::size_t offset = grid.size();
    grid.insert(grid.end(), config.e_grid.begin(), config.e_grid.end());

    spectrum::TrackOptions options = config.track;
    options.solve.sector = config.sector;
    const bool open = bem::is_open(kind);
    PairConfig seeded = config;
    seeded.track = options;
    const bem::Resonance seed = open ? open_seed(seeded, p) : closed_seed(seeded, p);
    if (grid.front() != 0.0) throw DomainError("eccentricity grid must start at e >= 0");
    spectrum::Trajectory full = spectrum::track(mesh_factory(config), kind, seed, grid, p, options);
    full.points.erase(full.points.begin(), full.points.begin() + static_cast<std::ptrdiff_t>(offset));
    return full;
}

PairSweep sweep_pair(const PairConfig& config, int workers) {
    PairSweep out;
    spectrum::Trajectory* slots[4] = {&out.open1, &out.open2, &out.closed1, &out.closed2};
    parallel_for(4, workers, [&](std::size_t i) {
        const auto kind = i < 2 ? open_kind(config) : closed_kind(config);
        *slots[i] = track_mode(config, kind, i % 2 == 0 ? config.first : config.second);
    });
    return out;
}

analysis::ArcReport analyze_pair(const PairConfig& config, const PairSweep& sweep,
                                 const AnalysisConfig& analysis, const Progress& progress) {
    const auto arc = spectrum::detect_arc(sweep.open1, sweep.open2);
    const auto l1 = spectrum::lamb_shift(sweep.open1, sweep.closed1);
    const auto l2 = spectrum::lamb_shift(sweep.open2, sweep.closed2);
    toymodel::ToyFit fit;
    if (!arc.real_crossing) fit = toymodel::fit_from_data(l1, l2, sweep.open1, sweep.open2, arc, analysis.fit_half_window);

    const double p_c = analysis.p_c > 0.0 ? analysis.p_c : 1.0 / config.n;
    const auto kind = open_kind(config);
    auto mesh_at = mesh_factory(config);
    const auto e = sweep.open1.e_grid();
    std::vector<analysis::PairSample> samples;
    samples.reserve(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto mesh = mesh_at(e[i]);
        const auto grid = bem::bounding_grid(mesh.shape, analysis.field_resolution);
        bem::FieldOptions fo = analysis.field;
        fo.interior_only = true;
        const auto& r1 = sweep.open1.points[i].resonance;
        const auto& r2 = sweep.open2.points[i].resonance;
        analysis::PairSample s{bem::evaluate_field(mesh, kind, r1, grid, fo),
                               bem::evaluate_field(mesh, kind, r2, grid, fo),
                               phase_space::restrict_below_critical(
                                   phase_space::husimi_incident(mesh, r1, config.n, analysis.husimi), p_c),
                               phase_space::restrict_below_critical(
                                   phase_space::husimi_incident(mesh, r2, config.n, analysis.husimi), p_c)};
        samples.push_back(std::move(s));
        if (progress) progress(i + 1, e.size());
    }
    return analysis::build_report(sweep.open1, sweep.open2, samples, l1, l2, fit, arc);
}

}  // namespace arcspect::pipeline
