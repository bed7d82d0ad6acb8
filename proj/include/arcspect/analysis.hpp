#pragma once

// Scalar diagnostics of a resonance pair and the per-eccentricity report.

#include <optional>
#include <vector>

#include "arcspect/field.hpp"
#include "arcspect/phase_space.hpp"
#include "arcspect/spectrum.hpp"
#include "arcspect/toymodel.hpp"

namespace arcspect::analysis {

using cplx = std::complex<double>;

/// -ln sum sqrt(p q) ds dp. GridMismatch for different grids,
/// DisjointSupport when the coefficient is below 1e-300.
double bhattacharyya(const phase_space::CriticalBand& p, const phase_space::CriticalBand& q);

/// sqrt |sum over inside points of conj(f1) f2 dA|. GridMismatch unless
/// grids and masks agree.
double interior_overlap(const bem::FieldMap& f1, const bem::FieldMap& f2);

/// Unconjugated interior product of the two fields after scaling each to
/// unit c-norm (sum f f dA = 1, principal square root).
/// DegenerateCNorm if either |sum f f dA| < 1e-8.
cplx c_product(const bem::FieldMap& f1, const bem::FieldMap& f2);

/// Re kR / (2 |Im kR|); DomainError unless Im kR < 0.
double quality_factor(cplx kR);
double quality_factor(const bem::Resonance& r);

/// Pearson correlation; empty when either series has zero variance.
std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y);

struct PairSample {
    bem::FieldMap field1, field2;
    phase_space::CriticalBand band1, band2;
};

struct ArcReport {
    std::vector<double> e;
    std::vector<double> overlap;
    std::vector<cplx> c_product;          // NaN where the c-norm is degenerate
    std::vector<bool> c_norm_degenerate;
    std::vector<double> d_b;
    std::vector<double> q1, q2;
    std::vector<double> delta_lamb, delta_mu;
    spectrum::ArcSummary arc;
    toymodel::ToyFit toy_fit;
    double anticorrelation = 0.0;
    bool anticorrelation_defined = false;
    double overlap_peak_e = 0.0;
    double d_b_min_e = 0.0;
    std::optional<double> lamb_crossing_e;  // |dmu| = |dL|
};

/// Assembles the report. `samples[i]` holds the pair's fields and critical
/// bands at t1.points[i].e. GridMismatch if the inputs disagree in length
/// or grid.
ArcReport build_report(const spectrum::Trajectory& t1, const spectrum::Trajectory& t2,
                       const std::vector<PairSample>& samples, const spectrum::LambCurve& l1,
                       const spectrum::LambCurve& l2, const toymodel::ToyFit& toy_fit,
                       const spectrum::ArcSummary& arc);

}  // namespace arcspect::analysis
