#include "arcspect/analysis.hpp"

#include <cmath>
#include <limits>

#include "arcspect/errors.hpp"

namespace arcspect::analysis {

namespace {

void require_same_field_grid(const bem::FieldMap& f1, const bem::FieldMap& f2) {
    if (!(f1.grid == f2.grid) || f1.mask != f2.mask || f1.values.size() != f2.values.size())
        throw GridMismatch("field maps on different grids or masks");
}

cplx bilinear_sum(const bem::FieldMap& f1, const bem::FieldMap& f2, bool conjugate_first) {
    cplx sum = 0.0;
    for (std::size_t i = 0; i < f1.values.size(); ++i) {
        if (f1.mask[i] != bem::Region::inside) continue;
        sum += (conjugate_first ? std::conj(f1.values[i]) : f1.values[i]) * f2.values[i];
    }
    return sum * f1.cell_area();
}

}  // namespace

double bhattacharyya(const phase_space::CriticalBand& p, const phase_space::CriticalBand& q) {
    if (p.map.n_s != q.map.n_s || p.map.n_p != q.map.n_p || p.map.values.size() != q.map.values.size())
        throw GridMismatch("Husimi maps on different grids");
    double coefficient = 0.0;
    for (std::size_t i = 0; i < p.map.values.size(); ++i)
        coefficient += std::sqrt(p.map.values[i] * q.map.values[i]);
    coefficient *= p.map.ds() * p.map.dp();
    if (coefficient < 1e-300) throw DisjointSupport("distributions have disjoint support");
    // identical inputs give exactly 0 rather than -ln(1 - rounding)
    if (p.map.values == q.map.values) return 0.0;
    return std::max(0.0, -std::log(coefficient));
}

double interior_overlap(const bem::FieldMap& f1, const bem::FieldMap& f2) {
    require_same_field_grid(f1, f2);
    return std::sqrt(std::abs(bilinear_sum(f1, f2, true)));
}

cplx c_product(const bem::FieldMap& f1, const bem::FieldMap& f2) {
    require_same_field_grid(f1, f2);
    const cplx c1 = bilinear_sum(f1, f1, false);
    const cplx c2 = bilinear_sum(f2, f2, false);
    if (std::abs(c1) < 1e-8 || std::abs(c2) < 1e-8)
        throw DegenerateCNorm("field is nearly self-orthogonal under the c-product");
    return bilinear_sum(f1, f2, false) / (std::sqrt(c1) * std::sqrt(c2));
}

double quality_factor(cplx kR) {
    if (!(kR.imag() < 0.0)) throw DomainError("quality factor needs Im kR < 0");
    return kR.real() / (2.0 * std::abs(kR.imag()));
}

double quality_factor(const bem::Resonance& r) { return quality_factor(r.k); }

std::optional<double> pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw GridMismatch("correlation series differ in length");
    const auto n = static_cast<double>(x.size());
    if (x.size() < 2) return std::nullopt;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    const double scale = std::max({std::abs(mx), std::abs(my), 1e-300});
    if (sxx <= 1e-28 * scale * scale * n || syy <= 1e-28 * scale * scale * n) return std::nullopt;
    return sxy / std::sqrt(sxx * syy);
}

ArcReport build_report(const spectrum::Trajectory& t1, const spectrum::Trajectory& t2,
                       const std::vector<PairSample>& samples, const spectrum::LambCurve& l1,
                       const spectrum::LambCurve& l2, const toymodel::ToyFit& toy_fit,
                       const spectrum::ArcSummary& arc) {
    ArcReport report;
    report.e = t1.e_grid();
    const auto& e = report.e;
    if (t2.e_grid() != e || l1.e != e || l2.e != e || samples.size() != e.size())
        throw GridMismatch("report inputs on different grids");
    if (e.empty()) throw GridMismatch("empty report grid");

    const auto delta = spectrum::delta_curves(l1, l2, t1, t2);
    report.delta_lamb = delta.delta_lamb;
    report.delta_mu = delta.delta_mu;
    report.lamb_crossing_e = delta.crossing_e;
    report.arc = arc;
    report.toy_fit = toy_fit;

    for (std::size_t i = 0; i < e.size(); ++i) {
        const auto& s = samples[i];
        report.overlap.push_back(interior_overlap(s.field1, s.field2));
        try {
            report.c_product.push_back(c_product(s.field1, s.field2));
            report.c_norm_degenerate.push_back(false);
        } catch (const DegenerateCNorm&) {
            const double nan = std::numeric_limits<double>::quiet_NaN();
            report.c_product.push_back({nan, nan});
            report.c_norm_degenerate.push_back(true);
        }
        report.d_b.push_back(bhattacharyya(s.band1, s.band2));
        report.q1.push_back(quality_factor(t1.points[i].resonance));
        report.q2.push_back(quality_factor(t2.points[i].resonance));
    }

    std::size_t peak = 0, trough = 0;
    for (std::size_t i = 1; i < e.size(); ++i) {
        if (report.overlap[i] > report.overlap[peak]) peak = i;
        if (report.d_b[i] < report.d_b[trough]) trough = i;
    }
    report.overlap_peak_e = e[peak];
    report.d_b_min_e = e[trough];

    const auto r = pearson(report.overlap, report.d_b);
    report.anticorrelation_defined = r.has_value();
    report.anticorrelation = r.value_or(0.0);
    return report;
}

}  // namespace arcspect::analysis
