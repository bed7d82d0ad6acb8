#include "arcspect/phase_space.hpp"

#include <cmath>
#include <numbers>

#include "arcspect/errors.hpp"

namespace arcspect::phase_space {

using bem::cplx;

double HusimiMap::mass() const {
    double total = 0.0;
    for (double v : values) total += v;
    return total * ds() * dp();
}

double default_sigma(const geometry::BoundaryMesh& mesh, double n, double re_kR) {
    const double k = re_kR / mesh.shape.scale;
    return std::sqrt(2.0 * mesh.perimeter / (n * k * 2.0 * std::numbers::pi));
}

HusimiMap husimi_incident(const geometry::BoundaryMesh& mesh, const bem::Resonance& resonance,
                          double n, const HusimiOptions& options) {
    if (options.n_s < 64 || options.n_p < 64) throw DomainError("Husimi grid needs at least 64 x 64 cells");
    const int nodes = mesh.node_count;
    if (resonance.boundary_psi.size() != nodes || resonance.boundary_dpsi.size() != nodes)
        throw DomainError("resonance boundary data do not match the mesh");
    if (!(n >= 1.0)) throw DomainError("refractive index must be at least 1");
    if (!(resonance.mu > 0.0)) throw DomainError("Husimi needs Re kR > 0");

    const double length = mesh.perimeter;
    const double kn = n * resonance.mu / mesh.shape.scale;  // interior wavenumber
    const double sigma = options.sigma > 0.0 ? options.sigma : default_sigma(mesh, n, resonance.mu);
    const double cutoff = 6.0 * sigma;
    const int wraps = static_cast<int>(std::ceil(cutoff / length));

    HusimiMap map;
    map.n_s = options.n_s;
    map.n_p = options.n_p;
    map.values.assign(static_cast<std::size_t>(map.n_s) * map.n_p, 0.0);

    std::vector<cplx> h(map.n_p);
    std::vector<cplx> hd(map.n_p);
    const double dp = map.dp();
    for (int i = 0; i < map.n_s; ++i) {
        const double s0 = map.s(i) * length;
        std::fill(h.begin(), h.end(), cplx{});
        std::fill(hd.begin(), hd.end(), cplx{});
        for (int j = 0; j < nodes; ++j) {
            for (int l = -wraps; l <= wraps; ++l) {
                const double d = mesh.arclength[j] - s0 + l * length;
                if (std::abs(d) > cutoff) continue;
                const double envelope = std::exp(-d * d / (2.0 * sigma * sigma)) * mesh.weight[j];
                // conj of the coherent-state phase, stepped along the p grid
                cplx phase = std::polar(envelope, -kn * map.p(0) * d);
                const cplx step = std::polar(1.0, -kn * dp * d);
                const cplx psi = resonance.boundary_psi[j];
                const cplx dpsi = resonance.boundary_dpsi[j];
                for (int q = 0; q < map.n_p; ++q) {
                    h[q] += phase * psi;
                    hd[q] += phase * dpsi;
                    phase *= step;
                }
            }
        }
        for (int q = 0; q < map.n_p; ++q) {
            const double p = map.p(q);
            const double cos_chi = std::sqrt(1.0 - p * p);
            const double w = 1.0 / (kn * cos_chi);
            map.at(i, q) = cos_chi * std::norm(h[q] - cplx{0.0, w} * hd[q]);
        }
    }

    const double mass = map.mass();
    if (!(mass > 0.0) || !std::isfinite(mass)) throw NormalizationError("Husimi distribution vanishes");
    map.normalization = mass;
    for (double& v : map.values) v /= mass;
    return map;
}

CriticalBand restrict_below_critical(const HusimiMap& map, double p_c) {
    if (!(p_c > 0.0 && p_c < 1.0)) throw DomainError("critical momentum must lie in (0, 1)");
    CriticalBand band{p_c, map};
    for (int i = 0; i < map.n_s; ++i)
        for (int q = 0; q < map.n_p; ++q)
            if (std::abs(map.p(q)) > p_c) band.map.at(i, q) = 0.0;
    const double mass = band.map.mass();
    if (!(mass > 1e-12 * map.mass())) throw EmptyBand("no Husimi weight below the critical line");
    band.map.normalization = mass;
    for (double& v : band.map.values) v /= mass;
    return band;
}

}  // namespace arcspect::phase_space
