#include "arcspect/field.hpp"

#include <cmath>
#include <numbers>

#include "arcspect/errors.hpp"
#include "arcspect/parallel.hpp"
#include "arcspect/specfun.hpp"

namespace arcspect::bem {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cplx kI{0.0, 1.0};

struct BoundaryData {
    const geometry::BoundaryMesh* mesh;
    CVector psi;
    CVector dpsi;  // normal derivative on the side being represented
};

// Green representation at x from one boundary discretisation:
// sum_j w_j [Phi phi_j - dPhi/dnu_j psi_j], Phi = (i/4) H0(kappa r).
cplx representation(const BoundaryData& b, const specfun::Bessel01Line& kernel, cplx kappa,
                     double x, double y) {
    const auto& m = *b.mesh;
    cplx sum = 0.0;
    for (int j = 0; j < m.node_count; ++j) {
        const double rx = x - m.position[j][0];
        const double ry = y - m.position[j][1];
        const double r = std::hypot(rx, ry);
        const auto bes = kernel(r);
        const cplx h0 = bes.j0 + kI * bes.y0;
        const cplx h1 = bes.j1 + kI * bes.y1;
        const double cosine = (rx * m.normal[j][0] + ry * m.normal[j][1]) / r;
        const cplx g = 0.25 * kI * h0;
        const cplx dg = 0.25 * kI * kappa * h1 * cosine;
        sum += m.weight[j] * (g * b.dpsi[j] - dg * b.psi[j]);
    }
    return sum;
}

}  // namespace

CVector upsample_periodic(const CVector& samples, int factor) {
    const auto n = static_cast<int>(samples.size());
    if (n == 0 || n % 2 != 0 || factor < 1) throw DomainError("upsampling needs an even sample count");
    const int half = n / 2;
    // Fourier coefficients c_m for m = -half..half, Nyquist split evenly
    std::vector<cplx> coeff(n + 1);
    for (int m = -half; m <= half; ++m) {
        cplx c = 0.0;
        for (int j = 0; j < n; ++j) c += samples[j] * std::polar(1.0, -2.0 * kPi * m * (j + 0.5) / n);
        c /= static_cast<double>(n);
        if (std::abs(m) == half) c *= 0.5;
        coeff[m + half] = c;
    }
    const int out_n = n * factor;
    CVector out(out_n);
    for (int l = 0; l < out_n; ++l) {
        const double t = 2.0 * kPi * (l + 0.5) / out_n;
        const cplx step = std::polar(1.0, t);
        cplx phase = std::polar(1.0, -half * t);
        cplx v = 0.0;
        for (int m = 0; m <= n; ++m) {
            v += coeff[m] * phase;
            phase *= step;
        }
        out[l] = v;
    }
    return out;
}

GridSpec bounding_grid(const geometry::EllipseShape& shape, int resolution, double margin) {
    if (resolution < 2) throw DomainError("field grid needs at least 2 points per axis");
    const double ax = shape.semi_major + margin;
    const double ay = shape.semi_minor + margin;
    return {-ax, ax, -ay, ay, resolution, resolution};
}

namespace {

// Shared evaluation core: fills values/regions for count points given by
// point(i), distributing rows of work over the workers.
template <class PointAt>
void evaluate_into(const geometry::BoundaryMesh& mesh, const ProblemKind& kind,
                   const Resonance& resonance, std::size_t count, PointAt&& point,
                   double reach, const FieldOptions& options, std::vector<cplx>& values,
                   std::vector<Region>& regions) {
    validate(kind);
    const int n = mesh.node_count;
    if (resonance.boundary_psi.size() != n || resonance.boundary_dpsi.size() != n)
        throw DomainError("resonance boundary data do not match the mesh");

    const geometry::BoundaryMesh fine_mesh =
        geometry::discretize(mesh.shape, n * std::max(1, options.upsample));
    const double jump = derivative_jump(kind);
    const BoundaryData coarse_in{&mesh, resonance.boundary_psi, resonance.boundary_dpsi};
    const BoundaryData fine_in{&fine_mesh, upsample_periodic(resonance.boundary_psi, options.upsample),
                               upsample_periodic(resonance.boundary_dpsi, options.upsample)};
    const BoundaryData coarse_out{&mesh, coarse_in.psi, coarse_in.dpsi / jump};
    const BoundaryData fine_out{&fine_mesh, fine_in.psi, fine_in.dpsi / jump};

    const cplx k = resonance.k / mesh.shape.scale;
    const cplx k_in = medium_index(kind) * k;
    const double far = reach + mesh.shape.semi_major;
    const specfun::Bessel01Line kernel_in(k_in, far);
    const bool open = is_open(kind);
    const specfun::Bessel01Line kernel_out(open ? k : k_in, far);
    const double ds = mesh.element_length();

    values.assign(count, 0.0);
    regions.assign(count, Region::outside);
    constexpr std::size_t kChunk = 256;
    parallel_for((count + kChunk - 1) / kChunk, options.workers, [&](std::size_t chunk) {
        const std::size_t end = std::min(count, (chunk + 1) * kChunk);
        for (std::size_t idx = chunk * kChunk; idx < end; ++idx) {
            const auto [x, y] = point(idx);
            // distance to the boundary from the nearest node's tangent line
            double nearest = INFINITY;
            int node = 0;
            for (int q = 0; q < n; ++q) {
                const double d = std::hypot(x - mesh.position[q][0], y - mesh.position[q][1]);
                if (d < nearest) {
                    nearest = d;
                    node = q;
                }
            }
            const double ox = x - mesh.position[node][0];
            const double oy = y - mesh.position[node][1];
            const double normal_offset = std::abs(ox * mesh.normal[node][0] + oy * mesh.normal[node][1]);
            const double distance = nearest < ds ? normal_offset : nearest;

            const bool in = geometry::inside(mesh.shape, x, y);
            if (distance < options.band * ds) {
                regions[idx] = Region::band;
                continue;
            }
            regions[idx] = in ? Region::inside : Region::outside;
            if (!in && (options.interior_only || !open)) continue;
            const bool near = distance < options.near_distance * ds;
            values[idx] = in ? representation(near ? fine_in : coarse_in, kernel_in, k_in, x, y)
                             : -representation(near ? fine_out : coarse_out, kernel_out, k, x, y);
        }
    });
}

}  // namespace

PointValues evaluate_points(const geometry::BoundaryMesh& mesh, const ProblemKind& kind,
                            const Resonance& resonance, const std::vector<geometry::Vec2>& points,
                            const FieldOptions& options) {
    double reach = 0.0;
    for (const auto& p : points) reach = std::max(reach, std::hypot(p[0], p[1]));
    PointValues out;
    evaluate_into(
        mesh, kind, resonance, points.size(), [&](std::size_t i) { return points[i]; }, reach,
        options, out.values, out.regions);
    return out;
}

FieldMap evaluate_field(const geometry::BoundaryMesh& mesh, const ProblemKind& kind,
                        const Resonance& resonance, const GridSpec& grid,
                        const FieldOptions& options) {
    if (grid.nx < 2 || grid.ny < 2 || !(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min))
        throw DomainError("degenerate field grid");
    FieldMap map;
    map.grid = grid;
    const double reach = std::hypot(std::max(std::abs(grid.x_min), std::abs(grid.x_max)),
                                    std::max(std::abs(grid.y_min), std::abs(grid.y_max)));
    const auto nx = static_cast<std::size_t>(grid.nx);
    evaluate_into(
        mesh, kind, resonance, nx * grid.ny,
        [&](std::size_t idx) {
            return geometry::Vec2{grid.x(static_cast<int>(idx % nx)), grid.y(static_cast<int>(idx / nx))};
        },
        reach, options, map.values, map.mask);

    double mass = 0.0;
    for (std::size_t idx = 0; idx < map.values.size(); ++idx)
        if (map.mask[idx] == Region::inside) mass += std::norm(map.values[idx]);
    mass *= map.cell_area();
    if (!(mass > 0.0) || !std::isfinite(mass)) throw NormalizationError("interior field vanishes");
    map.norm_scale = 1.0 / std::sqrt(mass);
    for (auto& v : map.values) v *= map.norm_scale;
    return map;
}

}  // namespace arcspect::bem
