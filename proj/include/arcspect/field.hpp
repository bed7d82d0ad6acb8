#pragma once

// Field reconstruction from boundary data by the Green representation
// formula: interior points use the interior wavenumber n k, exterior
// points the outgoing exterior kernel at k.

#include <cstdint>
#include <vector>

#include "arcspect/bem.hpp"

namespace arcspect::bem {

enum class Region : std::uint8_t { inside, outside, band };

/// Cartesian grid of nx by ny points spanning [x_min, x_max] x [y_min, y_max]
/// including the end points. Values are stored row by row, y outermost.
struct GridSpec {
    double x_min = -1.0;
    double x_max = 1.0;
    double y_min = -1.0;
    double y_max = 1.0;
    int nx = 301;
    int ny = 301;

    double dx() const { return (x_max - x_min) / (nx - 1); }
    double dy() const { return (y_max - y_min) / (ny - 1); }
    double x(int i) const { return x_min + i * dx(); }
    double y(int j) const { return y_min + j * dy(); }
    bool operator==(const GridSpec&) const = default;
};

/// Bounding box of the ellipse, widened by `margin` (units of R), sampled
/// at resolution x resolution points.
GridSpec bounding_grid(const geometry::EllipseShape& shape, int resolution, double margin = 0.0);

struct FieldMap {
    GridSpec grid;
    std::vector<cplx> values;  // zero in the boundary band
    std::vector<Region> mask;
    double norm_scale = 1.0;  // factor applied to reach unit interior L2 norm

    double cell_area() const { return grid.dx() * grid.dy(); }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * grid.nx + i; }
};

struct FieldOptions {
    bool interior_only = false;  // skip exterior points (left at zero)
    int upsample = 4;            // boundary refinement factor near the boundary
    double near_distance = 6.0;  // in element lengths: use refined data closer than this
    double band = 0.5;           // in element lengths: excluded boundary band
    int workers = 1;
};

/// Field of `resonance` on `grid`, scaled so that the sum of |u|^2 dA over
/// inside points is 1. Points within `band` element lengths of the boundary
/// are masked as Region::band. Throws NormalizationError if the interior
/// field vanishes, DomainError if the resonance data do not fit the mesh.
FieldMap evaluate_field(const geometry::BoundaryMesh& mesh, const ProblemKind& kind,
                        const Resonance& resonance, const GridSpec& grid,
                        const FieldOptions& options = {});

/// Unnormalised field at arbitrary points; band points get value 0.
struct PointValues {
    std::vector<cplx> values;
    std::vector<Region> regions;
};
PointValues evaluate_points(const geometry::BoundaryMesh& mesh, const ProblemKind& kind,
                            const Resonance& resonance, const std::vector<geometry::Vec2>& points,
                            const FieldOptions& options = {});

/// Trigonometric interpolation of periodic samples taken at
/// (j + 1/2) / N of the period onto factor * N points at (l + 1/2) / (factor N).
CVector upsample_periodic(const CVector& samples, int factor);

}  // namespace arcspect::bem
