#include "arcspect/bem.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>

#include "arcspect/errors.hpp"
#include "arcspect/parallel.hpp"
#include "arcspect/specfun.hpp"

namespace arcspect::bem {

namespace {

using geometry::BoundaryMesh;
constexpr double kPi = std::numbers::pi;
constexpr double kEuler = 0.57721566490153286061;
constexpr cplx kI{0.0, 1.0};

// Offset-indexed quadrature tables: the log-split weights and the
// logarithm they remove, both functions of (i - j) mod N only.
struct QuadratureTables {
    std::vector<double> kress;
    std::vector<double> log_term;
};

const QuadratureTables& tables_for(int node_count) {
    static std::mutex guard;
    static std::map<int, std::unique_ptr<QuadratureTables>> cache;
    std::lock_guard lock(guard);
    auto& slot = cache[node_count];
    if (!slot) {
        auto t = std::make_unique<QuadratureTables>();
        const int half = node_count / 2;
        t->kress.resize(node_count);
        t->log_term.resize(node_count);
        for (int o = 0; o < node_count; ++o) {
            const double d = kPi * o / half;
            double sum = 0.0;
            for (int m = 1; m < half; ++m) sum += std::cos(m * d) / m;
            t->kress[o] = -(2.0 * kPi / half) * sum - (kPi / (half * half)) * std::cos(half * d);
            const double s = std::sin(0.5 * d);
            t->log_term[o] = o == 0 ? 0.0 : std::log(4.0 * s * s);
        }
        slot = std::move(t);
    }
    return *slot;
}

// Single- and double-layer blocks for rows `rows` against every node, at
// wavenumber kappa (physical units of the mesh). The double layer carries
// the normal derivative with respect to the source point.
struct LayerBlocks {
    CMatrix single;
    CMatrix dbl;
};

LayerBlocks layer_blocks(const BoundaryMesh& mesh, cplx kappa, const std::vector<int>& rows) {
    const int n = mesh.node_count;
    const auto& tab = tables_for(n);
    const double sp = mesh.speed();
    const double h = 2.0 * kPi / n;
    const double inv2pi = 1.0 / (2.0 * kPi);
    LayerBlocks out{CMatrix(rows.size(), n), CMatrix(rows.size(), n)};
    const cplx diag_single =
        0.5 * (tab.kress[0] * (-sp * inv2pi) +
               h * (0.5 * kI - kEuler / kPi - std::log(kappa * sp / 2.0) / kPi) * sp);
    const specfun::Bessel01Line kernel(kappa, 2.0 * mesh.shape.semi_major * (1.0 + 1e-9));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const int i = rows[r];
        const auto& xi = mesh.position[i];
        for (int j = 0; j < n; ++j) {
            if (i == j) {
                out.single(r, j) = diag_single;
                out.dbl(r, j) = 0.5 * h * (-mesh.curvature[i] * sp * inv2pi);
                continue;
            }
            const int o = ((i - j) % n + n) % n;
            const double dx = xi[0] - mesh.position[j][0];
            const double dy = xi[1] - mesh.position[j][1];
            const double d = std::hypot(dx, dy);
            const auto b = kernel(d);
            const cplx h0 = b.j0 + kI * b.y0;
            const cplx h1 = b.j1 + kI * b.y1;
            const double lg = tab.log_term[o];
            const double w = tab.kress[o];

            const cplx m_full = 0.5 * kI * h0 * sp;
            const cplx m1 = -b.j0 * sp * inv2pi;
            out.single(r, j) = 0.5 * (w * m1 + h * (m_full - m1 * lg));

            const double ndot = (mesh.normal[j][0] * dx + mesh.normal[j][1] * dy) * sp;
            const cplx l_full = 0.5 * kI * kappa * ndot * h1 / d;
            const cplx l1 = kappa * inv2pi * ndot * b.j1 / d;
            out.dbl(r, j) = 0.5 * (w * l1 + h * (l_full - l1 * lg));
        }
    }
    return out;
}

void check_wavenumber(cplx kR) {
    if (kR == 0.0) throw DomainError("wavenumber must be non-zero");
    if (kR.imag() < -2.0 || kR.imag() > 0.5)
        throw DomainError("Im kR must lie in [-2, 0.5]");
}

// Node orbits under the reflection group {id, y->-y, x->-x, both}.
std::array<int, 4> orbit(int j, int n) {
    const int ry = geometry::reflect_y_index(j, n);
    return {j, ry, geometry::reflect_x_index(j, n), geometry::reflect_x_index(ry, n)};
}

std::array<double, 4> characters(Parity p) {
    const double py = (p == Parity::ee || p == Parity::eo) ? 1.0 : -1.0;
    const double px = (p == Parity::ee || p == Parity::oe) ? 1.0 : -1.0;
    return {1.0, py, px, px * py};
}

// Folds the columns of an (rows x N) block onto the orbit representatives.
CMatrix fold_columns(const CMatrix& block, Parity sector, int n) {
    const int q = n / 4;
    const auto chi = characters(sector);
    CMatrix out = CMatrix::Zero(block.rows(), q);
    for (int j = 0; j < q; ++j) {
        const auto g = orbit(j, n);
        for (int e = 0; e < 4; ++e) out.col(j) += chi[e] * block.col(g[e]);
    }
    return out;
}

CMatrix build(const BoundaryMesh& mesh, const ProblemKind& kind, cplx kR, Parity sector) {
    validate(kind);
    check_wavenumber(kR);
    const int n = mesh.node_count;
    const bool reduced = sector != Parity::unclassified;
    if (reduced && n % 4 != 0) throw DomainError("parity sectors need N divisible by 4");
    std::vector<int> rows(reduced ? n / 4 : n);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = static_cast<int>(i);
    const auto m = static_cast<Eigen::Index>(rows.size());

    const cplx k = kR / mesh.shape.scale;
    const double index = medium_index(kind);
    auto fold = [&](const CMatrix& b) { return reduced ? fold_columns(b, sector, n) : b; };
    // identity restricted to the same rows and folded columns
    CMatrix eye = CMatrix::Identity(m, reduced ? m : n);

    const LayerBlocks inner = layer_blocks(mesh, index * k, rows);
    if (!is_open(kind)) return fold(inner.single);

    const LayerBlocks outer = layer_blocks(mesh, k, rows);
    CMatrix a(2 * m, 2 * m);
    a.topLeftCorner(m, m) = 0.5 * eye + fold(inner.dbl);
    a.topRightCorner(m, m) = -derivative_jump(kind) * fold(inner.single);
    a.bottomLeftCorner(m, m) = 0.5 * eye - fold(outer.dbl);
    a.bottomRightCorner(m, m) = fold(outer.single);
    return a;
}

// Expands a sector vector on orbit representatives to all N nodes,
// preserving the Euclidean norm.
CVector unfold(const CVector& reduced, Parity sector, int n) {
    CVector full(n);
    const auto chi = characters(sector);
    for (int j = 0; j < n / 4; ++j) {
        const auto g = orbit(j, n);
        for (int e = 0; e < 4; ++e) full[g[e]] = 0.5 * chi[e] * reduced[j];
    }
    return full;
}

struct Sample {
    double value;  // log sigma_min
    std::array<double, 2> x;
};

// Plain Nelder-Mead in one or two dimensions.
template <class F>
std::array<double, 2> nelder_mead(F&& f, std::array<double, 2> start, std::array<double, 2> step,
                                  int dims, double tolerance, int budget) {
    std::vector<Sample> s;
    int evaluations = 0;
    auto eval = [&](std::array<double, 2> x) {
        ++evaluations;
        return Sample{f(x), x};
    };
    s.push_back(eval(start));
    for (int d = 0; d < dims; ++d) {
        auto x = start;
        x[d] += step[d];
        s.push_back(eval(x));
    }
    auto diameter = [&] {
        double best = 0.0;
        for (std::size_t a = 0; a < s.size(); ++a)
            for (std::size_t b = a + 1; b < s.size(); ++b)
                best = std::max(best, std::hypot(s[a].x[0] - s[b].x[0], s[a].x[1] - s[b].x[1]));
        return best;
    };
    auto combine = [&](const std::array<double, 2>& c, const std::array<double, 2>& w, double t) {
        return std::array<double, 2>{c[0] + t * (w[0] - c[0]), c[1] + t * (w[1] - c[1])};
    };
    while (true) {
        std::stable_sort(s.begin(), s.end(),
                         [](const Sample& a, const Sample& b) { return a.value < b.value; });
        if (diameter() < tolerance) return s.front().x;
        if (evaluations >= budget)
            throw NotConverged("simplex did not contract below " + std::to_string(tolerance));
        std::array<double, 2> centroid{0.0, 0.0};
        for (int d = 0; d < dims; ++d)
            for (int c = 0; c < 2; ++c) centroid[c] += s[d].x[c] / dims;
        Sample& worst = s.back();
        const Sample reflected = eval(combine(centroid, worst.x, -1.0));
        if (reflected.value < s.front().value) {
            const Sample expanded = eval(combine(centroid, worst.x, -2.0));
            worst = expanded.value < reflected.value ? expanded : reflected;
        } else if (reflected.value < s[dims - 1].value) {
            worst = reflected;
        } else {
            const bool outside = reflected.value < worst.value;
            const Sample contracted =
                eval(combine(centroid, outside ? reflected.x : worst.x, 0.5));
            if (contracted.value < std::min(worst.value, reflected.value)) {
                worst = contracted;
            } else {
                for (std::size_t v = 1; v < s.size(); ++v)
                    s[v] = eval(combine(s.front().x, s[v].x, 0.5));
            }
        }
    }
}

double log_sigma(const BoundaryMesh& mesh, const ProblemKind& kind, cplx kR, Parity sector) {
    if (kR.imag() < -2.0 || kR.imag() > 0.5 || kR.real() <= 0.0)
        return std::numeric_limits<double>::max();
    const auto sv = linalg::singular_values(assemble_sector(mesh, kind, kR, sector));
    return std::log(std::max(sv[sv.size() - 1], 1e-300));
}

cplx minimize(const BoundaryMesh& mesh, const ProblemKind& kind, cplx seed,
              const SolveOptions& options, double tolerance, int budget) {
    const bool open = is_open(kind);
    auto f = [&](const std::array<double, 2>& x) {
        return log_sigma(mesh, kind, {x[0], open ? x[1] : 0.0}, options.sector);
    };
    const double step = options.initial_step;
    const auto best = nelder_mead(f, {seed.real(), open ? seed.imag() : 0.0},
                                  {step, open ? -step : 0.0}, open ? 2 : 1, tolerance, budget);
    return {best[0], open ? best[1] : 0.0};
}

// Bessel J_m and its derivative at complex z.
std::pair<cplx, cplx> bessel_j_with_derivative(int m, cplx z) {
    const cplx jm = specfun::cyl_bessel(specfun::BesselKind::J, m, z);
    const cplx jm1 = specfun::cyl_bessel(specfun::BesselKind::J, m + 1, z);
    return {jm, static_cast<double>(m) / z * jm - jm1};
}

}  // namespace

bool is_open(const ProblemKind& kind) { return std::holds_alternative<OpenDielectric>(kind); }

double derivative_jump(const ProblemKind& kind) {
    const auto* open = std::get_if<OpenDielectric>(&kind);
    return open && open->polarization == Polarization::TE ? open->n * open->n : 1.0;
}

std::string_view polarization_name(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

Polarization polarization_from_name(std::string_view name) {
    if (name == "TM") return Polarization::TM;
    if (name == "TE") return Polarization::TE;
    throw DomainError("unknown polarization '" + std::string(name) + "'");
}

double medium_index(const ProblemKind& kind) {
    return std::visit([](const auto& k) { return k.n; }, kind);
}

void validate(const ProblemKind& kind) {
    const double n = medium_index(kind);
    if (is_open(kind) ? !(n > 1.0 && n <= 10.0) : !(n >= 1.0 && n <= 10.0))
        throw DomainError("refractive index out of range: " + std::to_string(n));
}

std::string_view parity_name(Parity p) {
    switch (p) {
        case Parity::ee: return "ee";
        case Parity::eo: return "eo";
        case Parity::oe: return "oe";
        case Parity::oo: return "oo";
        default: return "unclassified";
    }
}

Parity parity_from_name(std::string_view name) {
    for (Parity p : {Parity::ee, Parity::eo, Parity::oe, Parity::oo, Parity::unclassified})
        if (parity_name(p) == name) return p;
    throw DomainError("unknown parity class '" + std::string(name) + "'");
}

CMatrix assemble(const BoundaryMesh& mesh, const ProblemKind& kind, cplx kR) {
    return build(mesh, kind, kR, Parity::unclassified);
}

CMatrix assemble_sector(const BoundaryMesh& mesh, const ProblemKind& kind, cplx kR,
                        Parity sector) {
    return build(mesh, kind, kR, sector);
}

double singular_ratio(const BoundaryMesh& mesh, const ProblemKind& kind, cplx kR,
                      Parity sector) {
    const auto sv = linalg::singular_values(assemble_sector(mesh, kind, kR, sector));
    return sv[sv.size() - 1] / linalg::median(sv);
}

Resonance find_resonance(const BoundaryMesh& mesh, const ProblemKind& kind, cplx seed,
                         const SolveOptions& options) {
    validate(kind);
    if (!(seed.real() >= 1.0 && seed.real() <= 25.0))
        throw DomainError("seed Re kR outside the solver window [1, 25]");
    const bool open = is_open(kind);
    const cplx k = minimize(mesh, kind, seed, options, options.tolerance, options.max_evaluations);

    const auto svd = linalg::smallest_singular(assemble_sector(mesh, kind, k, options.sector));
    if (!(svd.sigma_min < options.acceptance * svd.sigma_median))
        throw NoResonance("no resonance near seed: sigma_min/median = " +
                          std::to_string(svd.sigma_min / svd.sigma_median));

    const int n = mesh.node_count;
    const Eigen::Index block = svd.right_vector.size() / (open ? 2 : 1);
    auto expand = [&](const CVector& part) {
        return options.sector == Parity::unclassified ? part : unfold(part, options.sector, n);
    };
    Resonance r;
    r.k = k;
    r.mu = k.real();
    r.omega = -2.0 * k.imag();
    r.sigma_min = svd.sigma_min;
    r.sigma_median = svd.sigma_median;
    if (open) {
        r.boundary_psi = expand(svd.right_vector.head(block));
        r.boundary_dpsi = derivative_jump(kind) * expand(svd.right_vector.tail(block));
    } else {
        r.boundary_psi = CVector::Zero(n);
        r.boundary_dpsi = expand(svd.right_vector);
    }
    CVector stacked(2 * n);
    stacked << r.boundary_psi, r.boundary_dpsi;
    stacked.normalize();
    linalg::normalize_phase(stacked);
    r.boundary_psi = stacked.head(n);
    r.boundary_dpsi = stacked.tail(n);
    r.parity = options.sector;
    if (r.parity == Parity::unclassified && n % 4 == 0)
        r.parity = classify_parity(r.boundary_psi, r.boundary_dpsi).parity;
    return r;
}

std::vector<cplx> scan_window(const BoundaryMesh& mesh, const ProblemKind& kind,
                              const Window& window, const ScanGrid& grid,
                              const SolveOptions& options, int workers) {
    validate(kind);
    const bool open = is_open(kind);
    if (grid.nr < 8 || (open && grid.ni < 8)) throw DomainError("scan grid needs at least 8 points per axis");
    if (!(window.re_max > window.re_min) || (open && !(window.im_max > window.im_min)))
        throw DomainError("empty scan window");
    if (window.re_min < 1.0 || window.re_max > 25.0 || (open && (window.im_min < -2.0 || window.im_max > 0.5)))
        throw DomainError("scan window outside the solver limits");

    // Grid points are cell centres. At each centre k0 the matrix is
    // linearised, A(k0 + d) ~ A(k0) + d A'(k0), and the eigenvalues d of
    // A(k0) v = -d A'(k0) v falling inside the cell (with some overlap)
    // become candidates.
    const int nr = grid.nr;
    const int ni = open ? grid.ni : 1;
    const double cell_re = (window.re_max - window.re_min) / nr;
    const double cell_im = open ? (window.im_max - window.im_min) / ni : 0.0;
    auto centre = [&](int a, int b) {
        return cplx{window.re_min + (a + 0.5) * cell_re, open ? window.im_min + (b + 0.5) * cell_im : 0.0};
    };
    constexpr double kOverlap = 0.75;  // fraction of a cell accepted beyond the centre
    constexpr double kStep = 1e-4;
    std::vector<std::vector<cplx>> found(static_cast<std::size_t>(nr) * ni);
    parallel_for(found.size(), workers, [&](std::size_t idx) {
        const cplx k0 = centre(static_cast<int>(idx) / ni, static_cast<int>(idx) % ni);
        const CMatrix a0 = assemble_sector(mesh, kind, k0, options.sector);
        const CMatrix derivative = (assemble_sector(mesh, kind, k0 + kStep, options.sector) -
                                    assemble_sector(mesh, kind, k0 - kStep, options.sector)) /
                                   (2.0 * kStep);
        for (const cplx d : linalg::generalized_eigenvalues(a0, -derivative)) {
            const bool near = std::abs(d.real()) <= kOverlap * cell_re &&
                              std::abs(d.imag()) <= (open ? kOverlap * cell_im : 0.5 * cell_re);
            if (near) found[idx].push_back(open ? k0 + d : cplx{k0.real() + d.real(), 0.0});
        }
    });

    struct Seed {
        cplx k;
        double ratio;
    };
    std::vector<cplx> candidates;
    for (const auto& list : found) candidates.insert(candidates.end(), list.begin(), list.end());
    std::vector<Seed> polished(candidates.size());
    std::vector<char> ok(candidates.size(), 0);
    parallel_for(candidates.size(), workers, [&](std::size_t c) {
        try {
            const cplx k = minimize(mesh, kind, candidates[c], options, 1e-6, 300);
            polished[c] = {k, singular_ratio(mesh, kind, k, options.sector)};
            ok[c] = 1;
        } catch (const NotConverged&) {
        }
    });

    std::vector<Seed> kept;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!ok[c]) continue;
        const Seed& s = polished[c];
        const bool inside = s.k.real() >= window.re_min && s.k.real() <= window.re_max &&
                            (!open || (s.k.imag() >= window.im_min && s.k.imag() <= window.im_max));
        if (inside && s.ratio < 10.0 * options.acceptance) kept.push_back(s);
    }
    std::stable_sort(kept.begin(), kept.end(), [](const Seed& a, const Seed& b) {
        return a.ratio < b.ratio || (a.ratio == b.ratio && a.k.real() < b.k.real());
    });
    std::vector<cplx> seeds;
    for (const Seed& s : kept) {
        const bool duplicate = std::any_of(seeds.begin(), seeds.end(),
                                           [&](cplx o) { return std::abs(o - s.k) < 1e-3; });
        if (!duplicate) seeds.push_back(s.k);
    }
    return seeds;
}

double circle_residual(double n, int m, cplx kR, Polarization polarization) {
    const auto [jv, jd] = bessel_j_with_derivative(m, n * kR);
    const auto h = specfun::hankel1(m, kR);
    const double c = polarization == Polarization::TM ? n : 1.0 / n;
    return std::abs(c * jd / jv - h.derivative / h.value);
}

cplx circle_resonance(double n, int m, int branch_index, Polarization polarization) {
    if (!(n > 1.0)) throw DomainError("circle resonance needs n > 1");
    if (m < 0 || branch_index < 1) throw DomainError("invalid circle mode indices");

    // g(k) = a J'(nk) H(k) - b J(nk) H'(k) with (a, b) = (n, 1) for TM and
    // (1, n) for TE; zeros are the resonances.
    const double a = polarization == Polarization::TM ? n : 1.0;
    const double b = polarization == Polarization::TM ? 1.0 : n;
    auto newton = [&](cplx k) -> std::optional<cplx> {
        for (int it = 0; it < 60; ++it) {
            const cplx z = n * k;
            const auto [jv, jd] = bessel_j_with_derivative(m, z);
            const auto h = specfun::hankel1(m, k);
            const double mm = static_cast<double>(m) * m;
            const cplx jdd = -jd / z - (1.0 - mm / (z * z)) * jv;
            const cplx hdd = -h.derivative / k - (1.0 - mm / (k * k)) * h.value;
            const cplx g = a * jd * h.value - b * jv * h.derivative;
            const cplx dg = a * n * jdd * h.value + (a - b * n) * jd * h.derivative - b * jv * hdd;
            const cplx step = g / dg;
            k -= step;
            if (!std::isfinite(k.real()) || !std::isfinite(k.imag()) || k.real() <= 0.0 ||
                k.imag() < -2.0 || k.imag() > 0.5)
                return std::nullopt;
            if (std::abs(step) < 1e-14 * std::abs(k)) return k;
        }
        return std::nullopt;
    };

    // Seeds along the real axis with spacing well below the root spacing
    // pi / n, up to past the requested branch.
    const double reach = (specfun::bessel_j_zero(m, branch_index + 1) + 1.0) / n;
    std::vector<cplx> roots;
    for (double x = 0.05; x < reach; x += 0.25 / n) {
        for (double y : {-0.02, -0.2}) {
            const auto r = newton({x, y});
            if (!r || !(r->imag() < 0.0 && r->imag() > -0.5)) continue;
            const bool seen = std::any_of(roots.begin(), roots.end(),
                                          [&](cplx o) { return std::abs(o - *r) < 1e-8; });
            if (!seen) roots.push_back(*r);
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](cplx a, cplx b) { return a.real() < b.real(); });
    if (static_cast<int>(roots.size()) < branch_index || roots[branch_index - 1].real() > reach)
        throw ConvergenceError("circle resonance branch not found");
    const cplx root = roots[branch_index - 1];
    if (circle_residual(n, m, root, polarization) > 1e-10)
        throw ConvergenceError("circle resonance residual above 1e-10");
    return root;
}

ParityFit classify_parity(const CVector& psi, const CVector& dpsi, double max_residual) {
    const auto n = static_cast<int>(psi.size());
    if (n % 4 != 0 || (dpsi.size() != 0 && dpsi.size() != n))
        throw DomainError("parity classification needs N divisible by 4");
    double total = psi.squaredNorm() + dpsi.squaredNorm();
    ParityFit best;
    if (total == 0.0) return best;
    for (Parity p : {Parity::ee, Parity::eo, Parity::oe, Parity::oo}) {
        const auto chi = characters(p);
        double kept = 0.0;
        for (const CVector* v : {&psi, &dpsi}) {
            if (v->size() == 0) continue;
            for (int j = 0; j < n / 4; ++j) {
                const auto g = orbit(j, n);
                cplx c = 0.0;
                for (int e = 0; e < 4; ++e) c += chi[e] * (*v)[g[e]];
                kept += std::norm(c) / 4.0;
            }
        }
        const double residual = 1.0 - kept / total;
        if (residual < best.residual) best = {p, residual};
    }
    if (best.residual > max_residual) best.parity = Parity::unclassified;
    return best;
}

}  // namespace arcspect::bem
