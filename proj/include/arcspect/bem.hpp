#pragma once

// Boundary integral formulation of cavity resonances.
//
// Layer potentials are discretised with the logarithmic-split trigonometric
// quadrature on the equal-arclength nodes of a BoundaryMesh, which converges
// spectrally for smooth boundaries. The fundamental solution is
// Phi(x, y) = (i/4) H0(kappa |x - y|).
//
// All wavenumbers in this interface are dimensionless, kR, with R the
// scale of the mesh's shape.

#include <complex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "arcspect/geometry.hpp"
#include "arcspect/linalg.hpp"

namespace arcspect::bem {

using cplx = std::complex<double>;
using linalg::CMatrix;
using linalg::CVector;

/// TM: field and normal derivative continuous across the boundary.
/// TE: field and (1/n^2) times the normal derivative continuous.
enum class Polarization { TM, TE };

std::string_view polarization_name(Polarization p);
Polarization polarization_from_name(std::string_view name);  // DomainError if unknown

/// Dielectric cavity of index n in vacuum.
struct OpenDielectric {
    double n = 3.3;
    Polarization polarization = Polarization::TM;
};

/// Billiard with a vanishing field on the boundary. The interior carries
/// the medium index n (default 1), so levels come out in the same vacuum kR
/// units as the open cavity filled with that medium.
struct ClosedDirichlet {
    double n = 1.0;
};

using ProblemKind = std::variant<OpenDielectric, ClosedDirichlet>;

bool is_open(const ProblemKind& kind);
double medium_index(const ProblemKind& kind);
/// n^2 for TE cavities, 1 otherwise: the ratio of interior- to
/// exterior-side normal derivatives on the boundary.
double derivative_jump(const ProblemKind& kind);
/// Throws DomainError unless n lies in (1, 10] (open) or [1, 10] (closed).
void validate(const ProblemKind& kind);

/// Reflection symmetry class. The first letter is the parity under
/// y -> -y, the second under x -> -x (e = even, o = odd).
enum class Parity { ee, eo, oe, oo, unclassified };

std::string_view parity_name(Parity p);
Parity parity_from_name(std::string_view name);  // DomainError if unknown

struct Resonance {
    cplx k;              // kR
    double mu = 0.0;     // Re kR
    double omega = 0.0;  // -2 Im kR
    CVector boundary_psi;   // field at the nodes
    CVector boundary_dpsi;  // interior-side normal derivative at the nodes
    // (psi, dpsi) has unit Euclidean norm
    double sigma_min = 0.0;
    double sigma_median = 0.0;
    Parity parity = Parity::unclassified;
};

/// Full system matrix: 2N x 2N for the open problem with unknowns psi and
/// the exterior-side normal derivative, N x N for the Dirichlet problem
/// with unknown dpsi.
/// Throws DomainError for k = 0 or Im kR outside [-2, 0.5].
CMatrix assemble(const geometry::BoundaryMesh& mesh, const ProblemKind& kind, cplx kR);

/// Block of the system matrix acting on vectors of the given parity class,
/// built on the N/4 orbit representatives. Its singular values are those
/// of the full matrix restricted to the class. Requires N divisible by 4;
/// `Parity::unclassified` returns the full matrix.
CMatrix assemble_sector(const geometry::BoundaryMesh& mesh, const ProblemKind& kind, cplx kR,
                        Parity sector);

struct SolveOptions {
    Parity sector = Parity::unclassified;
    double acceptance = 1e-4;    // sigma_min / sigma_median at a resonance
    double tolerance = 1e-6;     // simplex diameter in kR
    double initial_step = 0.005;  // simplex edge in kR
    int max_evaluations = 800;
};

/// Nelder-Mead minimisation of log sigma_min from `seed` (one-dimensional on
/// the real axis for the closed problem).
/// Throws DomainError if Re seed is outside [1, 25], NotConverged if the
/// simplex does not shrink within the evaluation budget, NoResonance if the
/// minimum fails the acceptance ratio.
Resonance find_resonance(const geometry::BoundaryMesh& mesh, const ProblemKind& kind, cplx seed,
                         const SolveOptions& options = {});

/// sigma_min / sigma_median of the (sector) matrix at kR.
double singular_ratio(const geometry::BoundaryMesh& mesh, const ProblemKind& kind, cplx kR,
                      Parity sector);

struct Window {
    double re_min = 1.0;
    double re_max = 2.0;
    double im_min = -0.2;
    double im_max = 0.0;
};

struct ScanGrid {
    int nr = 16;
    int ni = 8;  // ignored for closed problems, which scan the real axis
};

/// Seeds from a scan of the window. The grid points are cell centres; at
/// each one the matrix is linearised in k and the generalized eigenvalues
/// near the centre are polished by a simplex run. Seeds are kept when the
/// polished ratio is below 10x the acceptance threshold and the point lies
/// inside the window. Sorted by ratio ascending, duplicates within 1e-3 merged.
std::vector<cplx> scan_window(const geometry::BoundaryMesh& mesh, const ProblemKind& kind,
                              const Window& window, const ScanGrid& grid,
                              const SolveOptions& options = {}, int workers = 1);

/// Resonance of the dielectric disk of index n with angular number m: the
/// branch_index-th root, by increasing Re kR, of the matching condition
/// among the roots with -0.5 < Im kR < 0. Roots are polished by complex
/// Newton iteration from a line of seeds below the real axis.
cplx circle_resonance(double n, int m, int branch_index,
                      Polarization polarization = Polarization::TM);

/// Matching-condition residual |c J_m'(n k) / J_m(n k) - H_m'(k) / H_m(k)|
/// with c = n (TM) or 1/n (TE).
double circle_residual(double n, int m, cplx kR, Polarization polarization = Polarization::TM);

/// Parity class of boundary data (dpsi may be empty) together with the
/// residual 1 - |P v|^2 / |v|^2 of the best class projector P. A residual
/// above `max_residual` is reported as unclassified. Requires N % 4 == 0.
struct ParityFit {
    Parity parity = Parity::unclassified;
    double residual = 1.0;
};
ParityFit classify_parity(const CVector& psi, const CVector& dpsi, double max_residual = 0.1);

}  // namespace arcspect::bem
