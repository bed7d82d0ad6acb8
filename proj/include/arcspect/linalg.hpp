#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

namespace arcspect::linalg {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

struct SmallestSingular {
    double sigma_min = 0.0;
    CVector right_vector;  // unit norm, phase-normalised
    double sigma_median = 0.0;
    double sigma_second = 0.0;  // next-smallest singular value
    CVector second_vector;      // its right singular vector
};

/// All singular values in descending order (LAPACK zgesdd, no vectors).
RVector singular_values(const CMatrix& matrix);

/// Smallest singular value of a square matrix, its right singular vector,
/// and the median of the spectrum. Throws LinAlgError on failure or
/// non-finite input.
SmallestSingular smallest_singular(const CMatrix& matrix);

/// Finite eigenvalues lambda of A v = lambda B v (LAPACK zggev). Pairs
/// with |beta| <= 1e-13 |alpha| are dropped as infinite.
std::vector<std::complex<double>> generalized_eigenvalues(const CMatrix& a, const CMatrix& b);

/// Scales `v` by a unit phase so that its first significant component
/// (magnitude above 1e-3 of the largest) is real and positive.
void normalize_phase(CVector& v);

double median(RVector values);

}  // namespace arcspect::linalg
