#include "arcspect/linalg.hpp"

#include <algorithm>
#include <complex>
#include <vector>

#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include "arcspect/errors.hpp"

namespace arcspect::linalg {

namespace {

void require_square_finite(const CMatrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) throw LinAlgError("expected a non-empty square matrix");
    if (!m.allFinite()) throw LinAlgError("matrix has non-finite entries");
}

}  // namespace

RVector singular_values(const CMatrix& matrix) {
    require_square_finite(matrix);
    CMatrix a = matrix;
    const auto n = static_cast<lapack_int>(a.rows());
    RVector s(n);
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', n, n, a.data(), n, s.data(),
                                           nullptr, 1, nullptr, 1);
    if (info != 0) throw LinAlgError("zgesdd failed with info " + std::to_string(info));
    return s;
}

std::vector<std::complex<double>> generalized_eigenvalues(const CMatrix& a, const CMatrix& b) {
    require_square_finite(a);
    require_square_finite(b);
    if (a.rows() != b.rows()) throw LinAlgError("generalized eigenproblem needs equal sizes");
    CMatrix aa = a, bb = b;
    const auto n = static_cast<lapack_int>(a.rows());
    CVector alpha(n), beta(n);
    const lapack_int info = LAPACKE_zggev(LAPACK_COL_MAJOR, 'N', 'N', n, aa.data(), n, bb.data(), n,
                                          alpha.data(), beta.data(), nullptr, 1, nullptr, 1);
    if (info != 0) throw LinAlgError("zggev failed with info " + std::to_string(info));
    std::vector<std::complex<double>> out;
    for (lapack_int i = 0; i < n; ++i)
        if (std::abs(beta[i]) > 1e-13 * std::abs(alpha[i])) out.push_back(alpha[i] / beta[i]);
    return out;
}

double median(RVector values) {
    std::vector<double> v(values.data(), values.data() + values.size());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void normalize_phase(CVector& v) {
    const double biggest = v.cwiseAbs().maxCoeff();
    if (biggest == 0.0) return;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (std::abs(v[i]) > 1e-3 * biggest) {
            v *= std::conj(v[i]) / std::abs(v[i]);
            v[i] = std::abs(v[i]);
            return;
        }
    }
}

SmallestSingular smallest_singular(const CMatrix& matrix) {
    require_square_finite(matrix);
    CMatrix a = matrix;
    const auto n = static_cast<lapack_int>(a.rows());
    RVector s(n);
    CMatrix u(1, 1);
    CMatrix vt(n, n);
    const lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'O', n, n, a.data(), n, s.data(),
                                           u.data(), 1, vt.data(), n);
    if (info != 0) throw LinAlgError("zgesdd failed with info " + std::to_string(info));
    SmallestSingular out;
    out.sigma_min = s[n - 1];
    out.right_vector = vt.row(n - 1).adjoint();
    normalize_phase(out.right_vector);
    out.sigma_median = median(s);
    if (n >= 2) {
        out.sigma_second = s[n - 2];
        out.second_vector = vt.row(n - 2).adjoint();
        normalize_phase(out.second_vector);
    }
    return out;
}

}  // namespace arcspect::linalg
