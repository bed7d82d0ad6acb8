#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <random>

#include "arcspect/errors.hpp"
#include "arcspect/linalg.hpp"

using namespace arcspect::linalg;

namespace {

CMatrix random_matrix(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> g;
    CMatrix a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = {g(rng), g(rng)};
    return a;
}

}  // namespace

TEST_CASE("singular values match the Gram matrix spectrum") {
    const CMatrix a = random_matrix(24, 3);
    const RVector s = singular_values(a);
    Eigen::SelfAdjointEigenSolver<CMatrix> gram(a.adjoint() * a);
    RVector ev = gram.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    std::sort(ev.data(), ev.data() + ev.size(), std::greater<>());
    for (int i = 0; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(ev[i]).epsilon(1e-10));
    for (int i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1]);
}

TEST_CASE("smallest singular triple of a nearly singular matrix") {
    CMatrix a = random_matrix(16, 5);
    Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    RVector sv = svd.singularValues();
    sv[15] = 1e-9;
    a = svd.matrixU() * sv.cast<std::complex<double>>().asDiagonal() * svd.matrixV().adjoint();
    const auto r = smallest_singular(a);
    CHECK(r.sigma_min == doctest::Approx(1e-9).epsilon(1e-4));
    CHECK((a * r.right_vector).norm() == doctest::Approx(r.sigma_min).epsilon(1e-4));
    CHECK(r.right_vector.norm() == doctest::Approx(1.0));
    CHECK(r.sigma_median == doctest::Approx(median(sv)));
    CHECK(r.sigma_second == doctest::Approx(sv[14]));
    // phase normalised: first significant component real positive
    const double big = r.right_vector.cwiseAbs().maxCoeff();
    for (int i = 0; i < r.right_vector.size(); ++i) {
        if (std::abs(r.right_vector[i]) > 1e-3 * big) {
            CHECK(std::abs(r.right_vector[i].imag()) < 1e-12);
            CHECK(r.right_vector[i].real() > 0);
            break;
        }
    }
}

TEST_CASE("generalized eigenvalues match the reduced standard problem") {
    const CMatrix a = random_matrix(12, 7), b = random_matrix(12, 8);
    const auto lam = generalized_eigenvalues(a, b);
    REQUIRE(lam.size() == 12);
    Eigen::ComplexEigenSolver<CMatrix> es(b.inverse() * a);
    for (const auto& l : lam) {
        double best = 1e300;
        for (int i = 0; i < 12; ++i) best = std::min(best, std::abs(es.eigenvalues()[i] - l));
        CHECK(best < 1e-9 * std::max(1.0, std::abs(l)));
    }
    CMatrix bs = b;
    bs.col(0).setZero();
    bs.row(0).setZero();
    CHECK(generalized_eigenvalues(a, bs).size() < 12);
}

TEST_CASE("median and input checks") {
    RVector v(4);
    v << 4, 1, 3, 2;
    CHECK(median(v) == doctest::Approx(2.5));
    RVector w(3);
    w << 9, 1, 5;
    CHECK(median(w) == 5);
    CMatrix bad = CMatrix::Identity(3, 3);
    bad(1, 1) = {std::nan(""), 0.0};
    CHECK_THROWS_AS(smallest_singular(bad), arcspect::LinAlgError);
    CHECK_THROWS_AS(smallest_singular(CMatrix::Identity(3, 4)), arcspect::LinAlgError);
}
