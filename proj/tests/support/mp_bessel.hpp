#pragma once

// Test-only oracle: naive ascending-series summation of J_m and Y_m in
// 100-digit arithmetic. Shares no code with the library implementation.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>

namespace oracle {

using mp_real = boost::multiprecision::cpp_bin_float_100;
using mp_cplx = boost::multiprecision::cpp_complex_100;

inline mp_cplx to_mp(std::complex<double> z) { return mp_cplx(mp_real(z.real()), mp_real(z.imag())); }
inline std::complex<double> to_d(const mp_cplx& z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline mp_real euler_gamma() {
    return boost::math::constants::euler<mp_real>();
}

inline mp_real factorial(int n) {
    mp_real f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// J_m(z) = (z/2)^m sum_k (-z^2/4)^k / (k! (m+k)!)
inline mp_cplx bessel_j(int m, std::complex<double> zd) {
    const mp_cplx z = to_mp(zd);
    const mp_cplx half = z / mp_real(2);
    const mp_cplx q = -half * half;
    mp_cplx term = mp_cplx(1) / factorial(m);
    mp_cplx sum = term;
    for (int k = 1; k < 600; ++k) {
        term *= q / (mp_real(k) * mp_real(m + k));
        sum += term;
        if (k > 10 && abs(term) < mp_real("1e-90") * abs(sum)) break;
    }
    return sum * pow(half, m);
}

// Y_m from the integer-order Neumann series with digamma coefficients.
inline mp_cplx bessel_y(int m, std::complex<double> zd) {
    const mp_cplx z = to_mp(zd);
    const mp_cplx half = z / mp_real(2);
    const mp_cplx q = half * half;
    const mp_real pi = boost::math::constants::pi<mp_real>();
    mp_cplx first = 0;
    for (int k = 0; k < m; ++k) first += factorial(m - k - 1) / factorial(k) * pow(q, k);
    first *= -pow(half, -m) / pi;
    auto psi = [](int n) {  // psi(n) for integer n >= 1
        mp_real s = -euler_gamma();
        for (int i = 1; i < n; ++i) s += mp_real(1) / i;
        return s;
    };
    mp_cplx sum = 0;
    mp_cplx term = mp_cplx(1) / factorial(m);  // (-q)^k / (k! (m+k)!)
    for (int k = 0; k < 600; ++k) {
        if (k > 0) term *= -q / (mp_real(k) * mp_real(m + k));
        const mp_cplx add = (psi(k + 1) + psi(m + k + 1)) * term;
        sum += add;
        if (k > 10 && abs(add) < mp_real("1e-90") * abs(sum)) break;
    }
    const mp_cplx third = -pow(half, m) / pi * sum;
    return first + mp_real(2) / pi * log(half) * bessel_j(m, zd) + third;
}

}  // namespace oracle
