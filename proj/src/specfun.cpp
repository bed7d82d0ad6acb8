#include "arcspect/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "arcspect/errors.hpp"

namespace arcspect::specfun {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
// |z| <= kSeriesRadius: double series. Up to kWideSeriesRadius the same series
// run in long double, where the asymptotic expansion is still too coarse.
constexpr double kSeriesRadius = 12.0;
constexpr double kWideSeriesRadius = 20.0;
constexpr int kMaxOrder = 200;
constexpr double kMaxAbs = 1e4;
constexpr cplx kI{0.0, 1.0};

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void check_args(int order, cplx z) {
    if (order < 0 || order > kMaxOrder)
        throw DomainError("cylinder function order " + std::to_string(order) + " outside [0, 200]");
    if (!finite(z) || std::abs(z) >= kMaxAbs)
        throw DomainError("cylinder function argument outside |z| < 1e4");
}

bool in_series_region(double az) { return az <= kWideSeriesRadius; }

bool use_asymptotic(int order, double az) {
    return az > kWideSeriesRadius && az > 2.0 * order;
}

template <typename T>
constexpr T stop_tol() {
    return std::numeric_limits<T>::epsilon() * T(0.1);
}

template <typename T>
std::complex<T> widen(cplx z) {
    return {static_cast<T>(z.real()), static_cast<T>(z.imag())};
}

template <typename T>
cplx narrow(std::complex<T> z) {
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// J_m(z) = (z/2)^m sum_k (-z^2/4)^k / (k! (m+k)!)
template <typename T>
std::complex<T> series_j(int order, std::complex<T> z) {
    using C = std::complex<T>;
    const C half = T(0.5) * z;
    const C q = -half * half;
    C lead = T(1);
    for (int i = 1; i <= order; ++i) lead *= half / static_cast<T>(i);
    C term = T(1);
    C sum = T(1);
    for (int k = 1; k < 400; ++k) {
        term *= q / (static_cast<T>(k) * static_cast<T>(order + k));
        sum += term;
        if (std::abs(term) <= stop_tol<T>() * std::abs(sum)) return lead * sum;
    }
    throw ConvergenceError("power series for J did not converge");
}

// Integer-order Neumann series:
// Y_m = -(z/2)^{-m}/pi sum_{k<m} (m-k-1)!/k! (z^2/4)^k + (2/pi) ln(z/2) J_m
//       - (z/2)^m/pi sum_k [psi(k+1) + psi(m+k+1)] (-z^2/4)^k / (k! (m+k)!)
template <typename T>
std::complex<T> series_y(int order, std::complex<T> z, std::complex<T> jm) {
    using C = std::complex<T>;
    const T pi = std::numbers::pi_v<T>;
    const T gamma = std::numbers::egamma_v<T>;
    const C half = T(0.5) * z;
    const C q = half * half;

    C singular = T(0);
    if (order > 0) {
        C t = T(1) / half;  // (m-1)! (z/2)^{-m}
        for (int i = 1; i < order; ++i) t *= static_cast<T>(i) / half;
        singular = t;
        for (int k = 0; k + 1 < order; ++k) {
            t *= q / (static_cast<T>(k + 1) * static_cast<T>(order - k - 1));
            singular += t;
        }
    }

    C lead = T(1);
    for (int i = 1; i <= order; ++i) lead *= half / static_cast<T>(i);
    T psi_a = -gamma;  // psi(k+1)
    T psi_b = -gamma;  // psi(m+k+1)
    for (int i = 1; i <= order; ++i) psi_b += T(1) / static_cast<T>(i);
    C term = T(1);
    C sum = psi_a + psi_b;
    bool done = false;
    for (int k = 1; k < 400; ++k) {
        term *= -q / (static_cast<T>(k) * static_cast<T>(order + k));
        psi_a += T(1) / static_cast<T>(k);
        psi_b += T(1) / static_cast<T>(order + k);
        const C add = (psi_a + psi_b) * term;
        sum += add;
        if (std::abs(add) <= stop_tol<T>() * std::abs(sum)) {
            done = true;
            break;
        }
    }
    if (!done) throw ConvergenceError("power series for Y did not converge");
    return -singular / pi + (T(2) / pi) * std::log(half) * jm - lead * sum / pi;
}

// Orders 0 and 1 of J and Y from one set of terms a_k = (-z^2/4)^k / (k!)^2.
template <typename T>
Bessel01 series01(std::complex<T> z) {
    using C = std::complex<T>;
    const T pi = std::numbers::pi_v<T>;
    const T gamma = std::numbers::egamma_v<T>;
    const C half = T(0.5) * z;
    const C q = -half * half;
    C a = T(1);
    T harmonic = 0;        // H_k
    C s0 = T(1);           // sum a_k
    C s1 = T(1);           // sum a_k / (k+1)
    C p0 = -gamma;         // sum psi(k+1) a_k
    C p1 = T(1) - T(2) * gamma;  // sum (psi(k+1) + psi(k+2)) a_k / (k+1)
    bool done = false;
    for (int k = 1; k < 400; ++k) {
        const T kd = static_cast<T>(k);
        a *= q / (kd * kd);
        harmonic += T(1) / kd;
        const T psi1 = -gamma + harmonic;
        const T psi2 = psi1 + T(1) / (kd + T(1));
        s0 += a;
        s1 += a / (kd + T(1));
        p0 += psi1 * a;
        p1 += (psi1 + psi2) * a / (kd + T(1));
        if (std::abs(a) * (T(1) + harmonic) <= stop_tol<T>() * (std::abs(s0) + std::abs(s1))) {
            done = true;
            break;
        }
    }
    if (!done) throw ConvergenceError("power series for J/Y of orders 0,1 did not converge");
    const C log_half = std::log(half);
    const C j0 = s0;
    const C j1 = half * s1;
    const C y0 = (T(2) / pi) * (log_half * j0 - p0);
    const C y1 = -T(2) / (pi * z) + (T(2) / pi) * log_half * j1 - (half / pi) * p1;
    return {narrow(j0), narrow(j1), narrow(y0), narrow(y1)};
}

struct HankelPair {
    cplx h1, h2;
};

// H^(1,2)_m(z) ~ sqrt(2/(pi z)) e^{+-i w} sum_k (+-i)^k a_k(m) / z^k,
// w = z - m pi/2 - pi/4, truncated at the smallest term.
HankelPair hankel_asymptotic(int order, cplx z) {
    const double mu = 4.0 * order * order;
    cplx ratio = 1.0;  // a_k / z^k
    cplx s1 = 1.0;
    cplx s2 = 1.0;
    cplx ik = 1.0;
    double last = 1.0;
    for (int k = 1; k < 300; ++k) {
        const double odd = 2.0 * k - 1.0;
        ratio *= (mu - odd * odd) / (8.0 * k * z);
        ik *= kI;
        const double mag = std::abs(ratio);
        if (odd * odd > mu && mag > last) break;
        s1 += ik * ratio;
        s2 += std::conj(ik) * ratio;
        last = mag;
        if (mag <= 1e-17 * std::min(std::abs(s1), std::abs(s2))) break;
    }
    const cplx pre = std::sqrt(2.0 / (kPi * z));
    const cplx w = z - (0.5 * order + 0.25) * kPi;
    return {pre * std::exp(kI * w) * s1, pre * std::exp(-kI * w) * s2};
}

Bessel01 asymptotic01(cplx z) {
    const HankelPair h0 = hankel_asymptotic(0, z);
    const HankelPair h1 = hankel_asymptotic(1, z);
    return {0.5 * (h0.h1 + h0.h2), 0.5 * (h1.h1 + h1.h2), (h0.h1 - h0.h2) / (2.0 * kI),
            (h1.h1 - h1.h2) / (2.0 * kI)};
}

// Miller's backward recurrence for J_0..J_order, normalised against the
// larger of the independently known J_0, J_1.
void miller_j(int order, cplx z, cplx j0_ref, cplx j1_ref, std::span<cplx> out) {
    const double top = std::max(static_cast<double>(order), std::abs(z));
    int start = static_cast<int>(top + 20.0 + std::sqrt(160.0 * top));
    start += start % 2;
    const std::size_t n = static_cast<std::size_t>(std::max(order, 1)) + 1;
    std::vector<cplx> f(n);
    cplx above = 0.0;  // f_{k+1}
    cplx cur = 1e-30;  // f_k
    for (int k = start; k >= 1; --k) {
        const cplx below = (2.0 * k / z) * cur - above;
        above = cur;
        cur = below;
        const auto idx = static_cast<std::size_t>(k - 1);
        if (idx < n) f[idx] = cur;
        if (std::abs(cur) > 1e150) {
            cur *= 1e-150;
            above *= 1e-150;
            for (std::size_t i = idx; i < n; ++i) f[i] *= 1e-150;
        }
    }
    const cplx scale = std::abs(j0_ref) >= std::abs(j1_ref) ? j0_ref / f[0] : j1_ref / f[1];
    for (int i = 0; i <= order; ++i) out[i] = f[i] * scale;
}

// Y_m for |z| > kWideSeriesRadius outside the asymptotic region. The Hankel
// function that is recessive in z is dominant in m, so it is recurred upward
// and combined with the (accurate) J_m.
void large_arg_y(int max_order, cplx z, std::span<const cplx> j, std::span<cplx> y) {
    const bool upper = z.imag() >= 0.0;
    const HankelPair h0 = hankel_asymptotic(0, z);
    const HankelPair h1 = hankel_asymptotic(1, z);
    cplx prev = upper ? h0.h1 : h0.h2;
    cplx cur = upper ? h1.h1 : h1.h2;
    auto to_y = [&](cplx h, cplx jm) { return upper ? -kI * (h - jm) : kI * (h - jm); };
    y[0] = to_y(prev, j[0]);
    if (max_order >= 1) y[1] = to_y(cur, j[1]);
    for (int m = 1; m < max_order; ++m) {
        const cplx next = (2.0 * m / z) * cur - prev;
        prev = cur;
        cur = next;
        y[m + 1] = use_asymptotic(m + 1, std::abs(z)) ? y[m + 1] : to_y(cur, j[m + 1]);
    }
}

template <typename T>
void series_sequence(int max_order, std::complex<T> z, std::span<cplx> j, std::span<cplx> y) {
    for (int m = 0; m <= max_order; ++m) {
        const std::complex<T> jm = series_j<T>(m, z);
        j[m] = narrow(jm);
        if (!y.empty()) y[m] = narrow(series_y<T>(m, z, jm));
    }
}

}  // namespace

Bessel01 bessel01(cplx z) {
    const double az = std::abs(z);
    if (az == 0.0) throw DomainError("Y_0, Y_1 are singular at z = 0");
    if (az <= kSeriesRadius) return series01<double>(z);
    if (az <= kWideSeriesRadius) return series01<long double>(widen<long double>(z));
    return asymptotic01(z);
}

void bessel_jy_sequence(int max_order, cplx z, std::span<cplx> j, std::span<cplx> y) {
    check_args(max_order, z);
    const double az = std::abs(z);
    const bool want_y = !y.empty();
    if (az == 0.0) {
        if (want_y) throw DomainError("Y_m is singular at z = 0");
        std::fill(j.begin(), j.begin() + max_order + 1, cplx{});
        j[0] = 1.0;
        return;
    }
    if (az <= kSeriesRadius) {
        series_sequence<double>(max_order, z, j, y);
        return;
    }
    if (in_series_region(az)) {
        series_sequence<long double>(max_order, widen<long double>(z), j, y);
        return;
    }
    int miller_top = -1;
    for (int m = 0; m <= max_order; ++m) {
        if (use_asymptotic(m, az)) {
            const HankelPair h = hankel_asymptotic(m, z);
            j[m] = 0.5 * (h.h1 + h.h2);
            if (want_y) y[m] = (h.h1 - h.h2) / (2.0 * kI);
        } else {
            miller_top = m;
        }
    }
    if (miller_top < 0) return;
    const Bessel01 b = asymptotic01(z);
    std::vector<cplx> jm(static_cast<std::size_t>(miller_top) + 1);
    miller_j(miller_top, z, b.j0, b.j1, jm);
    for (int m = 0; m <= miller_top; ++m)
        if (!use_asymptotic(m, az)) j[m] = jm[m];
    if (want_y) large_arg_y(max_order, z, j, y);
}

cplx cyl_bessel(BesselKind kind, int order, cplx z) {
    check_args(order, z);
    const double az = std::abs(z);
    if (az == 0.0) {
        if (kind == BesselKind::Y) throw DomainError("Y_m is singular at z = 0");
        return order == 0 ? 1.0 : 0.0;
    }
    cplx value;
    if (az <= kSeriesRadius) {
        const cplx jm = series_j<double>(order, z);
        value = kind == BesselKind::J ? jm : series_y<double>(order, z, jm);
    } else if (in_series_region(az)) {
        const auto zl = widen<long double>(z);
        const auto jm = series_j<long double>(order, zl);
        value = kind == BesselKind::J ? narrow(jm) : narrow(series_y<long double>(order, zl, jm));
    } else if (use_asymptotic(order, az)) {
        const HankelPair h = hankel_asymptotic(order, z);
        value = kind == BesselKind::J ? 0.5 * (h.h1 + h.h2) : (h.h1 - h.h2) / (2.0 * kI);
    } else {
        std::vector<cplx> j(static_cast<std::size_t>(order) + 1);
        std::vector<cplx> y(kind == BesselKind::Y ? j.size() : 0);
        bessel_jy_sequence(order, z, j, y);
        value = kind == BesselKind::J ? j[order] : y[order];
    }
    if (!finite(value)) throw OverflowError("cylinder function overflows at this argument");
    return value;
}

CylinderEval hankel1(int order, cplx z) {
    check_args(order, z);
    if (z == 0.0) throw DomainError("H^(1)_m is singular at z = 0");
    if (z.imag() < -50.0) throw DomainError("hankel1 requires Im z >= -50");
    const double az = std::abs(z);
    CylinderEval out{order, z, {}, {}};
    if (use_asymptotic(order + 1, az)) {
        const HankelPair hm = hankel_asymptotic(order, z);
        const HankelPair hp = hankel_asymptotic(order + 1, z);
        out.value = hm.h1;
        out.derivative = (static_cast<double>(order) / z) * hm.h1 - hp.h1;
    } else {
        const int top = std::max(order, 1);
        std::vector<cplx> j(static_cast<std::size_t>(top) + 1);
        std::vector<cplx> y(j.size());
        bessel_jy_sequence(top, z, j, y);
        out.value = j[order] + kI * y[order];
        // H'_m = H_{m-1} - (m/z) H_m, H'_0 = -H_1
        out.derivative = order == 0 ? -(j[1] + kI * y[1])
                                    : (j[order - 1] + kI * y[order - 1]) -
                                          (static_cast<double>(order) / z) * out.value;
    }
    if (!finite(out.value) || !finite(out.derivative))
        throw OverflowError("H^(1)_m magnitude exceeds the representable range");
    return out;
}

double bessel_j_zero(int order, int index) {
    if (order < 0 || order > kMaxOrder) throw DomainError("bessel_j_zero order outside [0, 200]");
    if (index < 1 || index > 50) throw DomainError("bessel_j_zero index outside [1, 50]");
    auto f = [order](double x) { return cyl_bessel(BesselKind::J, order, x).real(); };
    // j_{m,1} > m, and zeros of J_m are never closer than 0.25 apart
    double lo = order == 0 ? 0.5 : static_cast<double>(order);
    double flo = f(lo);
    constexpr double step = 0.25;
    const double limit = order + 10.0 + (kPi + 4.0) * index;
    int found = 0;
    while (lo < limit) {
        const double hi = lo + step;
        const double fhi = f(hi);
        if ((flo < 0.0) != (fhi < 0.0) && ++found == index) {
            double a = lo, b = hi, fa = flo;
            while (b - a > 1e-13 * std::max(1.0, b)) {
                const double c = 0.5 * (a + b);
                const double fc = f(c);
                if (fc == 0.0) return c;
                if ((fa < 0.0) == (fc < 0.0)) {
                    a = c;
                    fa = fc;
                } else {
                    b = c;
                }
            }
            return 0.5 * (a + b);
        }
        lo = hi;
        flo = fhi;
    }
    throw ConvergenceError("failed to bracket zero " + std::to_string(index) + " of J_" +
                           std::to_string(order));
}


// Panels touching the origin interpolate the regular parts
//   Y0 = Yr0 + (2/pi) ln(z/2) J0,  Y1 = Yr1 - 2/(pi z) + (2/pi) ln(z/2) J1;
// the others interpolate Y0, Y1 directly, avoiding the cancellation.
Bessel01Line::Bessel01Line(cplx kappa, double d_max) : kappa_(kappa) {
    if (kappa == 0.0 || !(d_max > 0.0)) throw DomainError("Bessel01Line needs kappa != 0, d_max > 0");
    log_half_kappa_ = std::log(0.5 * kappa);
    // panel length of about 3 in |z| keeps the degree-16 error near rounding
    panels_ = std::max(1, static_cast<int>(std::ceil(std::abs(kappa) * d_max / 3.0)));
    width_ = d_max / panels_;
    coeff_.assign(static_cast<std::size_t>(panels_) * kDegree, {});
    std::array<std::array<cplx, 4>, kDegree> values{};
    for (int p = 0; p < panels_; ++p) {
        const double lo = p * width_;
        const bool split = p == 0;
        for (int i = 0; i < kDegree; ++i) {
            const double x = std::cos(kPi * (i + 0.5) / kDegree);
            const double d = lo + 0.5 * width_ * (x + 1.0);
            const cplx z = kappa * d;
            const Bessel01 b = bessel01(z);
            if (!split) {
                values[i] = {b.j0, b.j1, b.y0, b.y1};
                continue;
            }
            const cplx lg = (2.0 / kPi) * (log_half_kappa_ + std::log(d));
            values[i] = {b.j0, b.j1, b.y0 - lg * b.j0, b.y1 + 2.0 / (kPi * z) - lg * b.j1};
        }
        for (int c = 0; c < kDegree; ++c) {
            std::array<cplx, 4> acc{};
            for (int i = 0; i < kDegree; ++i) {
                const double w = std::cos(kPi * c * (i + 0.5) / kDegree);
                for (int f = 0; f < 4; ++f) acc[f] += w * values[i][f];
            }
            const double scale = (c == 0 ? 1.0 : 2.0) / kDegree;
            for (int f = 0; f < 4; ++f) acc[f] *= scale;
            coeff_[static_cast<std::size_t>(p) * kDegree + c] = acc;
        }
    }
}

Bessel01 Bessel01Line::operator()(double d) const {
    int p = static_cast<int>(d / width_);
    p = std::clamp(p, 0, panels_ - 1);
    const double x = 2.0 * (d - p * width_) / width_ - 1.0;
    const auto* c = &coeff_[static_cast<std::size_t>(p) * kDegree];
    // Clenshaw recurrence, four series at once
    std::array<cplx, 4> b1{}, b2{};
    for (int k = kDegree - 1; k >= 1; --k) {
        for (int f = 0; f < 4; ++f) {
            const cplx t = 2.0 * x * b1[f] - b2[f] + c[k][f];
            b2[f] = b1[f];
            b1[f] = t;
        }
    }
    std::array<cplx, 4> v;
    for (int f = 0; f < 4; ++f) v[f] = x * b1[f] - b2[f] + c[0][f];
    if (p > 0) return {v[0], v[1], v[2], v[3]};
    const cplx z = kappa_ * d;
    const cplx lg = (2.0 / kPi) * (log_half_kappa_ + std::log(d));
    return {v[0], v[1], v[2] + lg * v[0], v[3] - 2.0 / (kPi * z) + lg * v[1]};
}

}  // namespace arcspect::specfun
