#include "arcspect/toymodel.hpp"

#include <cmath>

#include "arcspect/errors.hpp"

namespace arcspect::toymodel {

namespace {

// Kernel vector of [[a - nu, g], [g, d - nu]], taking the better
// conditioned of the two row-derived candidates.
Vec2c kernel_vector(cplx a, cplx d, cplx g, cplx nu) {
    const Vec2c from_first{g, nu - a};
    const Vec2c from_second{nu - d, g};
    const double n1 = std::norm(from_first[0]) + std::norm(from_first[1]);
    const double n2 = std::norm(from_second[0]) + std::norm(from_second[1]);
    Vec2c v = n1 >= n2 ? from_first : from_second;
    double n = std::sqrt(std::max(n1, n2));
    if (n == 0.0) {  // diagonal matrix with equal entries
        v = {1.0, 0.0};
        n = 1.0;
    }
    return {v[0] / n, v[1] / n};
}

}  // namespace

ToySpectrum eigensystem(const ToyModel& m) {
    const cplx a = m.eps1 + m.gamma11;
    const cplx d = m.eps2 + m.gamma22;
    const cplx g = m.gamma_prime;
    const cplx disc = (a - d) * (a - d) + 4.0 * g * g;
    const cplx root = std::sqrt(disc);

    ToySpectrum s;
    s.nu_plus = 0.5 * (a + d) + 0.5 * root;
    s.nu_minus = 0.5 * (a + d) - 0.5 * root;
    s.exceptional = std::abs(disc) < 1e-10;

    const cplx nus[2] = {s.nu_plus, s.nu_minus};
    for (int j = 0; j < 2; ++j) {
        Vec2c v = kernel_vector(a, d, g, nus[j]);
        if (g == 0.0) {
            const bool first = a == d ? j == 0 : std::abs(nus[j] - a) <= std::abs(nus[j] - d);
            v = first ? Vec2c{1.0, 0.0} : Vec2c{0.0, 1.0};
        }
        const cplx c = v[0] * v[0] + v[1] * v[1];
        s.c_norms[j] = c;
        if (std::abs(c) >= 1e-10) {
            const cplx scale = 1.0 / std::sqrt(c);
            v = {v[0] * scale, v[1] * scale};
        }
        s.right_vectors[j] = v;
        s.left_vectors[j] = v;
    }
    return s;
}

const char* regime_name(Regime r) {
    switch (r) {
        case Regime::RealCoupling: return "real";
        case Regime::ImaginaryCoupling: return "imaginary";
        case Regime::ComplexCoupling: return "complex";
    }
    return "?";
}

Regime classify_regime(cplx gamma_prime, double tol) {
    if (!(tol > 0.0)) throw DomainError("regime tolerance must be positive");
    const double mag = std::abs(gamma_prime);
    if (mag == 0.0) throw DomainError("zero coupling has no regime");
    if (std::abs(gamma_prime.imag()) <= tol * mag) return Regime::RealCoupling;
    if (std::abs(gamma_prime.real()) <= tol * mag) return Regime::ImaginaryCoupling;
    return Regime::ComplexCoupling;
}

double gap(const ToyModel& m, bool assume_im_equal) {
    if (assume_im_equal &&
        !(std::abs(m.gamma11.imag() - m.gamma22.imag()) < 0.05 * std::abs(m.gamma_prime)))
        throw AssumptionViolated("Im(gamma11) and Im(gamma22) differ by more than 5% of |gamma'|");
    const auto s = eigensystem(m);
    return std::abs(s.nu_plus.real() - s.nu_minus.real());
}

ToyFit fit_from_data(const spectrum::LambCurve& l1, const spectrum::LambCurve& l2,
                     const spectrum::Trajectory& t1, const spectrum::Trajectory& t2,
                     const spectrum::ArcSummary& arc, double half_window) {
    if (arc.real_crossing) throw NoArc("real parts cross: no avoided crossing to fit");
    const auto e = t1.e_grid();
    if (e != t2.e_grid() || e != l1.e || e != l2.e) throw GridMismatch("toy fit inputs on different grids");
    if (!(half_window > 0.0)) throw DomainError("fit window must be positive");

    ToyFit fit;
    fit.e = e;
    fit.re_gamma11 = l1.shift;
    fit.re_gamma22 = l2.shift;
    double best = INFINITY;
    for (std::size_t i = 0; i < e.size(); ++i) {
        fit.im_gamma11.push_back(-t1.points[i].resonance.omega / 2.0);
        fit.im_gamma22.push_back(-t2.points[i].resonance.omega / 2.0);
        const double diff = std::abs(l1.shift[i] - l2.shift[i]);
        if (diff < best) {
            best = diff;
            fit.self_energy_min_e = e[i];
        }
    }
    fit.gamma_prime_est = arc.gap_min / 2.0;
    fit.window_lo = arc.e_c - half_window;
    fit.window_hi = arc.e_c + half_window;

    std::vector<double> we, wg;
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] < fit.window_lo - 1e-12 || e[i] > fit.window_hi + 1e-12) continue;
        we.push_back(e[i]);
        wg.push_back(std::abs(t1.points[i].resonance.mu - t2.points[i].resonance.mu));
    }
    if (we.size() < 3) throw GridMismatch("fewer than 3 grid points in the fit window");

    const double g2 = 4.0 * fit.gamma_prime_est * fit.gamma_prime_est;
    // start: s^2 from linear least squares with e0 = e_C
    double e0 = arc.e_c;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < we.size(); ++i) {
        const double x2 = (we[i] - e0) * (we[i] - e0);
        num += x2 * (wg[i] * wg[i] - g2);
        den += x2 * x2;
    }
    double s = den > 0.0 ? std::sqrt(std::max(num / den, 0.0)) : 0.0;

    auto model = [&](double x, double slope, double centre) {
        return std::sqrt(slope * slope * (x - centre) * (x - centre) + g2);
    };
    auto cost = [&](double slope, double centre) {
        double c = 0.0;
        for (std::size_t i = 0; i < we.size(); ++i) {
            const double r = model(we[i], slope, centre) - wg[i];
            c += r * r;
        }
        return c;
    };
    // damped Gauss-Newton in (s, e0)
    double lambda = 1e-3;
    double current = cost(s, e0);
    for (int iter = 0; iter < 200 && current > 0.0; ++iter) {
        double jtj[3] = {0, 0, 0}, jtr[2] = {0, 0};
        for (std::size_t i = 0; i < we.size(); ++i) {
            const double x = we[i] - e0;
            const double m = model(we[i], s, e0);
            const double r = m - wg[i];
            const double ds = m > 0.0 ? s * x * x / m : 0.0;
            const double de = m > 0.0 ? -s * s * x / m : 0.0;
            jtj[0] += ds * ds;
            jtj[1] += ds * de;
            jtj[2] += de * de;
            jtr[0] += ds * r;
            jtr[1] += de * r;
        }
        const double a = jtj[0] * (1.0 + lambda), b = jtj[1], c = jtj[2] * (1.0 + lambda);
        const double det = a * c - b * b;
        if (!(std::abs(det) > 0.0)) break;
        const double step_s = -(c * jtr[0] - b * jtr[1]) / det;
        const double step_e = -(a * jtr[1] - b * jtr[0]) / det;
        const double trial = cost(s + step_s, e0 + step_e);
        if (trial < current) {
            s += step_s;
            e0 += step_e;
            const double gain = current - trial;
            current = trial;
            lambda *= 0.3;
            if (gain <= 1e-30 + 1e-16 * current) break;
        } else {
            lambda *= 10.0;
            if (lambda > 1e12) break;
        }
    }
    fit.slope = std::abs(s);
    fit.center = e0;
    fit.residual = std::sqrt(current / static_cast<double>(we.size()));
    return fit;
}

}  // namespace arcspect::toymodel
