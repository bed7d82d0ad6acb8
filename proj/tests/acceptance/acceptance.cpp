// End-to-end acceptance run: one PASS/FAIL line per criterion.
// Usage: acceptance <path to the arcspect binary>

#include <Eigen/Eigenvalues>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "arcspect/errors.hpp"
#include "arcspect/pipeline.hpp"
#include "arcspect/specfun.hpp"
#include "support/mp_bessel.hpp"

using namespace arcspect;
namespace fs = std::filesystem;
using cplx = std::complex<double>;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---- 1 ---------------------------------------------------------------------

Verdict open_circle() {
    const auto mesh = geometry::discretize(geometry::make_ellipse(0.0, 1.0), 300);
    bem::SolveOptions opt;
    opt.sector = bem::Parity::eo;
    Verdict v{true, ""};
    for (auto pol : {bem::Polarization::TM, bem::Polarization::TE}) {
        for (auto [m, l] : {std::pair{7, 3}, std::pair{3, 4}}) {
            const auto t0 = std::chrono::steady_clock::now();
            const cplx exact = bem::circle_resonance(3.3, m, l, pol);
            // seed off the root by a typical scan cell
            const auto r = bem::find_resonance(mesh, bem::OpenDielectric{3.3, pol}, exact + cplx{0.01, 0.005}, opt);
            const double err = std::abs(r.k - exact), t = seconds_since(t0);
            v.pass = v.pass && err < 1e-3 && t < 120.0;
            v.detail += fmt("%s(%d,%d) |dk|=%.1e %.1fs; ", std::string(bem::polarization_name(pol)).c_str(), m, l, err, t);
        }
    }
    return v;
}

// ---- 2 ---------------------------------------------------------------------

Verdict closed_circle() {
    const auto mesh = geometry::discretize(geometry::make_ellipse(0.0, 1.0), 256);
    const bem::Window window{5.0, 20.0, 0.0, 0.0};
    std::vector<double> found;
    for (auto sector : {bem::Parity::ee, bem::Parity::eo}) {
        bem::SolveOptions opt;
        opt.sector = sector;
        for (cplx k : bem::scan_window(mesh, bem::ClosedDirichlet{1.0}, window, {150, 8}, opt)) found.push_back(k.real());
    }
    int total = 0, matched = 0;
    double worst = 0.0;
    for (int m = 0; m <= 30; ++m) {
        for (int l = 1; l <= 10; ++l) {
            const double z = specfun::bessel_j_zero(m, l);
            if (z > 20.0) break;
            if (z < 5.0) continue;
            ++total;
            double best = 1e300;
            for (double f : found) best = std::min(best, std::abs(f - z));
            if (best < 1e-3) ++matched;
            worst = std::max(worst, best);
        }
    }
    return {matched == total, fmt("%d/%d zeros in [5, 20] matched, worst |dk|=%.1e", matched, total, worst)};
}

// ---- 3-7, 9 ------------------------------------------------------------------

struct PairRun {
    pipeline::PairConfig config;
    pipeline::PairSweep sweep;
    analysis::ArcReport report;
    double seconds = 0.0;
};

PairRun run_pair() {
    PairRun run;
    run.config.polarization = bem::Polarization::TE;
    for (int i = 0; i <= 22; ++i) run.config.e_grid.push_back(0.70 + 0.005 * i);
    const auto t0 = std::chrono::steady_clock::now();
    run.sweep = pipeline::sweep_pair(run.config, 1);
    run.report = pipeline::analyze_pair(run.config, run.sweep, {});
    run.seconds = seconds_since(t0);
    return run;
}

Verdict arc_landmark(const PairRun& run) {
    const auto& r = run.report;
    const double e_c = r.arc.e_c;
    double nearest_im = 1e300;
    for (double x : r.arc.im_crossings) nearest_im = std::min(nearest_im, std::abs(x - e_c));
    // closed pair: the level difference changes sign; locate it and the gap there
    const auto& c1 = run.sweep.closed1.points;
    const auto& c2 = run.sweep.closed2.points;
    double closed_e = NAN, closed_gap = 1e300;
    for (std::size_t i = 0; i + 1 < c1.size(); ++i) {
        const double d0 = c1[i].resonance.mu - c2[i].resonance.mu, d1 = c1[i + 1].resonance.mu - c2[i + 1].resonance.mu;
        if (d0 == 0.0 || (d0 > 0) != (d1 > 0)) {
            const double t = d0 / (d0 - d1);
            closed_e = c1[i].e + t * (c1[i + 1].e - c1[i].e);
            closed_gap = 0.0;
            break;
        }
    }
    const bool pass = !r.arc.real_crossing && std::abs(e_c - 0.782) <= 0.01 && nearest_im <= 0.02 &&
                      closed_gap < 1e-3 && std::abs(closed_e - e_c) <= 0.015;
    return {pass, fmt("e_C=%.5f gap=%.5f, Im crossing %.4f from e_C, closed crossing at %.5f (%.4f from e_C), %.0fs",
                      e_c, r.arc.gap_min, nearest_im, closed_e, std::abs(closed_e - e_c), run.seconds)};
}

Verdict tradeoff(const PairRun& run) {
    const auto& r = run.report;
    const bool pass = std::abs(r.overlap_peak_e - r.arc.e_c) <= 0.01 && std::abs(r.d_b_min_e - r.arc.e_c) <= 0.015 &&
                      r.anticorrelation_defined && r.anticorrelation < -0.8;
    return {pass, fmt("overlap peak at %.3f, d_B min at %.3f, Pearson %.3f", r.overlap_peak_e, r.d_b_min_e,
                      r.anticorrelation)};
}

Verdict biorthogonality(const PairRun& run) {
    const auto& r = run.report;
    double worst = 0.0, peak = 0.0;
    bool degenerate = false;
    for (std::size_t i = 0; i < r.e.size(); ++i) {
        if (r.c_norm_degenerate[i]) degenerate = true;
        else worst = std::max(worst, std::abs(r.c_product[i]));
        peak = std::max(peak, r.overlap[i]);
    }
    return {!degenerate && worst < 0.05 && peak > 0.25, fmt("max |c-product|=%.4f, overlap peak %.3f", worst, peak)};
}

Verdict lamb_identity(const PairRun& run) {
    const auto& r = run.report;
    const double e_c = r.arc.e_c;
    const double dl = spectrum::interpolate(r.e, r.delta_lamb, e_c), dm = spectrum::interpolate(r.e, r.delta_mu, e_c);
    const double rel = std::abs(dm - dl) / std::abs(dl);
    const bool crossing = r.lamb_crossing_e && std::abs(*r.lamb_crossing_e - e_c) <= 0.01;
    const bool scale = std::abs(dl) >= 0.05 / 3.0 && std::abs(dl) <= 0.15;
    return {rel < 0.1 && crossing && scale,
            fmt("dL(e_C)=%.4f dmu(e_C)=%.4f rel=%.3f, curves meet at %.5f, |dL| scale %s", dl, dm, rel,
                r.lamb_crossing_e.value_or(NAN), scale ? "ok" : "off")};
}

Verdict quality(const PairRun& run) {
    const auto& r = run.report;
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < r.e.size(); ++i) {
        lo = std::min(lo, r.q1[i] / r.q2[i]);
        hi = std::max(hi, r.q1[i] / r.q2[i]);
    }
    return {lo >= 0.1 && hi <= 10.0, fmt("Q1/Q2 in [%.3f, %.3f]", lo, hi)};
}

Verdict toy_fit(const PairRun& run) {
    const auto& r = run.report;
    const auto& f = r.toy_fit;
    const double rel = f.residual / r.arc.gap_min;
    const bool pass = rel < 0.15 && std::abs(f.self_energy_min_e - r.arc.e_c) <= 0.015;
    return {pass, fmt("gamma'=%.5f, rms residual %.1f%% of gap, |Re g11 - Re g22| min at %.3f", f.gamma_prime_est,
                      100 * rel, f.self_energy_min_e)};
}

// ---- 8 ---------------------------------------------------------------------

Verdict toy_exactness() {
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst_root = 0.0, worst_invariant = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const toymodel::ToyModel m{u(rng), u(rng), {u(rng), -std::abs(u(rng))}, {u(rng), -std::abs(u(rng))},
                                   {u(rng), u(rng)}};
        const auto s = toymodel::eigensystem(m);
        const cplx tr = m.eps1 + m.gamma11 + m.eps2 + m.gamma22;
        const cplx det = (m.eps1 + m.gamma11) * (m.eps2 + m.gamma22) - m.gamma_prime * m.gamma_prime;
        Eigen::Matrix2cd companion;
        companion << 0.0, -det, 1.0, tr;
        Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(companion, false);
        const cplx r0 = es.eigenvalues()[0], r1 = es.eigenvalues()[1];
        // a double root moves by sqrt(eps): scale by the splitting
        const double cond = std::max(1.0, 1e-2 / std::abs(s.nu_plus - s.nu_minus));
        const double err = std::min(std::abs(s.nu_plus - r0) + std::abs(s.nu_minus - r1),
                                    std::abs(s.nu_plus - r1) + std::abs(s.nu_minus - r0)) / cond;
        worst_root = std::max(worst_root, err);
        worst_invariant = std::max({worst_invariant, std::abs(s.nu_plus + s.nu_minus - tr),
                                    std::abs(s.nu_plus * s.nu_minus - det)});
    }
    // crossing/repulsion table on detuning sweeps with nearly equal widths
    auto sweep = [](cplx gp) {
        double re = 1e300, im = 1e300;
        for (int i = 0; i <= 400; ++i) {
            const double x = -2.0 + 0.01 * i;
            const auto s = toymodel::eigensystem({x / 2, -x / 2, {0.0, -0.1}, {0.0, -0.12}, gp});
            re = std::min(re, std::abs(s.nu_plus.real() - s.nu_minus.real()));
            im = std::min(im, std::abs(s.nu_plus.imag() - s.nu_minus.imag()));
        }
        return std::pair{re < 1e-9, im < 1e-9};  // (real parts cross, imaginary parts cross)
    };
    const bool table = sweep({0.3, 0.0}) == std::pair{false, true} && sweep({0.0, 0.3}) == std::pair{true, false} &&
                       sweep({0.3, 0.3}) == std::pair{false, false};
    return {worst_root < 1e-12 && worst_invariant < 1e-12 && table,
            fmt("root error %.1e, trace/det error %.1e, regime table %s", worst_root, worst_invariant,
                table ? "reproduced" : "wrong")};
}

// ---- 10 --------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::map<std::string, std::string> snapshot(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(dir))
        if (e.is_regular_file()) files[fs::relative(e.path(), dir).string()] = slurp(e.path());
    return files;
}

bool cli_deterministic(const std::string& binary, std::string& note) {
    const fs::path root = fs::temp_directory_path() / "arcspect_acceptance";
    fs::remove_all(root);
    const std::vector<std::string> runs = {
        "oracle --m 3 --branches 3",
        "toy --preset regimes",
        "solve --e 0 --N 128 --problems '[\"closed\"]' --window.re_min 4.0 --window.re_max 5.0",
        "sweep --e '[0.0, 0.02]' --N 128 --modes '[[7, 3]]' --problems '[\"closed\"]'",
    };
    bool ok = true;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        std::map<std::string, std::string> first;
        for (int rep = 0; rep < 2; ++rep) {
            const fs::path out = root / ("run" + std::to_string(i));
            fs::remove_all(out);
            const std::string cmd = "CACHE_DIR=" + (root / ("cache" + std::to_string(rep))).string() + " '" + binary +
                                    "' " + runs[i] + " --out '" + out.string() + "' > /dev/null 2>&1";
            if (std::system(cmd.c_str()) != 0) {
                note += "command failed: " + runs[i] + "; ";
                ok = false;
                break;
            }
            auto snap = snapshot(out);
            if (rep == 0) first = std::move(snap);
            else if (snap != first) {
                note += "outputs differ: " + runs[i] + "; ";
                ok = false;
            }
        }
    }
    fs::remove_all(root);
    return ok;
}

Verdict hygiene(const std::string& binary, const PairRun& run) {
    std::string note;
    // special functions: Wronskian and agreement with the 100-digit series
    double wronskian = 0.0, series = 0.0;
    for (cplx z : {cplx{0.7, 0.0}, cplx{5.3, -0.1}, cplx{14.2, -0.3}, cplx{17.3, -0.05}, cplx{26.0, -0.2}}) {
        for (int m = 0; m <= 25; m += 5) {
            const cplx jm = specfun::cyl_bessel(specfun::BesselKind::J, m, z);
            const cplx jm1 = specfun::cyl_bessel(specfun::BesselKind::J, m + 1, z);
            const cplx ym = specfun::cyl_bessel(specfun::BesselKind::Y, m, z);
            const cplx ym1 = specfun::cyl_bessel(specfun::BesselKind::Y, m + 1, z);
            const cplx w = 2.0 / (std::numbers::pi * z);
            wronskian = std::max(wronskian, std::abs(jm1 * ym - jm * ym1 - w) / std::abs(w));
            const cplx oj = oracle::to_d(oracle::bessel_j(m, z));
            series = std::max(series, std::abs(jm - oj) / std::max(std::abs(oj), 1e-3));
        }
    }
    const bool specfun_ok = wronskian < 1e-10 && series < 1e-11;
    note += fmt("Wronskian %.1e, series %.1e; ", wronskian, series);

    // geometry: turning number and perimeter against the Gauss-Kummer series
    double turning = 0.0, perimeter = 0.0;
    for (double e : {0.0, 0.5, 0.78, 0.95}) {
        const auto s = geometry::make_ellipse(e, 1.0);
        const auto mesh = geometry::discretize(s, 400);
        double sum = 0.0;
        for (int j = 0; j < mesh.node_count; ++j) sum += mesh.curvature[j] * mesh.weight[j];
        turning = std::max(turning, std::abs(sum - 2 * std::numbers::pi));
        const double h = std::pow((s.semi_major - s.semi_minor) / (s.semi_major + s.semi_minor), 2);
        double series_sum = 1.0, coeff = 1.0, hp = 1.0;
        for (int n = 1; n < 300; ++n) {
            coeff *= (0.5 - (n - 1)) / n;
            hp *= h;
            series_sum += coeff * coeff * hp;
        }
        const double exact = std::numbers::pi * (s.semi_major + s.semi_minor) * series_sum;
        perimeter = std::max(perimeter, std::abs(geometry::ellipse_perimeter(s) - exact) / exact);
    }
    const bool geometry_ok = turning < 1e-9 && perimeter < 1e-12;
    note += fmt("turning %.1e, perimeter %.1e; ", turning, perimeter);

    // discretisation: N = 200 -> 400 on the disk resonances
    double moved = 0.0;
    bem::SolveOptions opt;
    opt.sector = bem::Parity::eo;
    for (auto pol : {bem::Polarization::TM, bem::Polarization::TE}) {
        for (auto [m, l] : {std::pair{7, 3}, std::pair{3, 4}}) {
            const cplx seed = bem::circle_resonance(3.3, m, l, pol);
            const bem::OpenDielectric kind{3.3, pol};
            const auto a = bem::find_resonance(geometry::discretize(geometry::make_ellipse(0.0, 1.0), 200), kind, seed, opt);
            const auto b = bem::find_resonance(geometry::discretize(geometry::make_ellipse(0.0, 1.0), 400), kind, seed, opt);
            moved = std::max(moved, std::abs(a.k - b.k));
        }
    }
    const bool convergence_ok = moved < 1e-4;
    note += fmt("N 200->400 shift %.1e; ", moved);

    // Husimi refinement on the pair at the grid point nearest e_C
    const auto& e = run.report.e;
    std::size_t ic = 0;
    for (std::size_t i = 1; i < e.size(); ++i)
        if (std::abs(e[i] - run.report.arc.e_c) < std::abs(e[ic] - run.report.arc.e_c)) ic = i;
    const auto mesh = geometry::discretize(geometry::make_ellipse(e[ic], 1.0), run.config.nodes);
    auto distance = [&](int n) {
        const phase_space::HusimiOptions h{n, n, 0.0};
        const auto a = phase_space::husimi_incident(mesh, run.sweep.open1.points[ic].resonance, 3.3, h);
        const auto b = phase_space::husimi_incident(mesh, run.sweep.open2.points[ic].resonance, 3.3, h);
        return analysis::bhattacharyya(phase_space::restrict_below_critical(a, 1 / 3.3),
                                       phase_space::restrict_below_critical(b, 1 / 3.3));
    };
    const double coarse = distance(128), fine = distance(256);
    const double husimi_change = std::abs(coarse - fine) / fine;
    const bool husimi_ok = husimi_change < 0.02;
    note += fmt("d_B 128->256 change %.2f%%; ", 100 * husimi_change);

    const bool cli_ok = cli_deterministic(binary, note);
    note += cli_ok ? "CLI outputs byte-identical" : "CLI determinism failed";
    return {specfun_ok && geometry_ok && convergence_ok && husimi_ok && cli_ok, note};
}

void report(int id, const std::string& name, const Verdict& v) {
    std::printf("criterion %2d %-26s %s  %s\n", id, name.c_str(), v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
}

Verdict guarded(const std::function<Verdict()>& f) {
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("error: ") + e.what()};
    }
}

}  // namespace

int main(int argc, char** argv) {
    const std::string binary = argc > 1 ? argv[1] : "arcspect";
    bool all = true;
    auto record = [&](int id, const std::string& name, const Verdict& v) {
        report(id, name, v);
        all = all && v.pass;
    };

    record(1, "open-circle-oracle", guarded(open_circle));
    record(2, "closed-circle-oracle", guarded(closed_circle));

    PairRun run;
    std::string failure;
    try {
        run = run_pair();
    } catch (const std::exception& e) {
        failure = e.what();
    }
    auto pair_check = [&](auto f) {
        if (!failure.empty()) return Verdict{false, "pair sweep failed: " + failure};
        return guarded([&] { return f(run); });
    };
    record(3, "arc-landmark", pair_check(arc_landmark));
    record(4, "overlap-distance-tradeoff", pair_check(tradeoff));
    record(5, "bi-orthogonality", pair_check(biorthogonality));
    record(6, "lamb-shift-identity", pair_check(lamb_identity));
    record(7, "quality-factors", pair_check(quality));
    record(8, "toy-exactness", guarded(toy_exactness));
    record(9, "toy-fit", pair_check(toy_fit));
    record(10, "numerical-hygiene", pair_check([&](const PairRun& r) { return hygiene(binary, r); }));
    return all ? 0 : 1;
}
