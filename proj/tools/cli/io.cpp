#include "io.hpp"

#include <openssl/sha.h>
#include <unistd.h>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "arcspect/errors.hpp"

namespace arcspect::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void atomic_write(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw DomainError("cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) throw DomainError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

std::string sha256_hex(const std::string& data) {
    unsigned char digest[SHA256_DIGEST_LENGTH];
    SHA256(reinterpret_cast<const unsigned char*>(data.data()), data.size(), digest);
    std::string hex;
    char buf[3];
    for (unsigned char byte : digest) {
        std::snprintf(buf, sizeof buf, "%02x", byte);
        hex += buf;
    }
    return hex;
}

std::string trajectories_csv(const std::vector<spectrum::Trajectory>& trajectories) {
    std::string out = "e,re_kR,im_kR,Q,sigma_min,mode_label\n";
    for (const auto& t : trajectories) {
        for (const auto& p : t.points) {
            const auto& r = p.resonance;
            out += format_double(p.e) + ',' + format_double(r.k.real()) + ',' + format_double(r.k.imag()) + ',';
            if (r.k.imag() < 0.0) out += format_double(analysis::quality_factor(r));
            out += ',' + format_double(r.sigma_min) + ',' + t.mode_label + '\n';
        }
    }
    return out;
}

std::string field_pgm(const bem::FieldMap& map, double& max_intensity) {
    max_intensity = 0.0;
    for (const auto& v : map.values) max_intensity = std::max(max_intensity, std::norm(v));
    std::string out = "P2\n" + std::to_string(map.grid.nx) + ' ' + std::to_string(map.grid.ny) + "\n65535\n";
    for (int j = map.grid.ny - 1; j >= 0; --j) {
        for (int i = 0; i < map.grid.nx; ++i) {
            const double v = max_intensity > 0.0 ? std::norm(map.values[map.index(i, j)]) / max_intensity : 0.0;
            out += std::to_string(static_cast<int>(std::lround(v * 65535.0)));
            out += i + 1 < map.grid.nx ? ' ' : '\n';
        }
    }
    return out;
}

std::string field_csv(const bem::FieldMap& map) {
    static const char* names[] = {"inside", "outside", "band"};
    std::string out = "x,y,region,re,im\n";
    for (int j = 0; j < map.grid.ny; ++j) {
        for (int i = 0; i < map.grid.nx; ++i) {
            const auto idx = map.index(i, j);
            out += format_double(map.grid.x(i)) + ',' + format_double(map.grid.y(j)) + ',' +
                   names[static_cast<int>(map.mask[idx])] + ',' + format_double(map.values[idx].real()) + ',' +
                   format_double(map.values[idx].imag()) + '\n';
        }
    }
    return out;
}

std::string husimi_csv(const phase_space::HusimiMap& map) {
    std::string out = "s,p,value\n";
    for (int i = 0; i < map.n_s; ++i)
        for (int q = 0; q < map.n_p; ++q)
            out += format_double(map.s(i)) + ',' + format_double(map.p(q)) + ',' + format_double(map.at(i, q)) + '\n';
    return out;
}

namespace {

json vector_to_json(const bem::CVector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v[i].real());
        a.push_back(v[i].imag());
    }
    return a;
}

bem::CVector vector_from_json(const json& a) {
    if (!a.is_array() || a.size() % 2 != 0) throw DomainError("malformed cached vector");
    bem::CVector v(static_cast<Eigen::Index>(a.size() / 2));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v[i] = {a[2 * i].get<double>(), a[2 * i + 1].get<double>()};
    return v;
}

json complex_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

}  // namespace

json trajectory_to_json(const spectrum::Trajectory& t) {
    json j;
    j["mode_label"] = t.mode_label;
    if (const auto* open = std::get_if<bem::OpenDielectric>(&t.kind)) {
        j["kind"] = "open";
        j["n"] = open->n;
        j["polarization"] = std::string(bem::polarization_name(open->polarization));
    } else {
        j["kind"] = "closed";
        j["n"] = std::get<bem::ClosedDirichlet>(t.kind).n;
    }
    j["sector"] = std::string(bem::parity_name(t.sector));
    j["m"] = t.provenance.m;
    j["l"] = t.provenance.l;
    json points = json::array();
    for (const auto& p : t.points) {
        const auto& r = p.resonance;
        points.push_back({{"e", p.e},
                          {"k", complex_json(r.k)},
                          {"sigma_min", r.sigma_min},
                          {"sigma_median", r.sigma_median},
                          {"parity", std::string(bem::parity_name(r.parity))},
                          {"psi", vector_to_json(r.boundary_psi)},
                          {"dpsi", vector_to_json(r.boundary_dpsi)}});
    }
    j["points"] = std::move(points);
    return j;
}

spectrum::Trajectory trajectory_from_json(const json& j) {
    spectrum::Trajectory t;
    t.mode_label = j.at("mode_label").get<std::string>();
    if (j.at("kind") == "open")
        t.kind = bem::OpenDielectric{j.at("n").get<double>(),
                                     bem::polarization_from_name(j.at("polarization").get<std::string>())};
    else
        t.kind = bem::ClosedDirichlet{j.at("n").get<double>()};
    t.sector = bem::parity_from_name(j.at("sector").get<std::string>());
    t.provenance = {j.at("m").get<int>(), j.at("l").get<int>()};
    for (const auto& p : j.at("points")) {
        bem::Resonance r;
        r.k = {p.at("k")[0].get<double>(), p.at("k")[1].get<double>()};
        r.mu = r.k.real();
        r.omega = -2.0 * r.k.imag();
        r.sigma_min = p.at("sigma_min").get<double>();
        r.sigma_median = p.at("sigma_median").get<double>();
        r.parity = bem::parity_from_name(p.at("parity").get<std::string>());
        r.boundary_psi = vector_from_json(p.at("psi"));
        r.boundary_dpsi = vector_from_json(p.at("dpsi"));
        t.points.push_back({p.at("e").get<double>(), std::move(r)});
    }
    return t;
}

json report_to_json(const analysis::ArcReport& r) {
    json c_re = json::array(), c_im = json::array(), c_abs = json::array();
    for (const auto& z : r.c_product) {
        c_re.push_back(z.real());
        c_im.push_back(z.imag());
        c_abs.push_back(std::abs(z));
    }
    json arc = {{"e_c", r.arc.e_c},
                {"gap_min", r.arc.gap_min},
                {"im_crossings", r.arc.im_crossings},
                {"exchange_detected", r.arc.exchange_detected},
                {"real_crossing", r.arc.real_crossing}};
    const auto& f = r.toy_fit;
    json fit = {{"e", f.e},
                {"re_gamma11", f.re_gamma11},
                {"re_gamma22", f.re_gamma22},
                {"im_gamma11", f.im_gamma11},
                {"im_gamma22", f.im_gamma22},
                {"gamma_prime_est", f.gamma_prime_est},
                {"residual", f.residual},
                {"window", {f.window_lo, f.window_hi}},
                {"center", f.center},
                {"slope", f.slope},
                {"self_energy_min_e", f.self_energy_min_e}};
    std::vector<int> degenerate(r.c_norm_degenerate.begin(), r.c_norm_degenerate.end());
    json out = {{"e", r.e},
                {"overlap", r.overlap},
                {"c_product_re", c_re},
                {"c_product_im", c_im},
                {"c_product_abs", c_abs},
                {"c_norm_degenerate", degenerate},
                {"d_B", r.d_b},
                {"Q1", r.q1},
                {"Q2", r.q2},
                {"delta_L", r.delta_lamb},
                {"delta_mu", r.delta_mu},
                {"arc", arc},
                {"toy_fit", fit},
                {"anticorrelation", r.anticorrelation},
                {"anticorrelation_defined", r.anticorrelation_defined},
                {"overlap_peak_e", r.overlap_peak_e},
                {"d_B_min_e", r.d_b_min_e}};
    out["lamb_crossing_e"] = r.lamb_crossing_e ? json(*r.lamb_crossing_e) : json(nullptr);
    return out;
}

std::string Cache::key(const std::string& operation, const std::string& canonical_config) {
    return sha256_hex(operation + '\n' + canonical_config);
}

std::optional<json> Cache::load(const std::string& key) const {
    const fs::path path = dir_ / (key + ".json");
    std::ifstream in(path);
    if (!in) return std::nullopt;
    try {
        json entry = json::parse(in);
        if (entry.at("key") != key || entry.at("schema_version") != kSchemaVersion) return std::nullopt;
        return entry.at("payload");
    } catch (const json::exception&) {
        return std::nullopt;  // unreadable entries are recomputed
    }
}

void Cache::store(const std::string& key, const std::string& operation, const json& payload) const {
    json entry = {{"key", key}, {"operation", operation}, {"schema_version", kSchemaVersion}, {"payload", payload}};
    atomic_write(dir_ / (key + ".json"), entry.dump());
}

}  // namespace arcspect::cli
