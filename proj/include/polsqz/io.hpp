/**
 * @file io.hpp
 * @brief File formats: state/ellipsoid/preset/report JSON and the spectra and
 *        capacity CSV tables.  Output is deterministic so reruns are
 *        byte-identical.
 */

#pragma once

#include "polsqz/apparatus.hpp"
#include "polsqz/capacity.hpp"
#include "polsqz/fock.hpp"
#include "polsqz/opa.hpp"
#include "polsqz/polstate.hpp"
#include "polsqz/scenarios.hpp"
#include "polsqz/stokes.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polsqz::io {

using Json = nlohmann::ordered_json;

// ---- polarization state files ------------------------------------------------

inline Json state_to_json(const PolarizationState& s) {
    Json j;
    j["alpha_h"] = s.alpha_h;
    j["alpha_v"] = s.alpha_v;
    j["theta"] = s.theta;
    Json rows = Json::array();
    for (int r = 0; r < 4; ++r) {
        Json row = Json::array();
        for (int c = 0; c < 4; ++c) row.push_back(s.noise.matrix()(r, c));
        rows.push_back(row);
    }
    j["covariance"] = rows;
    j["label"] = s.label;
    return j;
}

inline PolarizationState state_from_json(const Json& j) {
    Eigen::Matrix4d m;
    const auto& rows = j.at("covariance");
    if (rows.size() != 4) throw std::invalid_argument("covariance must be 4x4");
    for (int r = 0; r < 4; ++r) {
        if (rows[r].size() != 4) throw std::invalid_argument("covariance must be 4x4");
        for (int c = 0; c < 4; ++c) m(r, c) = rows[r][c].get<double>();
    }
    return PolarizationState(j.at("alpha_h").get<double>(), j.at("alpha_v").get<double>(),
                             j.at("theta").get<double>(), NoiseCovariance(m),
                             j.value("label", std::string{}));
}

// ---- ellipsoid export ----------------------------------------------------------

inline Json ellipsoid_to_json(const NoiseEllipsoid& e) {
    Json j;
    j["center"] = {e.center(0), e.center(1), e.center(2)};
    j["semi_axes"] = {e.semi_axes(0), e.semi_axes(1), e.semi_axes(2)};
    j["radial_thickness"] = e.radial_thickness;
    j["normalized"] = e.normalized;
    return j;
}

// ---- measurement configuration --------------------------------------------------

struct MeasurementConfig {
    StokesConfig config = StokesConfig::A;
    DetectionChain chain;
    bool dark_correct = true;
};

inline MeasurementConfig measurement_config_from_json(const Json& j) {
    MeasurementConfig mc;
    const std::string c = j.at("config").get<std::string>();
    if (c == "a") mc.config = StokesConfig::A;
    else if (c == "b") mc.config = StokesConfig::B;
    else if (c == "c") mc.config = StokesConfig::C;
    else if (c == "d") mc.config = StokesConfig::D;
    else throw std::invalid_argument("config must be one of a, b, c, d");
    mc.chain.efficiency = j.at("efficiency").get<double>();
    mc.chain.mode_match = j.value("mode_match", 1.0);
    const double dark_db = j.value("dark_noise_db", -300.0);
    mc.chain.dark_noise = dark_db <= -300.0 ? 0.0 : std::pow(10.0, dark_db / 10.0);
    mc.dark_correct = j.value("dark_correct", true);
    mc.chain.validate();
    return mc;
}

// ---- OPA preset files -----------------------------------------------------------

inline Json preset_to_json(const opa::OpaPreset& p) {
    Json j;
    j["x"] = p.params.x;
    j["gamma_mhz"] = p.params.gamma_mhz;
    j["eta_esc"] = p.params.eta_esc;
    j["lock"] = p.params.lock == opa::Lock::Deamplification ? "deamplification"
                                                            : "amplification";
    j["laser"] = {{"f_relax_mhz", p.laser.f_relax_mhz},
                  {"peak_db", p.laser.peak_db},
                  {"width_mhz", p.laser.width_mhz}};
    j["laser_correlation"] = p.laser_correlation;
    return j;
}

inline opa::OpaPreset preset_from_json(const Json& j, std::string name = "custom") {
    opa::OpaPreset p;
    p.name = std::move(name);
    p.params.x = j.at("x").get<double>();
    p.params.gamma_mhz = j.at("gamma_mhz").get<double>();
    p.params.eta_esc = j.at("eta_esc").get<double>();
    const std::string lock = j.at("lock").get<std::string>();
    if (lock == "deamplification") p.params.lock = opa::Lock::Deamplification;
    else if (lock == "amplification") p.params.lock = opa::Lock::Amplification;
    else throw std::invalid_argument("lock must be deamplification or amplification");
    const auto& laser = j.at("laser");
    p.laser.f_relax_mhz = laser.at("f_relax_mhz").get<double>();
    p.laser.peak_db = laser.at("peak_db").get<double>();
    p.laser.width_mhz = laser.at("width_mhz").get<double>();
    p.laser_correlation = j.value("laser_correlation", 1.0);
    p.params.validate();
    p.laser.validate();
    return p;
}

// ---- oracle validation report ----------------------------------------------------

inline Json oracle_report_to_json(const fock::OracleReport& rep) {
    Json rows = Json::array();
    for (const auto& r : rep.rows)
        rows.push_back({{"statistic", r.statistic},
                        {"linearized", r.linearized},
                        {"exact", r.exact},
                        {"rel_dev", r.rel_dev}});
    Json j;
    j["table"] = rows;
    j["max_rel_dev"] = rep.max_rel_dev;
    j["linearization_suspect"] = rep.linearization_suspect;
    j["cutoff_h"] = rep.cutoff_h;
    j["cutoff_v"] = rep.cutoff_v;
    return j;
}

// ---- CSV tables -------------------------------------------------------------------

inline std::string format_fixed(double value, int decimals = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
    return buf;
}

inline std::string format_sig(double value, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, value);
    return buf;
}

inline std::string spectra_csv(const std::vector<scenarios::SpectrumRow>& rows) {
    std::ostringstream out;
    out << "freq_mhz,v0_db,v1_db,v2_db,v3_db\n";
    for (const auto& r : rows) {
        out << format_fixed(r.f_mhz, 4);
        for (double v : r.v_db) out << ',' << format_fixed(v, 6);
        out << '\n';
    }
    return out.str();
}

inline std::string capacity_csv(const std::vector<capacity::CurveRow>& rows,
                                const std::vector<capacity::Scheme>& schemes) {
    std::ostringstream out;
    out << "n_bar";
    for (auto s : schemes) out << ',' << capacity::scheme_name(s);
    out << '\n';
    for (const auto& r : rows) {
        out << format_sig(r.n_bar, 6);
        for (double b : r.bits) out << ',' << format_sig(b, 6);
        out << '\n';
    }
    return out.str();
}

inline std::string opa_spectrum_csv(const std::vector<opa::QuadratureSpectrumPoint>& rows) {
    std::ostringstream out;
    out << "freq_mhz,v_plus,v_minus\n";
    for (const auto& r : rows)
        out << format_fixed(r.f_mhz, 4) << ',' << format_sig(r.v_plus, 8) << ','
            << format_sig(r.v_minus, 8) << '\n';
    return out.str();
}

inline void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << contents;
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace polsqz::io
