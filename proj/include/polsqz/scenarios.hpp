/**
 * @file scenarios.hpp
 * @brief Named end-to-end measurement scenarios: squeezed-light sources,
 *        beam combination, detection chain, variance spectra relative to
 *        shot noise, and the Poincare noise ellipsoid at a spot frequency.
 *
 * Common-laser relaxation-oscillation noise is correlated between the two
 * source beams (coefficient from the preset), which cancels in the S1
 * difference measurement but adds to S0 and S3 - the mechanism that shapes
 * the packaged spectra at low frequency.
 */

#pragma once

#include "polsqz/apparatus.hpp"
#include "polsqz/opa.hpp"
#include "polsqz/polstate.hpp"
#include "polsqz/stokes.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace polsqz::scenarios {

enum class SourceKind {
    Coherent,                    // one ideal coherent beam, horizontal
    SingleSqueezed,              // one bright squeezed beam, horizontal
    SqueezedVacuumPlusCoherent,  // bright coherent H + squeezed vacuum V
    TwoSqueezed                  // two equal-power squeezed beams on the PBS
};

struct Scenario {
    std::string name;
    std::string description;
    SourceKind kind = SourceKind::Coherent;
    opa::OpaPreset source;       // squeezed-arm preset (both arms for TwoSqueezed)
    double theta = 0.0;
    DetectionChain chain;
    double total_flux = 1e6;     // photons per bandwidth-second at the apparatus
    double f_start_mhz = 3.0;
    double f_stop_mhz = 10.0;
    double f_step_mhz = 0.1;
    double spot_mhz = 8.5;       // ellipsoid evaluation frequency

    std::vector<double> grid() const {
        std::vector<double> g;
        for (double f = f_start_mhz; f <= f_stop_mhz + 1e-9; f += f_step_mhz)
            g.push_back(f);
        return g;
    }
};

/// The prepared state entering the measurement apparatus at frequency f.
inline PolarizationState scenario_state(const Scenario& sc, double f_mhz) {
    const double n = sc.total_flux;
    switch (sc.kind) {
        case SourceKind::Coherent:
            return PolarizationState::coherent(std::sqrt(n), 0.0, 0.0, sc.name);
        case SourceKind::SingleSqueezed: {
            const auto pt = opa::quadrature_spectrum(sc.source.params, sc.source.laser, f_mhz);
            return combine_on_pbs(BeamSpec::squeezed(std::sqrt(n), pt.v_plus, pt.v_minus),
                                  BeamSpec::vacuum(), 0.0, 0.0, sc.name);
        }
        case SourceKind::SqueezedVacuumPlusCoherent: {
            const auto pt = opa::quadrature_spectrum(sc.source.params, sc.source.laser, f_mhz);
            const double excess = opa::laser_excess(sc.source.laser, f_mhz);
            // Bright carrier: the same OPA cavity with the pump off.
            BeamSpec bright = BeamSpec::squeezed(std::sqrt(n), 1.0 + excess, 1.0);
            BeamSpec dim = BeamSpec::squeezed(0.0, pt.v_plus, pt.v_minus);
            PolarizationState s = combine_on_pbs(bright, dim, sc.theta, 0.0, sc.name);
            Eigen::Matrix2d cross = Eigen::Matrix2d::Zero();
            cross(0, 0) = sc.source.laser_correlation * excess;
            return PolarizationState(s.alpha_h, s.alpha_v, s.theta,
                                     NoiseCovariance::from_blocks(s.noise.mode_block(Mode::H),
                                                                  s.noise.mode_block(Mode::V),
                                                                  cross),
                                     sc.name);
        }
        case SourceKind::TwoSqueezed: {
            const auto pt = opa::quadrature_spectrum(sc.source.params, sc.source.laser, f_mhz);
            const double excess = opa::laser_excess(sc.source.laser, f_mhz);
            const double amp = std::sqrt(0.5 * n);
            BeamSpec beam = BeamSpec::squeezed(amp, pt.v_plus, pt.v_minus);
            PolarizationState s = combine_on_pbs(beam, beam, sc.theta, 0.0, sc.name);
            Eigen::Matrix2d cross = Eigen::Matrix2d::Zero();
            cross(0, 0) = sc.source.laser_correlation * excess;
            return PolarizationState(s.alpha_h, s.alpha_v, s.theta,
                                     NoiseCovariance::from_blocks(s.noise.mode_block(Mode::H),
                                                                  s.noise.mode_block(Mode::V),
                                                                  cross),
                                     sc.name);
        }
    }
    throw std::invalid_argument("unknown scenario source kind");
}

struct SpectrumRow {
    double f_mhz;
    std::array<double, 4> v_db;  // S0..S3 variance relative to shot, dB
};

struct ScenarioResult {
    Scenario scenario;
    std::vector<SpectrumRow> spectra;
    NoiseEllipsoid ellipsoid;    // at the spot frequency, from measured variances
    Eigen::Vector4d spot_variances_db;
};

inline std::array<MeasurementResult, 4> measure_all(const PolarizationState& state,
                                                    const DetectionChain& chain) {
    return {measure_stokes(state, StokesConfig::A, chain),
            measure_stokes(state, StokesConfig::B, chain),
            measure_stokes(state, StokesConfig::C, chain),
            measure_stokes(state, StokesConfig::D, chain)};
}

inline ScenarioResult run_scenario(const Scenario& sc) {
    ScenarioResult out;
    out.scenario = sc;
    for (double f : sc.grid()) {
        const PolarizationState state = scenario_state(sc, f);
        const auto meas = measure_all(state, sc.chain);
        SpectrumRow row{f, {}};
        for (int k = 0; k < 4; ++k) row.v_db[k] = 10.0 * std::log10(meas[k].variance);
        out.spectra.push_back(row);
    }

    const PolarizationState spot_state = scenario_state(sc, sc.spot_mhz);
    const auto meas = measure_all(spot_state, sc.chain);
    out.ellipsoid.center = {meas[1].dc_mean, meas[2].dc_mean, meas[3].dc_mean};
    out.ellipsoid.semi_axes = {std::sqrt(meas[1].variance), std::sqrt(meas[2].variance),
                               std::sqrt(meas[3].variance)};
    out.ellipsoid.radial_thickness = std::sqrt(meas[0].variance);
    out.ellipsoid.normalized = true;
    for (int k = 0; k < 4; ++k)
        out.spot_variances_db(k) = 10.0 * std::log10(meas[k].variance);
    return out;
}

inline DetectionChain paper_chain() { return {0.76, 0.0, 1.0}; }

inline std::vector<Scenario> all_scenarios() {
    const double pi_2 = std::numbers::pi / 2.0;
    std::vector<Scenario> list;

    Scenario fig5{"fig5_single_sqz", "single bright amplitude-squeezed beam",
                  SourceKind::SingleSqueezed, opa::preset_paper_amplitude(), 0.0,
                  paper_chain()};
    list.push_back(fig5);

    Scenario fig7{"fig7_sqz_vacuum_plus_coherent",
                  "amplitude-squeezed vacuum overlapped with a bright coherent beam",
                  SourceKind::SqueezedVacuumPlusCoherent, opa::preset_paper_amplitude(), pi_2,
                  DetectionChain{0.76, 0.0, 0.71 / 0.76}};
    list.push_back(fig7);

    Scenario fig8{"fig8_two_phase_sqz", "two phase-squeezed beams, theta locked to pi/2",
                  SourceKind::TwoSqueezed, opa::preset_paper_phase(), pi_2, paper_chain()};
    fig8.f_start_mhz = 4.5;
    list.push_back(fig8);

    Scenario fig11{"fig11_two_amp_sqz", "two amplitude-squeezed beams, theta locked to pi/2",
                   SourceKind::TwoSqueezed, opa::preset_paper_amplitude(), pi_2, paper_chain()};
    list.push_back(fig11);

    Scenario ball_a{"ball_a", "coherent beam: sphere of noise", SourceKind::Coherent,
                    opa::preset_coherent(), 0.0, paper_chain()};
    list.push_back(ball_a);

    Scenario ball_b = fig7;
    ball_b.name = "ball_b";
    ball_b.description = "noise ellipsoid of the squeezed-vacuum-plus-coherent state";
    list.push_back(ball_b);

    Scenario ball_c = fig5;
    ball_c.name = "ball_c";
    ball_c.description = "noise ellipsoid of the single bright squeezed beam";
    list.push_back(ball_c);

    Scenario ball_d = fig8;
    ball_d.name = "ball_d";
    ball_d.description = "pancake-like noise ellipsoid of two phase-squeezed beams";
    list.push_back(ball_d);

    Scenario ball_e = fig11;
    ball_e.name = "ball_e";
    ball_e.description = "cigar-like noise ellipsoid of two amplitude-squeezed beams";
    list.push_back(ball_e);

    return list;
}

inline Scenario scenario_by_name(const std::string& name) {
    for (const Scenario& sc : all_scenarios())
        if (sc.name == name) return sc;
    throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace polsqz::scenarios
