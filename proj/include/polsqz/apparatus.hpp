/**
 * @file apparatus.hpp
 * @brief Waveplate optics, optical loss, beam combination and the four
 *        Stokes-parameter detection arrangements (sum/difference photocurrent
 *        after a polarizing beam splitter).
 *
 * Jones convention: a plate with retardance G and fast axis at angle rho has
 *     J = R(rho) diag(e^{-iG/2}, e^{+iG/2}) R(-rho).
 * Detector loss is a single effective beamsplitter (vacuum admixture) in
 * front of an ideal detector pair; dark noise adds in shot-noise units and
 * can be subtracted the way a calibrated measurement would.
 */

#pragma once

#include "polsqz/polstate.hpp"
#include "polsqz/stokes.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace polsqz {

struct WavePlate {
    double retardance;  // pi for lambda/2, pi/2 for lambda/4
    double axis_angle;  // fast-axis angle, radians

    Eigen::Matrix2cd jones() const {
        const std::complex<double> im(0.0, 1.0);
        Eigen::Matrix2d rot;
        rot << std::cos(axis_angle), -std::sin(axis_angle),
               std::sin(axis_angle),  std::cos(axis_angle);
        Eigen::Matrix2cd retard = Eigen::Matrix2cd::Zero();
        retard(0, 0) = std::exp(-im * (retardance / 2.0));
        retard(1, 1) = std::exp(im * (retardance / 2.0));
        return rot.cast<std::complex<double>>() * retard *
               rot.transpose().cast<std::complex<double>>();
    }

    static WavePlate half_wave(double axis) { return {std::numbers::pi, axis}; }
    static WavePlate quarter_wave(double axis) { return {std::numbers::pi / 2.0, axis}; }
};

namespace detail {

/// Quadrature-plane rotation for a mode picking up phase phi: a -> a e^{i phi}.
inline Eigen::Matrix2d quadrature_rotation(double phi) {
    Eigen::Matrix2d r;
    r << std::cos(phi), -std::sin(phi),
         std::sin(phi),  std::cos(phi);
    return r;
}

/// Real 4x4 action of a complex 2x2 mode map on (X_H+, X_H-, X_V+, X_V-).
inline Eigen::Matrix4d jones_quadrature_map(const Eigen::Matrix2cd& j) {
    Eigen::Matrix4d m;
    for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) {
            m(2 * k, 2 * l) = j(k, l).real();
            m(2 * k, 2 * l + 1) = -j(k, l).imag();
            m(2 * k + 1, 2 * l) = j(k, l).imag();
            m(2 * k + 1, 2 * l + 1) = j(k, l).real();
        }
    return m;
}

struct LabState {
    Eigen::Vector2cd amps;   // complex mode amplitudes in the lab frame
    Eigen::Matrix4d cov;     // quadrature covariance in the lab frame
};

inline LabState to_lab(const PolarizationState& s) {
    LabState lab;
    lab.amps << std::complex<double>(s.alpha_h, 0.0),
        s.alpha_v * std::complex<double>(std::cos(s.theta), std::sin(s.theta));
    Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
    rot.block<2, 2>(2, 2) = quadrature_rotation(s.theta);
    lab.cov = rot * s.noise.matrix() * rot.transpose();
    return lab;
}

/// Back to real amplitudes: each mode's noise frame is rotated to follow its
/// own classical phase; a vanished amplitude keeps phase zero.
inline PolarizationState from_lab(const LabState& lab, const std::string& label) {
    const double mag_h = std::abs(lab.amps(0));
    const double mag_v = std::abs(lab.amps(1));
    const double scale = std::max({mag_h, mag_v, 1e-300});
    const double phi_h = mag_h > 1e-12 * scale ? std::arg(lab.amps(0)) : 0.0;
    const double phi_v = mag_v > 1e-12 * scale ? std::arg(lab.amps(1)) : phi_h;

    Eigen::Matrix4d rot = Eigen::Matrix4d::Identity();
    rot.block<2, 2>(0, 0) = quadrature_rotation(-phi_h);
    rot.block<2, 2>(2, 2) = quadrature_rotation(-phi_v);
    return PolarizationState(mag_h, mag_v, phi_v - phi_h,
                             NoiseCovariance(rot * lab.cov * rot.transpose()), label);
}

}  // namespace detail

/// Passes a state through an arbitrary 2x2 unitary on the (H, V) modes.
inline PolarizationState apply_jones(const PolarizationState& s, const Eigen::Matrix2cd& j) {
    if ((j * j.adjoint() - Eigen::Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument("Jones matrix must be unitary");
    detail::LabState lab = detail::to_lab(s);
    lab.amps = j * lab.amps;
    const Eigen::Matrix4d map = detail::jones_quadrature_map(j);
    lab.cov = map * lab.cov * map.transpose();
    return detail::from_lab(lab, s.label);
}

inline PolarizationState apply_jones(const PolarizationState& s, const WavePlate& plate) {
    return apply_jones(s, plate.jones());
}

/// Vacuum-admixture beamsplitter loss on both modes: amplitudes scale by
/// sqrt(eta), the covariance contracts toward the identity.
inline PolarizationState apply_loss(const PolarizationState& s, double eta) {
    if (!(eta > 0.0 && eta <= 1.0))
        throw std::invalid_argument("efficiency must lie in (0, 1]");
    const Eigen::Matrix4d m =
        eta * s.noise.matrix() + (1.0 - eta) * Eigen::Matrix4d::Identity();
    return PolarizationState(std::sqrt(eta) * s.alpha_h, std::sqrt(eta) * s.alpha_v,
                             s.theta, NoiseCovariance(m), s.label);
}

/// One input arm of the polarizing beam splitter: a real amplitude plus its
/// own-frame quadrature noise block (V+, V-, and their covariance).
struct BeamSpec {
    double alpha = 0.0;
    double v_plus = 1.0;
    double v_minus = 1.0;
    double cross = 0.0;

    static BeamSpec vacuum() { return {}; }
    static BeamSpec coherent(double amplitude) { return {amplitude, 1.0, 1.0, 0.0}; }
    static BeamSpec squeezed(double amplitude, double v_plus, double v_minus) {
        return {amplitude, v_plus, v_minus, 0.0};
    }
};

/**
 * Overlaps two independent beams with orthogonal polarizations on a PBS,
 * producing a single beam with block-diagonal two-mode noise and relative
 * phase theta.  Residual phase-lock jitter (rms radians) adds noise to the
 * V-mode phase quadrature.
 */
inline PolarizationState combine_on_pbs(const BeamSpec& h_beam, const BeamSpec& v_beam,
                                        double theta, double theta_jitter_rms = 0.0,
                                        std::string label = {}) {
    Eigen::Matrix2d h_block, v_block;
    h_block << h_beam.v_plus, h_beam.cross, h_beam.cross, h_beam.v_minus;
    v_block << v_beam.v_plus, v_beam.cross, v_beam.cross, v_beam.v_minus;
    v_block(1, 1) += 4.0 * v_beam.alpha * v_beam.alpha * theta_jitter_rms * theta_jitter_rms;
    return PolarizationState(h_beam.alpha, v_beam.alpha, theta,
                             NoiseCovariance::from_blocks(h_block, v_block),
                             std::move(label));
}

/// The four detection arrangements: sum photocurrent (S0) or difference
/// photocurrent with no plate (S1), a half-wave plate at 22.5 deg (S2), or
/// half-wave plus quarter-wave plate (S3).
enum class StokesConfig { A, B, C, D };

struct DetectionChain {
    double efficiency = 1.0;   // photodetection + optics + escape, in (0, 1]
    double dark_noise = 0.0;   // detector dark variance relative to shot noise
    double mode_match = 1.0;   // overlap efficiency of interfering beams

    double eta_effective() const { return efficiency * mode_match; }

    void validate() const {
        if (!(efficiency > 0.0 && efficiency <= 1.0))
            throw std::invalid_argument("efficiency must lie in (0, 1]");
        if (!(mode_match > 0.0 && mode_match <= 1.0))
            throw std::invalid_argument("mode_match must lie in (0, 1]");
        if (dark_noise < 0.0) throw std::invalid_argument("dark noise must be >= 0");
    }

    static DetectionChain ideal() { return {}; }
};

struct MeasurementResult {
    double dc_mean = 0.0;     // photons per bandwidth-second at the detectors
    double variance = 0.0;    // normalized to the shot noise of the detected beam
    bool dark_corrected = false;
};

namespace detail {

inline PolarizationState configured_state(const PolarizationState& s, StokesConfig config) {
    switch (config) {
        case StokesConfig::A:
        case StokesConfig::B:
            return s;
        case StokesConfig::C:
            return apply_jones(s, WavePlate::half_wave(std::numbers::pi / 8.0));
        case StokesConfig::D: {
            PolarizationState rotated =
                apply_jones(s, WavePlate::half_wave(std::numbers::pi / 8.0));
            return apply_jones(rotated, WavePlate::quarter_wave(-std::numbers::pi / 4.0));
        }
    }
    throw std::invalid_argument("unknown measurement configuration");
}

}  // namespace detail

/**
 * Simulates one Stokes measurement: effective loss, the configuration's
 * plates, PBS split, then the sum (config a) or difference (b, c, d) of the
 * two photocurrents.  The variance is reported relative to the shot noise of
 * the detected beam; dark noise is added and optionally subtracted again.
 */
inline MeasurementResult measure_stokes(const PolarizationState& s, StokesConfig config,
                                        const DetectionChain& chain = DetectionChain::ideal(),
                                        bool dark_correct = true) {
    chain.validate();
    const PolarizationState detected = apply_loss(s, chain.eta_effective());
    const PolarizationState analyzed = detail::configured_state(detected, config);
    const StokesStatistics st = stokes_statistics(analyzed);

    const int channel = config == StokesConfig::A ? 0 : 1;
    const double shot = st.mean(0);  // detected coherent-equivalent variance
    MeasurementResult out;
    out.dc_mean = st.mean(channel);
    out.variance = st.variance(channel) / shot + chain.dark_noise;
    if (dark_correct) {
        out.variance -= chain.dark_noise;
        out.dark_corrected = true;
    }
    return out;
}

/**
 * Shot-noise calibration: the absolute variance of a coherent beam of the
 * given power measured in configuration c, which is the normalization
 * denominator for squeezing claims.  A power mismatch propagates linearly.
 */
inline double shot_noise_reference(double power,
                                   const DetectionChain& chain = DetectionChain::ideal()) {
    if (!(power > 0.0)) throw std::invalid_argument("reference power must be positive");
    chain.validate();
    const PolarizationState reference =
        PolarizationState::coherent(std::sqrt(power), 0.0, 0.0, "shot reference");
    const PolarizationState detected = apply_loss(reference, chain.eta_effective());
    const PolarizationState analyzed = detail::configured_state(detected, StokesConfig::C);
    const StokesStatistics st = stokes_statistics(analyzed);
    return st.variance(1);  // absolute units: equals the detected power
}

}  // namespace polsqz
