/**
 * @file polstate.hpp
 * @brief Linearized two-mode Gaussian representation of a bright polarized beam.
 *
 * A beam is described by two real mode amplitudes (horizontal and vertical),
 * the relative phase theta between the modes, and a 4x4 symmetric covariance
 * of the quadrature noise operators in the ordered basis
 *
 *     (dX_H+, dX_H-, dX_V+, dX_V-)
 *
 * where X+ is the amplitude quadrature and X- the phase quadrature of each
 * mode, normalized so that a coherent (or vacuum) beam has the identity
 * covariance.  Each mode's quadratures are defined in the frame in which its
 * classical amplitude is real; the relative phase is carried by theta alone.
 */

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace polsqz {

enum class Mode { H = 0, V = 1 };

inline double wrap_two_pi(double angle) {
    const double two_pi = 2.0 * std::numbers::pi;
    double a = std::fmod(angle, two_pi);
    if (a < 0.0) a += two_pi;
    return a;
}

/**
 * Symmetric positive semi-definite 4x4 quadrature noise covariance.
 *
 * Invariants enforced at construction:
 *  - symmetric (input must match its transpose to 1e-9; stored exactly symmetric)
 *  - eigenvalues >= -1e-12
 *  - per-mode Heisenberg bound: V+ V- - C^2 >= 1 - 1e-9 for each mode block
 */
class NoiseCovariance {
public:
    NoiseCovariance() : m_(Eigen::Matrix4d::Identity()) {}

    explicit NoiseCovariance(const Eigen::Matrix4d& m) {
        const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
        if (!m.allFinite())
            throw std::invalid_argument("noise covariance has non-finite entries");
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
            throw std::invalid_argument("noise covariance must be symmetric");
        m_ = 0.5 * (m + m.transpose());

        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m_, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-12)
            throw std::invalid_argument("noise covariance must be positive semi-definite");

        for (int b : {0, 2}) {
            const double det = m_(b, b) * m_(b + 1, b + 1) - m_(b, b + 1) * m_(b, b + 1);
            if (det < 1.0 - 1e-9)
                throw std::invalid_argument(
                    "mode block violates the Heisenberg bound V+ V- - C^2 >= 1");
        }
    }

    static NoiseCovariance identity() { return NoiseCovariance(); }

    /// Block-diagonal covariance from per-mode (V+, V-, C) entries.
    static NoiseCovariance uncorrelated(double vh_plus, double vh_minus,
                                        double vv_plus, double vv_minus,
                                        double ch = 0.0, double cv = 0.0) {
        Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
        m(0, 0) = vh_plus;
        m(1, 1) = vh_minus;
        m(0, 1) = m(1, 0) = ch;
        m(2, 2) = vv_plus;
        m(3, 3) = vv_minus;
        m(2, 3) = m(3, 2) = cv;
        return NoiseCovariance(m);
    }

    static NoiseCovariance from_blocks(const Eigen::Matrix2d& h_block,
                                       const Eigen::Matrix2d& v_block,
                                       const Eigen::Matrix2d& cross = Eigen::Matrix2d::Zero()) {
        Eigen::Matrix4d m;
        m.block<2, 2>(0, 0) = h_block;
        m.block<2, 2>(2, 2) = v_block;
        m.block<2, 2>(0, 2) = cross;
        m.block<2, 2>(2, 0) = cross.transpose();
        return NoiseCovariance(m);
    }

    const Eigen::Matrix4d& matrix() const { return m_; }

    Eigen::Matrix2d mode_block(Mode mode) const {
        const int b = mode == Mode::H ? 0 : 2;
        return m_.block<2, 2>(b, b);
    }

    /// Upper-right block: covariances between H and V quadratures.
    Eigen::Matrix2d cross_block() const { return m_.block<2, 2>(0, 2); }

    double max_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().maxCoeff();
    }

    bool is_identity(double tol = 1e-12) const {
        return (m_ - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() <= tol;
    }

private:
    Eigen::Matrix4d m_;
};

/**
 * Bright two-mode beam in the linearized formalism: real non-negative
 * amplitudes, relative phase theta in [0, 2pi), and quadrature noise.
 * Amplitudes are in sqrt(photons / (bandwidth * s)); the squared amplitudes
 * are photon fluxes.
 */
struct PolarizationState {
    double alpha_h = 0.0;
    double alpha_v = 0.0;
    double theta = 0.0;
    NoiseCovariance noise;
    std::string label;

    PolarizationState() = default;

    PolarizationState(double a_h, double a_v, double phase,
                      NoiseCovariance cov = NoiseCovariance::identity(),
                      std::string name = {})
        : alpha_h(a_h), alpha_v(a_v), theta(wrap_two_pi(phase)),
          noise(std::move(cov)), label(std::move(name)) {
        if (!std::isfinite(alpha_h) || !std::isfinite(alpha_v) || !std::isfinite(phase))
            throw std::invalid_argument("state parameters must be finite");
        if (alpha_h < 0.0 || alpha_v < 0.0)
            throw std::invalid_argument("amplitudes must be non-negative; phase lives in theta");
    }

    double mean_photon_flux() const { return alpha_h * alpha_h + alpha_v * alpha_v; }

    /// Linearization is trusted when the carrier dwarfs the noise.  A state
    /// failing this is still usable; callers may warn.
    bool linearization_suspect() const {
        return mean_photon_flux() < 10.0 * noise.max_eigenvalue();
    }

    static PolarizationState coherent(double a_h, double a_v, double phase,
                                      std::string name = "coherent") {
        return PolarizationState(a_h, a_v, phase, NoiseCovariance::identity(),
                                 std::move(name));
    }
};

/// Variance of the rotated quadrature dX(xi) = cos(xi) dX+ + sin(xi) dX- of one mode.
inline double quadrature_variance(const NoiseCovariance& noise, Mode mode, double xi) {
    const Eigen::Matrix2d b = noise.mode_block(mode);
    const double c = std::cos(xi), s = std::sin(xi);
    return c * c * b(0, 0) + s * s * b(1, 1) + 2.0 * s * c * b(0, 1);
}

inline double quadrature_variance(const PolarizationState& state, Mode mode, double xi) {
    return quadrature_variance(state.noise, mode, xi);
}

/// Symmetrized covariance between dX_H(xi_h) and dX_V(xi_v); bilinear in the
/// cross-block entries.
inline double cross_quadrature_covariance(const NoiseCovariance& noise,
                                          double xi_h, double xi_v) {
    const Eigen::Matrix2d x = noise.cross_block();
    const double ch = std::cos(xi_h), sh = std::sin(xi_h);
    const double cv = std::cos(xi_v), sv = std::sin(xi_v);
    return ch * cv * x(0, 0) + ch * sv * x(0, 1) + sh * cv * x(1, 0) + sh * sv * x(1, 1);
}

inline double cross_quadrature_covariance(const PolarizationState& state,
                                          double xi_h, double xi_v) {
    return cross_quadrature_covariance(state.noise, xi_h, xi_v);
}

}  // namespace polsqz
