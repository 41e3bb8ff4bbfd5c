/**
 * @file fock.hpp
 * @brief Exact truncated number-basis evaluation of Stokes statistics, used
 *        as the brute-force oracle for the linearized formulas.
 *
 * Single-mode displaced squeezed states D(alpha) S(r, phi)|0> are prepared in
 * a Fock basis truncated at cutoff N.  Squeeze convention:
 *
 *     S(r, phi) = exp[ (r/2) (e^{-i phi} a^2 - e^{i phi} a^dag^2) ]
 *
 * so phi = 0 squeezes the amplitude quadrature X(0) to e^{-2r} and phi = pi
 * squeezes the phase quadrature.  Two-mode Stokes operators are built with
 * the relative phase moved into the V-mode amplitudes (unitary relabeling),
 * i.e. the operator set uses theta = 0.
 */

#pragma once

#include "polsqz/polstate.hpp"
#include "polsqz/stokes.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace polsqz::fock {

using Complex = std::complex<double>;
using VectorXcd = Eigen::VectorXcd;
using MatrixXcd = Eigen::MatrixXcd;

/// Dense operator on a truncated single- or two-mode Fock space.
struct OperatorMatrix {
    int dim = 0;
    MatrixXcd entries;

    OperatorMatrix() = default;
    OperatorMatrix(int d, MatrixXcd m) : dim(d), entries(std::move(m)) {}

    OperatorMatrix adjoint() const { return {dim, entries.adjoint()}; }

    bool is_hermitian(double tol = 1e-10) const {
        const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
        return (entries - entries.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
    }
};

/// Smallest cutoff considered truncation-healthy for amplitude |alpha|.
inline int cutoff_policy(double alpha_abs) {
    return static_cast<int>(std::ceil(alpha_abs * alpha_abs + 10.0 * alpha_abs + 20.0));
}

/// Lowering operator on levels 0..N: a|n> = sqrt(n)|n-1>.
inline OperatorMatrix annihilation_matrix(int n_max) {
    if (n_max < 2) throw std::invalid_argument("annihilation_matrix requires N >= 2");
    MatrixXcd a = MatrixXcd::Zero(n_max + 1, n_max + 1);
    for (int n = 1; n <= n_max; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {n_max + 1, std::move(a)};
}

inline OperatorMatrix creation_matrix(int n_max) { return annihilation_matrix(n_max).adjoint(); }

inline OperatorMatrix number_matrix(int n_max) {
    MatrixXcd n = MatrixXcd::Zero(n_max + 1, n_max + 1);
    for (int k = 0; k <= n_max; ++k) n(k, k) = static_cast<double>(k);
    return {n_max + 1, std::move(n)};
}

namespace detail {

// Dense matrix exponentials become impractical well before the bright-beam
// cutoffs (N ~ 1e4); above this dimension the recurrence construction below
// is used instead.
inline constexpr int kDenseExpmMaxLevels = 320;

inline VectorXcd displaced_squeezed_expm(Complex alpha, double r, double phi, int n_max) {
    const int dim = n_max + 1;
    const MatrixXcd a = annihilation_matrix(n_max).entries;
    const MatrixXcd ad = a.adjoint();

    const Complex phase(std::cos(phi), std::sin(phi));
    MatrixXcd gen_s = 0.5 * r * (std::conj(phase) * (a * a) - phase * (ad * ad));
    MatrixXcd gen_d = alpha * ad - std::conj(alpha) * a;

    VectorXcd psi = VectorXcd::Zero(dim);
    psi(0) = 1.0;
    psi = gen_s.exp() * psi;
    psi = gen_d.exp() * psi;
    return psi;
}

/**
 * Closed-form construction equivalent to D(alpha) S(r,phi)|0> for cutoffs
 * where dense exponentials are out of reach.  The state is the unique
 * solution of (mu a + nu a^dag) psi = kappa psi with mu = cosh r,
 * nu = e^{i phi} sinh r, kappa = mu alpha + nu conj(alpha), giving the
 * three-term recurrence
 *
 *     mu sqrt(n+1) c_{n+1} = kappa c_n - nu sqrt(n) c_{n-1},
 *
 * seeded with c_0 = mu^{-1/2} exp(-|alpha|^2/2 - conj(alpha)^2 nu/(2 mu)).
 * Amplitudes span hundreds of decades for bright beams, so mantissas are
 * carried with an explicit base-2 exponent and only combined at the end.
 */
inline VectorXcd displaced_squeezed_recurrence(Complex alpha, double r, double phi, int n_max) {
    const int dim = n_max + 1;
    const double mu = std::cosh(r);
    const Complex phase(std::cos(phi), std::sin(phi));
    const Complex nu = phase * std::sinh(r);
    const Complex kappa = mu * alpha + nu * std::conj(alpha);

    // log of c_0, split into magnitude (base-2) and phase
    const Complex w = -0.5 * std::norm(alpha) - std::conj(alpha) * std::conj(alpha) * nu / (2.0 * mu);
    const double log2_c0 = (-0.5 * std::log(mu) + w.real()) / std::numbers::ln2;
    Complex z_prev2(0.0, 0.0);                                      // c_{n-1} mantissa
    Complex z_prev(std::cos(w.imag()), std::sin(w.imag()));         // c_n mantissa
    double b_prev2 = log2_c0, b_prev = log2_c0;

    VectorXcd psi = VectorXcd::Zero(dim);
    psi(0) = z_prev * std::exp2(b_prev);
    for (int n = 0; n < n_max; ++n) {
        // align c_{n-1} to c_n's exponent; adjacent amplitudes stay within a
        // few binades of each other so the shift cannot overflow
        const Complex lagged =
            z_prev2 == Complex(0.0, 0.0) ? Complex(0.0, 0.0)
                                         : z_prev2 * std::exp2(b_prev2 - b_prev);
        Complex z_next = (kappa * z_prev - nu * std::sqrt(static_cast<double>(n)) * lagged) /
                         (mu * std::sqrt(static_cast<double>(n + 1)));
        double b_next = b_prev;
        const double mag = std::abs(z_next);
        if (mag > 0.0) {
            const int e = std::ilogb(mag);
            z_next = std::ldexp(1.0, -e) * z_next;
            b_next += e;
        }
        z_prev2 = z_prev;
        b_prev2 = b_prev;
        z_prev = z_next;
        b_prev = b_next;
        psi(n + 1) = z_prev * std::exp2(b_prev);
    }
    return psi;
}

}  // namespace detail

/**
 * D(alpha) S(r, phi)|0> in a basis truncated at N.  Requires the cutoff
 * policy N >= |alpha|^2 + 10 |alpha| + 20; throws when truncation-unhealthy.
 */
inline VectorXcd displaced_squeezed_state(Complex alpha, double r, double phi, int n_max) {
    if (r < 0.0) throw std::invalid_argument("squeeze parameter r must be non-negative");
    if (n_max < cutoff_policy(std::abs(alpha)))
        throw std::domain_error("truncation-unhealthy: cutoff below |alpha|^2 + 10|alpha| + 20");
    VectorXcd psi = (n_max < detail::kDenseExpmMaxLevels)
                        ? detail::displaced_squeezed_expm(alpha, r, phi, n_max)
                        : detail::displaced_squeezed_recurrence(alpha, r, phi, n_max);
    if (std::abs(psi.norm() - 1.0) > 1e-7)
        throw std::domain_error("truncation-unhealthy: state norm drifted from 1");
    return psi;
}

/// Two-mode state on a truncated H (x) V basis; index = ih * (nv + 1) + iv.
struct FockState {
    int nh = 0;
    int nv = 0;
    VectorXcd amps;

    static FockState product(const VectorXcd& psi_h, const VectorXcd& psi_v) {
        FockState s;
        s.nh = static_cast<int>(psi_h.size()) - 1;
        s.nv = static_cast<int>(psi_v.size()) - 1;
        s.amps = Eigen::kroneckerProduct(psi_h, psi_v).eval();
        return s;
    }

    int dim() const { return (nh + 1) * (nv + 1); }
    double norm() const { return amps.norm(); }

    /// Marginal population of the top two levels of one mode.
    double top_population(Mode mode) const {
        const int rows = nh + 1, cols = nv + 1;
        double pop = 0.0;
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) {
                const int level = mode == Mode::H ? i : j;
                const int top = mode == Mode::H ? nh : nv;
                if (level >= top - 1) pop += std::norm(amps(i * cols + j));
            }
        return pop;
    }

    bool truncation_healthy(double tol = 1e-8) const {
        return std::abs(norm() - 1.0) <= 1e-7 &&
               top_population(Mode::H) < tol && top_population(Mode::V) < tol;
    }
};

/**
 * Dense two-mode Stokes operators S0..S3 on per-mode cutoff N, with the
 * relative phase set to zero (carried by the state instead).  All four are
 * Hermitian; S1, S2, S3 satisfy the angular-momentum-like commutators on the
 * truncation interior.
 */
inline std::array<OperatorMatrix, 4> stokes_matrices(int n_max) {
    const MatrixXcd a = annihilation_matrix(n_max).entries;
    const MatrixXcd id = MatrixXcd::Identity(n_max + 1, n_max + 1);
    const MatrixXcd a_h = Eigen::kroneckerProduct(a, id).eval();
    const MatrixXcd a_v = Eigen::kroneckerProduct(id, a).eval();
    const MatrixXcd ad_h = a_h.adjoint();
    const MatrixXcd ad_v = a_v.adjoint();
    const int dim = (n_max + 1) * (n_max + 1);
    const Complex im(0.0, 1.0);

    std::array<OperatorMatrix, 4> s;
    s[0] = {dim, ad_h * a_h + ad_v * a_v};
    s[1] = {dim, ad_h * a_h - ad_v * a_v};
    s[2] = {dim, ad_h * a_v + ad_v * a_h};
    s[3] = {dim, im * (ad_v * a_h) - im * (ad_h * a_v)};
    return s;
}

/// <op> and Var(op) on a two-mode state; op must be Hermitian.
inline std::pair<double, double> mean_and_variance(const OperatorMatrix& op,
                                                   const FockState& state) {
    if (op.dim != state.dim())
        throw std::invalid_argument("operator and state dimensions differ");
    if (!op.is_hermitian())
        throw std::invalid_argument("operator must be Hermitian");
    const VectorXcd applied = op.entries * state.amps;
    const Complex mean_c = state.amps.dot(applied);
    const double scale = std::max(1.0, std::abs(mean_c));
    if (std::abs(mean_c.imag()) > 1e-10 * scale)
        throw std::logic_error("expectation of Hermitian operator came out complex");
    const double mean = mean_c.real();
    const double variance = (applied - mean * state.amps).squaredNorm();
    return {mean, variance};
}

namespace detail {

using RowMat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Ladder operators as index shifts on the (nh+1) x (nv+1) amplitude grid;
// avoids dense operator matrices entirely.
inline RowMat apply_a_h(const RowMat& m) {
    RowMat out = RowMat::Zero(m.rows(), m.cols());
    for (int i = 0; i + 1 < m.rows(); ++i)
        out.row(i) = std::sqrt(static_cast<double>(i + 1)) * m.row(i + 1);
    return out;
}

inline RowMat apply_ad_h(const RowMat& m) {
    RowMat out = RowMat::Zero(m.rows(), m.cols());
    for (int i = 1; i < m.rows(); ++i)
        out.row(i) = std::sqrt(static_cast<double>(i)) * m.row(i - 1);
    return out;
}

inline RowMat apply_a_v(const RowMat& m) {
    RowMat out = RowMat::Zero(m.rows(), m.cols());
    for (int j = 0; j + 1 < m.cols(); ++j)
        out.col(j) = std::sqrt(static_cast<double>(j + 1)) * m.col(j + 1);
    return out;
}

inline RowMat apply_ad_v(const RowMat& m) {
    RowMat out = RowMat::Zero(m.rows(), m.cols());
    for (int j = 1; j < m.cols(); ++j)
        out.col(j) = std::sqrt(static_cast<double>(j)) * m.col(j - 1);
    return out;
}

inline RowMat apply_number(const RowMat& m) {
    RowMat out = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) *= static_cast<double>(i + j);
    return out;
}

inline RowMat apply_number_diff(const RowMat& m) {
    RowMat out = m;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) out(i, j) *= static_cast<double>(i - j);
    return out;
}

}  // namespace detail

struct StokesMoments {
    Eigen::Vector4d mean;
    Eigen::Vector4d variance;
};

/// Stokes means and variances of a two-mode Fock state via shift-structured
/// operator application (matches the dense stokes_matrices exactly).
inline StokesMoments stokes_moments(const FockState& state) {
    using detail::RowMat;
    const int rows = state.nh + 1, cols = state.nv + 1;
    Eigen::Map<const RowMat> psi(state.amps.data(), rows, cols);
    const RowMat psi_m = psi;

    const Complex im(0.0, 1.0);
    const RowMat t1 = detail::apply_ad_h(detail::apply_a_v(psi_m));  // aH^dag aV psi
    const RowMat t2 = detail::apply_ad_v(detail::apply_a_h(psi_m));  // aV^dag aH psi

    std::array<RowMat, 4> applied = {detail::apply_number(psi_m),
                                     detail::apply_number_diff(psi_m),
                                     t1 + t2,
                                     im * (t2 - t1)};
    StokesMoments out;
    for (int k = 0; k < 4; ++k) {
        const Complex mean_c = (psi_m.conjugate().cwiseProduct(applied[k])).sum();
        out.mean(k) = mean_c.real();
        out.variance(k) = (applied[k] - mean_c.real() * psi_m).squaredNorm();
    }
    return out;
}

namespace detail {

struct SingleModeMoments {
    Complex a;    // <a>
    Complex a2;   // <a^2>
    double n;     // <a^dag a>
    double aad;   // <a a^dag>
    double n2;    // <(a^dag a)^2>
};

inline SingleModeMoments single_mode_moments(const VectorXcd& psi) {
    const int dim = static_cast<int>(psi.size());
    VectorXcd lowered = VectorXcd::Zero(dim);
    for (int n = 1; n < dim; ++n) lowered(n - 1) = std::sqrt(static_cast<double>(n)) * psi(n);
    VectorXcd raised = VectorXcd::Zero(dim);
    for (int n = 1; n < dim; ++n) raised(n) = std::sqrt(static_cast<double>(n)) * psi(n - 1);
    VectorXcd lowered2 = VectorXcd::Zero(dim);
    for (int n = 1; n < dim; ++n)
        lowered2(n - 1) = std::sqrt(static_cast<double>(n)) * lowered(n);
    VectorXcd counted = psi;
    for (int n = 0; n < dim; ++n) counted(n) *= static_cast<double>(n);

    SingleModeMoments m;
    m.a = psi.dot(lowered);
    m.a2 = psi.dot(lowered2);
    m.n = lowered.squaredNorm();
    m.aad = raised.squaredNorm();
    m.n2 = counted.squaredNorm();
    return m;
}

}  // namespace detail

/**
 * Stokes moments of a product state psi_H (x) psi_V without forming the
 * two-mode tensor: every required expectation factorizes into single-mode
 * moments, which keeps bright-beam cutoffs (N ~ 1e4 per mode) cheap.
 */
inline StokesMoments product_stokes_moments(const VectorXcd& psi_h, const VectorXcd& psi_v) {
    const auto h = detail::single_mode_moments(psi_h);
    const auto v = detail::single_mode_moments(psi_v);

    const double var_nh = h.n2 - h.n * h.n;
    const double var_nv = v.n2 - v.n * v.n;
    const Complex z = std::conj(h.a) * v.a;           // <aH^dag><aV>
    const Complex q = std::conj(h.a2) * v.a2;         // <aH^dag^2><aV^2>
    const double symmetric = h.n * v.aad + h.aad * v.n;

    StokesMoments out;
    out.mean(0) = h.n + v.n;
    out.mean(1) = h.n - v.n;
    out.mean(2) = 2.0 * z.real();
    out.mean(3) = 2.0 * z.imag();
    out.variance(0) = var_nh + var_nv;
    out.variance(1) = var_nh + var_nv;
    out.variance(2) = 2.0 * q.real() + symmetric - out.mean(2) * out.mean(2);
    out.variance(3) = -2.0 * q.real() + symmetric - out.mean(3) * out.mean(3);
    return out;
}

enum class SqueezeQuadrature { Amplitude, Phase };

/// One quadrature-squeezed (or coherent, r = 0) input beam.
struct BeamPrep {
    double r = 0.0;
    SqueezeQuadrature quad = SqueezeQuadrature::Amplitude;
};

/// Two-beam preparation: real amplitudes, relative phase, per-beam squeezing.
struct OracleStateSpec {
    double alpha_h = 0.0;
    double alpha_v = 0.0;
    double theta = 0.0;
    BeamPrep h;
    BeamPrep v;
};

struct OracleRow {
    std::string statistic;
    double linearized;
    double exact;
    double rel_dev;
};

struct OracleReport {
    std::array<OracleRow, 8> rows;
    bool linearization_suspect = false;
    int cutoff_h = 0;
    int cutoff_v = 0;
    double max_rel_dev = 0.0;
};

/// Linearized covariance entry for one squeezed beam.
inline std::pair<double, double> beam_quadrature_variances(const BeamPrep& b) {
    const double sq = std::exp(-2.0 * b.r), anti = std::exp(2.0 * b.r);
    return b.quad == SqueezeQuadrature::Amplitude ? std::make_pair(sq, anti)
                                                  : std::make_pair(anti, sq);
}

inline PolarizationState linearized_state(const OracleStateSpec& spec) {
    const auto [vhp, vhm] = beam_quadrature_variances(spec.h);
    const auto [vvp, vvm] = beam_quadrature_variances(spec.v);
    return PolarizationState(spec.alpha_h, spec.alpha_v, spec.theta,
                             NoiseCovariance::uncorrelated(vhp, vhm, vvp, vvm),
                             "oracle");
}

/**
 * Compares the linearized Stokes statistics against the exact truncated
 * Fock computation for every mean and variance.  Product states above the
 * tensor budget use the factorized moment path (exact for independent
 * beams); the linearization-suspect regime is flagged but still evaluated.
 */
inline OracleReport oracle_compare(const OracleStateSpec& spec) {
    const auto cutoff = [](double alpha_abs, double r) {
        return static_cast<int>(
            std::ceil(alpha_abs * alpha_abs + (10.0 + 8.0 * r) * alpha_abs + 20.0));
    };
    OracleReport rep;
    rep.cutoff_h = cutoff(spec.alpha_h, spec.h.r);
    rep.cutoff_v = cutoff(spec.alpha_v, spec.v.r);

    const double squeeze_photons = std::sinh(spec.h.r) * std::sinh(spec.h.r) +
                                   std::sinh(spec.v.r) * std::sinh(spec.v.r);
    const double flux = spec.alpha_h * spec.alpha_h + spec.alpha_v * spec.alpha_v;
    rep.linearization_suspect = flux < 100.0 * squeeze_photons;

    // Exact path: theta = 0 operators; phase folded into the V amplitude and
    // the V squeeze ellipse rotated with it.
    const double phi_h = spec.h.quad == SqueezeQuadrature::Amplitude ? 0.0 : std::numbers::pi;
    const double phi_v = spec.v.quad == SqueezeQuadrature::Amplitude ? 0.0 : std::numbers::pi;
    const Complex alpha_v_lab =
        spec.alpha_v * Complex(std::cos(spec.theta), std::sin(spec.theta));
    const VectorXcd psi_h =
        displaced_squeezed_state(spec.alpha_h, spec.h.r, phi_h, rep.cutoff_h);
    const VectorXcd psi_v =
        displaced_squeezed_state(alpha_v_lab, spec.v.r, phi_v + 2.0 * spec.theta, rep.cutoff_v);

    constexpr long kTensorBudget = 250000;
    const StokesMoments exact =
        (static_cast<long>(psi_h.size()) * static_cast<long>(psi_v.size()) <= kTensorBudget)
            ? stokes_moments(FockState::product(psi_h, psi_v))
            : product_stokes_moments(psi_h, psi_v);

    const PolarizationState lin = linearized_state(spec);
    const StokesStatistics lin_stats = stokes_statistics(lin);

    const double floor = 1e-9 * std::max(1.0, exact.mean(0));
    const char* names[8] = {"S0_mean", "S1_mean", "S2_mean", "S3_mean",
                            "S0_var",  "S1_var",  "S2_var",  "S3_var"};
    for (int k = 0; k < 8; ++k) {
        const double lin_val = k < 4 ? lin_stats.mean(k) : lin_stats.variance(k - 4);
        const double exact_val = k < 4 ? exact.mean(k) : exact.variance(k - 4);
        const double denom = std::max(std::abs(exact_val), floor);
        const double dev = std::abs(lin_val - exact_val) / denom;
        rep.rows[k] = {names[k], lin_val, exact_val, dev};
        rep.max_rel_dev = std::max(rep.max_rel_dev, dev);
    }
    return rep;
}

/// Max |entries| of a two-mode operator restricted to total photon number
/// <= budget on both sides; the commutator identities are exact there.
inline double interior_restricted_max(const OperatorMatrix& op, int n_max, int budget) {
    const int cols = n_max + 1;
    double worst = 0.0;
    for (int r = 0; r < op.dim; ++r) {
        if (r / cols + r % cols > budget) continue;
        for (int c = 0; c < op.dim; ++c) {
            if (c / cols + c % cols > budget) continue;
            worst = std::max(worst, std::abs(op.entries(r, c)));
        }
    }
    return worst;
}

}  // namespace polsqz::fock
