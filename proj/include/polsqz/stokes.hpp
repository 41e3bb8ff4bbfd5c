/**
 * @file stokes.hpp
 * @brief Stokes-operator means, variances, uncertainty products and the
 *        Poincare-sphere noise ellipsoid of a linearized polarization state.
 *
 * Means follow the classical Stokes parameters; variances decompose into the
 * two-mode quadrature covariances.  Everything is normalized so that a
 * coherent beam has all four Stokes variances equal to its photon flux <n>
 * (the shot noise).
 */

#pragma once

#include "polsqz/polstate.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace polsqz {

/// Means <S0..S3> and variances V0..V3 at one sideband frequency,
/// in photons per bandwidth-second.
struct StokesStatistics {
    Eigen::Vector4d mean;
    Eigen::Vector4d variance;

    double photon_flux() const { return mean(0); }
};

/// Axis-aligned standard-deviation ellipsoid on the Poincare sphere.
/// The radial thickness is the S0 (vector length) uncertainty.
struct NoiseEllipsoid {
    Eigen::Vector3d center;
    Eigen::Vector3d semi_axes;
    double radial_thickness = 0.0;
    bool normalized = false;
};

/// (S0, S1, S2, S3) = (aH^2 + aV^2, aH^2 - aV^2, 2 aH aV cos t, 2 aH aV sin t).
inline Eigen::Vector4d stokes_means(const PolarizationState& s) {
    const double h2 = s.alpha_h * s.alpha_h;
    const double v2 = s.alpha_v * s.alpha_v;
    const double cross = 2.0 * s.alpha_h * s.alpha_v;
    return {h2 + v2, h2 - v2, cross * std::cos(s.theta), cross * std::sin(s.theta)};
}

/**
 * Stokes variances for arbitrary (possibly cross-correlated) two-mode noise:
 *   V0, V1 from the amplitude quadratures with a +/- cross term,
 *   V2(t)  from dX_V(-t) and dX_H(t) including their covariance,
 *   V3(t)  = V2(t - pi/2).
 */
inline Eigen::Vector4d stokes_variances_general(const PolarizationState& s) {
    const double h2 = s.alpha_h * s.alpha_h;
    const double v2 = s.alpha_v * s.alpha_v;
    const double hv = 2.0 * s.alpha_h * s.alpha_v;
    const Eigen::Matrix4d& m = s.noise.matrix();

    const double v0 = h2 * m(0, 0) + v2 * m(2, 2) + hv * m(0, 2);
    const double v1 = h2 * m(0, 0) + v2 * m(2, 2) - hv * m(0, 2);

    const auto v2_at = [&](double t) {
        return h2 * quadrature_variance(s.noise, Mode::V, -t) +
               v2 * quadrature_variance(s.noise, Mode::H, t) +
               hv * cross_quadrature_covariance(s.noise, t, -t);
    };

    return {v0, v1, v2_at(s.theta), v2_at(s.theta - std::numbers::pi / 2.0)};
}

/**
 * Variance decomposition for beams with uncorrelated quantum noise between
 * the H and V modes (block-diagonal covariance): the cos^2/sin^2 form in the
 * relative phase.  Rejects states with a non-zero cross block; for those the
 * general path must be used.
 */
inline Eigen::Vector4d stokes_variances_uncorrelated(const PolarizationState& s) {
    if (s.noise.cross_block().cwiseAbs().maxCoeff() > 1e-12)
        throw std::invalid_argument(
            "stokes_variances_uncorrelated requires a block-diagonal covariance");
    const double h2 = s.alpha_h * s.alpha_h;
    const double v2 = s.alpha_v * s.alpha_v;
    const Eigen::Matrix4d& m = s.noise.matrix();

    const double v0 = h2 * m(0, 0) + v2 * m(2, 2);
    const auto v2_at = [&](double t) {
        return h2 * quadrature_variance(s.noise, Mode::V, -t) +
               v2 * quadrature_variance(s.noise, Mode::H, t);
    };
    return {v0, v0, v2_at(s.theta), v2_at(s.theta - std::numbers::pi / 2.0)};
}

inline StokesStatistics stokes_statistics(const PolarizationState& s) {
    StokesStatistics st{stokes_means(s), stokes_variances_general(s)};
    const Eigen::Vector4d& mu = st.mean;
    if (mu(0) < 0.0 ||
        mu(0) * mu(0) + 1e-9 * std::max(1.0, mu(0) * mu(0)) <
            mu(1) * mu(1) + mu(2) * mu(2) + mu(3) * mu(3))
        throw std::logic_error("Stokes means fell outside the classical sphere");
    if (st.variance.minCoeff() < 0.0)
        throw std::logic_error("negative Stokes variance");
    return st;
}

/// One pairwise uncertainty relation Vi Vj >= |<Sk>|^2 with its slack.
struct UncertaintyRelation {
    int i, j, k;       // variance pair (i, j) bounded by mean k
    double product;    // Vi * Vj
    double bound;      // <Sk>^2
    double slack;      // (product - bound) / max(bound, 1)
    bool satisfied;
};

struct UncertaintyReport {
    std::array<UncertaintyRelation, 3> relations;
    bool all_satisfied;
};

/// Checks V1 V2 >= <S3>^2 and cyclic permutations, with -1e-6 relative slack.
inline UncertaintyReport uncertainty_products(const StokesStatistics& st) {
    UncertaintyReport rep{};
    rep.all_satisfied = true;
    const std::array<std::array<int, 3>, 3> idx = {{{1, 2, 3}, {2, 3, 1}, {3, 1, 2}}};
    for (std::size_t n = 0; n < idx.size(); ++n) {
        const auto [i, j, k] = std::tuple(idx[n][0], idx[n][1], idx[n][2]);
        UncertaintyRelation r;
        r.i = i;
        r.j = j;
        r.k = k;
        r.product = st.variance(i) * st.variance(j);
        r.bound = st.mean(k) * st.mean(k);
        r.slack = (r.product - r.bound) / std::max(r.bound, 1.0);
        r.satisfied = r.slack >= -1e-6;
        rep.all_satisfied = rep.all_satisfied && r.satisfied;
        rep.relations[n] = r;
    }
    return rep;
}

/// Quantum Poincare sphere radius <S> = sqrt(<S0^2 + 2 S0>), which exceeds
/// the classical radius S0 because of the operator ordering.
inline double poincare_radius(const StokesStatistics& st) {
    return std::sqrt(st.variance(0) + st.mean(0) * st.mean(0) + 2.0 * st.mean(0));
}

struct PairBound {
    int i, j;
    double sum;      // Vi + Vj
    double slack;    // sum - <n>
    bool satisfied;
};

struct PairSqueezingReport {
    std::array<PairBound, 3> pairs;
    bool all_satisfied;
};

/**
 * For beams built from at most one squeezed input, no two of V1, V2, V3 can
 * be squeezed below half shot noise together: Vi + Vj >= <n>.  A flagged
 * violation means the state is outside the single-squeezed-beam class.
 */
inline PairSqueezingReport pair_squeezing_bound(const Eigen::Vector4d& variances, double n) {
    PairSqueezingReport rep{};
    rep.all_satisfied = true;
    const std::array<std::array<int, 2>, 3> idx = {{{1, 2}, {2, 3}, {3, 1}}};
    for (std::size_t k = 0; k < idx.size(); ++k) {
        PairBound p;
        p.i = idx[k][0];
        p.j = idx[k][1];
        p.sum = variances(p.i) + variances(p.j);
        p.slack = p.sum - n;
        p.satisfied = p.slack >= -1e-9 * std::max(1.0, n);
        rep.all_satisfied = rep.all_satisfied && p.satisfied;
        rep.pairs[k] = p;
    }
    return rep;
}

/// 10 log10(V / <n>): variance in dB relative to the shot noise of the beam.
inline double db_relative_to_shot(double variance, double n) {
    return 10.0 * std::log10(variance / n);
}

/**
 * Standard-deviation ellipsoid centered on (<S1>, <S2>, <S3>).  When
 * normalized, axes are divided by sqrt(<n>) so a coherent beam is the unit
 * sphere; the center is left in photon-flux units.
 */
inline NoiseEllipsoid poincare_ellipsoid(const PolarizationState& s,
                                         bool normalize_to_shot = true) {
    const StokesStatistics st = stokes_statistics(s);
    const double scale = normalize_to_shot ? std::sqrt(st.mean(0)) : 1.0;
    NoiseEllipsoid e;
    e.center = st.mean.tail<3>();
    e.semi_axes = st.variance.tail<3>().cwiseSqrt() / scale;
    e.radial_thickness = std::sqrt(st.variance(0)) / scale;
    e.normalized = normalize_to_shot;
    return e;
}

}  // namespace polsqz
