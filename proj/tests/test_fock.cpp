#include "polsqz/fock.hpp"

#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>
#include <numbers>

using namespace polsqz;
using namespace polsqz::fock;
using Catch::Approx;

namespace {
const std::complex<double> kI(0.0, 1.0);
}

TEST_CASE("annihilation operator basics") {
    const auto a = annihilation_matrix(2);
    CHECK(a.entries(0, 1).real() == Approx(1.0));
    CHECK(a.entries(1, 2).real() == Approx(std::sqrt(2.0)));
    CHECK_THROWS_AS(annihilation_matrix(1), std::invalid_argument);

    SECTION("[a, a^dag] is the identity below the cutoff") {
        const int n_max = 12;
        const auto low = annihilation_matrix(n_max).entries;
        const MatrixXcd comm = low * low.adjoint() - low.adjoint() * low;
        for (int n = 0; n < n_max; ++n)
            REQUIRE(std::abs(comm(n, n) - 1.0) <= 1e-12);
        // the top diagonal entry carries the truncation defect -N
        REQUIRE(comm(n_max, n_max).real() == Approx(-static_cast<double>(n_max)));
    }

    SECTION("a annihilates the vacuum") {
        VectorXcd vacuum = VectorXcd::Zero(13);
        vacuum(0) = 1.0;
        CHECK((annihilation_matrix(12).entries * vacuum).norm() == 0.0);
    }
}

TEST_CASE("displaced squeezed state preparation") {
    SECTION("squeezed vacuum photon number is sinh^2 r") {
        const auto psi = displaced_squeezed_state(0.0, 0.5, 0.0, 40);
        const auto m = detail::single_mode_moments(psi);
        CHECK(m.n == Approx(std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-9));
        CHECK(std::abs(psi.norm() - 1.0) < 1e-9);
    }

    SECTION("amplitude quadrature variance is e^{-2r} at phi = 0") {
        const auto psi = displaced_squeezed_state(0.0, 0.5, 0.0, 40);
        const auto m = detail::single_mode_moments(psi);
        // <X(0)^2> = 2 Re<a^2> + 2<n> + 1 for zero-mean states
        const double var = 2.0 * m.a2.real() + 2.0 * m.n + 1.0;
        CHECK(var == Approx(std::exp(-1.0)).epsilon(1e-9));
    }

    SECTION("coherent state is Poissonian") {
        const auto psi = displaced_squeezed_state(2.0, 0.0, 0.0, cutoff_policy(2.0));
        const auto m = detail::single_mode_moments(psi);
        CHECK(m.n == Approx(4.0).epsilon(1e-9));
        CHECK(m.n2 - m.n * m.n == Approx(4.0).epsilon(1e-8));
        CHECK(m.a.real() == Approx(2.0).epsilon(1e-9));
    }

    SECTION("cutoff below the policy is rejected") {
        CHECK_THROWS_AS(displaced_squeezed_state(3.0, 0.0, 0.0, 30), std::domain_error);
    }

    SECTION("recurrence construction equals the matrix-exponential one") {
        const std::complex<double> alpha = 3.0 * std::exp(kI * 0.9);
        for (int n_max : {120, 260}) {
            const auto via_expm = detail::displaced_squeezed_expm(alpha, 0.4, 0.7, n_max);
            const auto via_rec = detail::displaced_squeezed_recurrence(alpha, 0.4, 0.7, n_max);
            REQUIRE((via_expm - via_rec).cwiseAbs().maxCoeff() < 1e-11);
        }
    }

    SECTION("bright-beam recurrence stays normalized and healthy") {
        const auto psi = displaced_squeezed_state(100.0, 0.5, 0.0, cutoff_policy(100.0) + 400);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-9);
        const auto m = detail::single_mode_moments(psi);
        CHECK(m.n == Approx(10000.0 + std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-8));
        CHECK(m.a.real() == Approx(100.0).epsilon(1e-9));
    }
}

TEST_CASE("two-mode stokes matrices") {
    SECTION("|1_H 0_V> is an S1 eigenstate with eigenvalue 1") {
        const int n_max = 6;
        const auto s = stokes_matrices(n_max);
        VectorXcd psi = VectorXcd::Zero((n_max + 1) * (n_max + 1));
        psi(1 * (n_max + 1) + 0) = 1.0;
        const std::complex<double> val = psi.dot(s[1].entries * psi);
        CHECK(val.real() == Approx(1.0));
        CHECK(psi.dot(s[0].entries * psi).real() == Approx(1.0));
    }

    SECTION("hermiticity and commutators on the interior") {
        for (int n_max : {6, 10, 14}) {
            const auto s = stokes_matrices(n_max);
            for (const auto& op : s) REQUIRE(op.is_hermitian(1e-12));

            const auto residual = [&](int a, int b, int c) {
                OperatorMatrix r{s[a].dim,
                                 s[a].entries * s[b].entries - s[b].entries * s[a].entries -
                                     2.0 * kI * s[c].entries};
                return interior_restricted_max(r, n_max, n_max - 2);
            };
            REQUIRE(residual(1, 2, 3) <= 1e-10);
            REQUIRE(residual(2, 3, 1) <= 1e-10);
            REQUIRE(residual(3, 1, 2) <= 1e-10);

            for (int j = 1; j < 4; ++j) {
                const MatrixXcd comm =
                    s[0].entries * s[j].entries - s[j].entries * s[0].entries;
                REQUIRE(comm.cwiseAbs().maxCoeff() <= 1e-10);
            }
        }
    }
}

TEST_CASE("mean and variance on Fock states") {
    const int n_max = 24;
    const auto psi_h = displaced_squeezed_state(1.0, 0.0, 0.0, 31);
    VectorXcd vac = VectorXcd::Zero(n_max + 1);
    vac(0) = 1.0;
    VectorXcd psi_h_resized = VectorXcd::Zero(n_max + 1);
    psi_h_resized.head(std::min<int>(psi_h.size(), n_max + 1)) =
        psi_h.head(std::min<int>(psi_h.size(), n_max + 1));
    const auto state = FockState::product(psi_h_resized, vac);
    const auto s = stokes_matrices(n_max);

    SECTION("coherent H beam: shot noise on every Stokes parameter") {
        const Eigen::Vector4d expected_mean(1.0, 1.0, 0.0, 0.0);
        for (int k = 0; k < 4; ++k) {
            const auto [mean, var] = mean_and_variance(s[k], state);
            REQUIRE(mean == Approx(expected_mean(k)).margin(1e-6));
            REQUIRE(var == Approx(1.0).epsilon(1e-6));
        }
    }

    SECTION("quantum Poincare radius of the alpha = 1 coherent beam is 2") {
        const auto [s0_mean, s0_var] = mean_and_variance(s[0], state);
        const double radius = std::sqrt(s0_var + s0_mean * s0_mean + 2.0 * s0_mean);
        CHECK(radius == Approx(2.0).epsilon(1e-6));
    }

    SECTION("non-Hermitian operators are rejected") {
        OperatorMatrix bad{state.dim(), MatrixXcd::Zero(state.dim(), state.dim())};
        bad.entries(0, 1) = 1.0;  // a lone raising element
        CHECK_THROWS_AS(mean_and_variance(bad, state), std::invalid_argument);
    }

    SECTION("shift-structured moments match the dense operators") {
        const auto fast = stokes_moments(state);
        for (int k = 0; k < 4; ++k) {
            const auto [mean, var] = mean_and_variance(s[k], state);
            REQUIRE(fast.mean(k) == Approx(mean).margin(1e-12));
            REQUIRE(fast.variance(k) == Approx(var).margin(1e-10));
        }
    }
}

TEST_CASE("factorized product moments equal the tensor evaluation") {
    const double theta = std::numbers::pi / 2.0;
    const auto psi_h = displaced_squeezed_state(3.0, 0.25, 0.0, cutoff_policy(3.0));
    const auto psi_v = displaced_squeezed_state(
        2.0 * std::exp(kI * theta), 0.25, 2.0 * theta, cutoff_policy(2.0));

    const auto tensor = stokes_moments(FockState::product(psi_h, psi_v));
    const auto product = product_stokes_moments(psi_h, psi_v);
    for (int k = 0; k < 4; ++k) {
        REQUIRE(product.mean(k) == Approx(tensor.mean(k)).margin(1e-10));
        REQUIRE(product.variance(k) == Approx(tensor.variance(k)).margin(1e-9));
    }
}

TEST_CASE("phase-in-amplitude equals explicit theta operators") {
    // The operator set uses theta = 0; moving e^{i theta} into the V-mode
    // amplitudes must reproduce the literal theta-dependent operators.
    const int n_max = 48;
    const double theta = 0.7;
    const auto a = annihilation_matrix(n_max).entries;
    const MatrixXcd id = MatrixXcd::Identity(n_max + 1, n_max + 1);
    const MatrixXcd a_h = Eigen::kroneckerProduct(a, id).eval();
    const MatrixXcd a_v = Eigen::kroneckerProduct(id, a).eval();
    const std::complex<double> phase = std::exp(kI * theta);

    // literal Stokes operators with the explicit phase factors
    const MatrixXcd s2_lit =
        a_h.adjoint() * a_v * phase + a_v.adjoint() * a_h * std::conj(phase);
    const MatrixXcd s3_lit =
        kI * (a_v.adjoint() * a_h * std::conj(phase)) - kI * (a_h.adjoint() * a_v * phase);

    // real-amplitude state measured with literal operators
    const auto psi_h = displaced_squeezed_state(2.0, 0.3, 0.0, n_max);
    const auto psi_v_real = displaced_squeezed_state(1.5, 0.2, 0.0, n_max);
    const auto literal = FockState::product(psi_h, psi_v_real);

    // phase-relabeled state measured with the theta = 0 operators
    const auto psi_v_rotated =
        displaced_squeezed_state(1.5 * phase, 0.2, 2.0 * theta, n_max);
    const auto relabeled = FockState::product(psi_h, psi_v_rotated);
    const auto moments = stokes_moments(relabeled);

    const auto check = [&](const MatrixXcd& op, double mean_expected, double var_expected) {
        const VectorXcd applied = op * literal.amps;
        const double mean = literal.amps.dot(applied).real();
        const double var = (applied - mean * literal.amps).squaredNorm();
        CHECK(mean == Approx(mean_expected).margin(1e-10));
        CHECK(var == Approx(var_expected).margin(1e-9));
    };
    check(s2_lit, moments.mean(2), moments.variance(2));
    check(s3_lit, moments.mean(3), moments.variance(3));
}

TEST_CASE("oracle comparison against the linearized formulas") {
    SECTION("bright single amplitude-squeezed beam at alpha = 100") {
        OracleStateSpec spec;
        spec.alpha_h = 100.0;
        spec.h = {0.5, SqueezeQuadrature::Amplitude};
        const auto rep = oracle_compare(spec);
        CHECK_FALSE(rep.linearization_suspect);
        CHECK(rep.max_rel_dev < 0.01);
    }

    SECTION("two-beam right-circular configuration at alpha^2 = 10^4") {
        OracleStateSpec spec;
        spec.alpha_h = spec.alpha_v = 100.0 / std::numbers::sqrt2;
        spec.theta = std::numbers::pi / 2.0;
        spec.h = spec.v = {0.3, SqueezeQuadrature::Amplitude};
        const auto rep = oracle_compare(spec);
        CHECK(rep.max_rel_dev < 0.01);
    }

    SECTION("deviation shrinks as the beam brightens at fixed r") {
        double previous = 1e300;
        for (double alpha : {10.0, 30.0, 100.0}) {
            OracleStateSpec spec;
            spec.alpha_h = alpha;
            spec.h = {0.3, SqueezeQuadrature::Amplitude};
            const auto rep = oracle_compare(spec);
            REQUIRE(rep.max_rel_dev < previous);
            previous = rep.max_rel_dev;
        }
    }

    SECTION("linearization-suspect regime is flagged but still reported") {
        OracleStateSpec spec;
        spec.alpha_h = 1.0;
        spec.h = {1.0, SqueezeQuadrature::Amplitude};
        const auto rep = oracle_compare(spec);
        CHECK(rep.linearization_suspect);
        for (const auto& row : rep.rows) {
            REQUIRE(std::isfinite(row.linearized));
            REQUIRE(std::isfinite(row.exact));
        }
        CHECK(rep.max_rel_dev > 0.01);  // linearization visibly off here
    }
}

TEST_CASE("fock state health checks") {
    const auto psi = displaced_squeezed_state(2.0, 0.2, 0.0, cutoff_policy(2.0));
    VectorXcd vac = VectorXcd::Zero(21);
    vac(0) = 1.0;
    const auto state = FockState::product(psi, vac);
    CHECK(state.truncation_healthy());
    CHECK(state.norm() == Approx(1.0).epsilon(1e-9));
    CHECK(state.top_population(Mode::H) < 1e-8);
    CHECK(state.top_population(Mode::V) == 0.0);
}

TEST_CASE("uncertainty products hold exactly for prepared Fock states") {
    using std::numbers::pi;
    const std::complex<double> i_unit(0.0, 1.0);
    const auto prepare = [&](double ah, std::complex<double> av, double rh, double rv,
                             double phi_v) {
        const int nh = std::max(cutoff_policy(ah), 30);
        const int nv = std::max(cutoff_policy(std::abs(av)), 30);
        return FockState::product(displaced_squeezed_state(ah, rh, 0.0, nh),
                                  displaced_squeezed_state(av, rv, phi_v, nv));
    };
    const FockState states[] = {
        prepare(1.0, 0.0, 0.0, 0.0, 0.0),                      // coherent H
        prepare(2.0, 1.0, 0.3, 0.0, 0.0),                      // squeezed H + coherent V
        prepare(1.5, 1.5 * std::exp(i_unit * pi / 2.0), 0.4,   // two squeezed, circular
                0.4, pi),
        prepare(0.0, 0.0, 0.6, 0.0, 0.0),                      // squeezed vacuum
    };
    for (const auto& state : states) {
        const auto m = stokes_moments(state);
        const int idx[3][3] = {{1, 2, 3}, {2, 3, 1}, {3, 1, 2}};
        for (const auto& [i, j, k] : idx) {
            const double product = m.variance(i) * m.variance(j);
            const double bound = m.mean(k) * m.mean(k);
            REQUIRE(product - bound >= -1e-9 * std::max(1.0, bound));
        }
    }
}
