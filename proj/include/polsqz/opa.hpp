/**
 * @file opa.hpp
 * @brief Frequency-dependent quadrature variance spectra of bright
 *        below-threshold optical parametric amplifier outputs.
 *
 * The model is the standard below-threshold cavity Lorentzian pair
 *
 *     V_sq(f)   = 1 - eta * 4x / ((1+x)^2 + (f/gamma)^2)
 *     V_anti(f) = 1 + eta * 4x / ((1-x)^2 + (f/gamma)^2)
 *
 * plus a Lorentzian excess-noise peak on the amplitude quadrature standing in
 * for the seed laser's relaxation oscillation.  Locking the pump to
 * deamplification squeezes the amplitude quadrature; locking to amplification
 * squeezes the phase quadrature.  V+ V- >= 1 holds for every frequency.
 */

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace polsqz::opa {

enum class Lock { Deamplification, Amplification };

struct OpaParams {
    double x = 0.0;          // pump parameter, below threshold: x < 1
    double gamma_mhz = 10.0; // cavity half-linewidth
    double eta_esc = 1.0;    // escape efficiency
    Lock lock = Lock::Deamplification;

    void validate() const {
        if (!(x >= 0.0 && x < 1.0))
            throw std::invalid_argument("pump parameter must satisfy 0 <= x < 1");
        if (!(gamma_mhz > 0.0)) throw std::invalid_argument("gamma must be positive");
        if (!(eta_esc > 0.0 && eta_esc <= 1.0))
            throw std::invalid_argument("escape efficiency must lie in (0, 1]");
    }
};

struct LaserNoise {
    double f_relax_mhz = 1.0; // relaxation-oscillation peak position
    double peak_db = 0.0;     // excess amplitude noise at the peak, dB above shot
    double width_mhz = 1.0;

    void validate() const {
        if (peak_db < 0.0) throw std::invalid_argument("laser peak must be >= 0 dB");
        if (!(width_mhz > 0.0)) throw std::invalid_argument("laser width must be positive");
    }

    static LaserNoise quiet() { return {1.0, 0.0, 1.0}; }
};

/// Linear excess noise added to the amplitude quadrature at frequency f.
/// peak_db is exact at f_relax for an otherwise coherent beam.
inline double laser_excess(const LaserNoise& laser, double f_mhz) {
    const double peak = std::pow(10.0, laser.peak_db / 10.0) - 1.0;
    const double detune = (f_mhz - laser.f_relax_mhz) / laser.width_mhz;
    return peak / (1.0 + detune * detune);
}

struct QuadratureSpectrumPoint {
    double f_mhz = 0.0;
    double v_plus = 1.0;   // amplitude quadrature variance
    double v_minus = 1.0;  // phase quadrature variance
};

/// (V+, V-) of one OPA output at sideband frequency f.
inline QuadratureSpectrumPoint quadrature_spectrum(const OpaParams& p, const LaserNoise& laser,
                                                   double f_mhz) {
    p.validate();
    laser.validate();
    if (!(f_mhz > 0.0)) throw std::invalid_argument("frequency must be positive");

    const double fg = f_mhz / p.gamma_mhz;
    const double squeezed =
        1.0 - p.eta_esc * 4.0 * p.x / ((1.0 + p.x) * (1.0 + p.x) + fg * fg);
    const double anti =
        1.0 + p.eta_esc * 4.0 * p.x / ((1.0 - p.x) * (1.0 - p.x) + fg * fg);
    const double excess = laser_excess(laser, f_mhz);

    QuadratureSpectrumPoint out;
    out.f_mhz = f_mhz;
    if (p.lock == Lock::Deamplification) {
        out.v_plus = squeezed + excess;
        out.v_minus = anti;
    } else {
        out.v_plus = anti + excess;
        out.v_minus = squeezed;
    }
    return out;
}

/// Deterministic per-frequency sweep over an ascending grid in (0, 100] MHz.
inline std::vector<QuadratureSpectrumPoint> spectrum_sweep(const OpaParams& p,
                                                           const LaserNoise& laser,
                                                           const std::vector<double>& grid_mhz) {
    if (grid_mhz.empty()) throw std::invalid_argument("frequency grid is empty");
    for (std::size_t i = 0; i < grid_mhz.size(); ++i) {
        if (!(grid_mhz[i] > 0.0 && grid_mhz[i] <= 100.0))
            throw std::invalid_argument("grid frequencies must lie in (0, 100] MHz");
        if (i > 0 && grid_mhz[i] <= grid_mhz[i - 1])
            throw std::invalid_argument("grid must be strictly ascending");
    }
    std::vector<QuadratureSpectrumPoint> rows;
    rows.reserve(grid_mhz.size());
    for (double f : grid_mhz) rows.push_back(quadrature_spectrum(p, laser, f));
    return rows;
}

/**
 * A complete source description: the OPA, its seed laser's excess noise, and
 * how strongly that noise is correlated with a second source derived from
 * the same laser (1 = common laser, 0 = independent).
 */
struct OpaPreset {
    std::string name;
    OpaParams params;
    LaserNoise laser;
    double laser_correlation = 1.0;
};

/**
 * Shipped presets.  The numbers are fits, not measurements: they are chosen
 * so the packaged measurement scenarios reproduce their calibration targets
 * (4.3 dB S1 squeezing at 5.7 MHz for the amplitude pair, 2.8 dB S2
 * squeezing near 4.8 MHz for the phase pair) through a 76% detection chain.
 */
inline OpaPreset preset_paper_amplitude() {
    return {"paper-amplitude",
            {0.5607, 14.0, 1.0, Lock::Deamplification},
            {3.0, 2.0411998265592482, 1.6},
            0.774542};
}

inline OpaPreset preset_paper_phase() {
    return {"paper-phase",
            {0.27082, 14.0, 1.0, Lock::Amplification},
            {3.0, 2.0411998265592482, 1.6},
            0.774542};
}

/// Pump off, laser noise present: the shot-noise calibration source.
inline OpaPreset preset_coherent_noisy() {
    return {"coherent-noisy",
            {0.0, 14.0, 1.0, Lock::Deamplification},
            {3.0, 2.0411998265592482, 1.6},
            0.774542};
}

/// Ideal coherent source, no laser excess at all.
inline OpaPreset preset_coherent() {
    return {"coherent", {0.0, 14.0, 1.0, Lock::Deamplification}, LaserNoise::quiet(), 0.0};
}

inline OpaPreset preset_by_name(const std::string& name) {
    if (name == "paper-amplitude") return preset_paper_amplitude();
    if (name == "paper-phase") return preset_paper_phase();
    if (name == "coherent-noisy") return preset_coherent_noisy();
    if (name == "coherent") return preset_coherent();
    throw std::invalid_argument("unknown OPA preset: " + name);
}

}  // namespace polsqz::opa
