#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "scissor/constants.hpp"

namespace scissor {

enum class PulseShape { TopHatSinc, Gaussian };

inline std::string to_string(PulseShape s) {
    return s == PulseShape::Gaussian ? "gaussian" : "tophat";
}

/// Transform-limited pump pulse centred on w_P with flat spectral phase.
/// `duration` is the top-hat length Delta T, or the intensity FWHM tau_pump
/// for a Gaussian. `photon_number` is |alpha|^2.
struct PumpPulse {
    PulseShape shape = PulseShape::Gaussian;
    double center = 0.0;     // rad/s
    double duration = 0.0;   // s
    double photon_number = 1.0;

    void validate() const {
        if (!(duration > 0.0)) throw std::domain_error("pump duration must be positive");
        if (!(center > 0.0)) throw std::domain_error("pump centre frequency must be positive");
        if (!(photon_number >= 0.0)) throw std::domain_error("photon number must be >= 0");
    }

    /// Top-hat: Delta w = 2 / Delta T. Gaussian: sigma_w = sqrt(2 ln 2) / tau,
    /// the rms width of |phi_P(w)|^2 for a temporal intensity FWHM tau.
    double spectral_scale() const {
        if (shape == PulseShape::TopHatSinc) return 2.0 / duration;
        return std::sqrt(2.0 * std::log(2.0)) / duration;
    }
};

/// phi_P at a detuning from the pump centre, in s^{1/2}, normalised so
/// that the integral of |phi_P|^2 over frequency is one.
inline double spectral_amplitude_at_detuning(const PumpPulse& pulse, double detuning) {
    const double scale = pulse.spectral_scale();
    if (pulse.shape == PulseShape::TopHatSinc) {
        const double x = detuning / scale;
        const double sinc = (std::abs(x) < 1e-8) ? 1.0 - x * x / 6.0 : std::sin(x) / x;
        return sinc / std::sqrt(constants::pi * scale);
    }
    const double norm = std::pow(constants::two_pi * scale * scale, -0.25);
    return norm * std::exp(-detuning * detuning / (4.0 * scale * scale));
}

inline double spectral_amplitude(const PumpPulse& pulse, double omega) {
    if (!(omega > 0.0)) throw std::domain_error("spectral_amplitude: frequency must be positive");
    pulse.validate();
    return spectral_amplitude_at_detuning(pulse, omega - pulse.center);
}

/// Frequency range delta over which the pump has significant amplitude:
/// 1 / tau_pump for a Gaussian, 2 / Delta T for the top hat.
inline double bandwidth_delta(const PumpPulse& pulse) {
    if (!(pulse.duration > 0.0)) throw std::domain_error("pump duration must be positive");
    return pulse.shape == PulseShape::Gaussian ? 1.0 / pulse.duration : 2.0 / pulse.duration;
}

/// Default truncation radius of the pump integral, max(10 delta, Delta).
inline double default_pump_support(const PumpPulse& pulse, double linewidth) {
    return std::max(10.0 * bandwidth_delta(pulse), linewidth);
}

}  // namespace scissor
