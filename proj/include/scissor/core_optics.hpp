#pragma once

// Single-ring optics for a SCISSOR: dispersion, transmission phase,
// field enhancement and the resonance bookkeeping shared by every other
// module. All frequencies are angular (rad/s).

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "scissor/constants.hpp"

namespace scissor {

using complex = std::complex<double>;

/// Geometry, coupling, dispersion and nonlinearity of an N-ring SCISSOR.
/// Defaults are the silicon-on-insulator structure (R = 5 um, Lambda = 15 um,
/// n = 2.5, v_g = 0.75e8 m/s, 1 - sigma = 0.0126, gamma = 200 /(W m)).
struct StructureParams {
    double ring_radius = 5e-6;          // m
    double ring_spacing = 15e-6;        // m
    int num_rings = 1;
    double self_coupling = 1.0 - 0.0126;
    double phase_index = 2.5;
    double group_velocity = 0.75e8;     // m/s
    double nonlinear_gamma = 200.0;     // 1/(W m)
    double first_ring_position = 0.0;   // m

    double circumference() const { return constants::two_pi * ring_radius; }

    /// 1 - sigma, kept as its own accessor because the physics lives in it.
    double coupling_loss() const { return 1.0 - self_coupling; }

    /// kappa = sqrt(1 - sigma^2), evaluated as sqrt((1-sigma)(1+sigma)) so
    /// it stays accurate for sigma close to one.
    double cross_coupling() const {
        return std::sqrt(coupling_loss() * (1.0 + self_coupling));
    }

    void validate() const {
        if (!(ring_radius > 0.0)) throw std::invalid_argument("ring radius must be positive");
        if (!(ring_spacing > 0.0)) throw std::invalid_argument("ring spacing must be positive");
        if (num_rings < 1) throw std::invalid_argument("number of rings must be at least 1");
        if (!(self_coupling > 0.0 && self_coupling < 1.0))
            throw std::invalid_argument("self coupling must lie in (0, 1)");
        if (!(phase_index > 0.0)) throw std::invalid_argument("phase index must be positive");
        if (!(group_velocity > 0.0)) throw std::invalid_argument("group velocity must be positive");
        if (!(nonlinear_gamma >= 0.0)) throw std::invalid_argument("nonlinear gamma must be non-negative");
    }

    /// Non-fatal sanity findings (weak coupling assumption).
    std::vector<std::string> warnings() const {
        std::vector<std::string> out;
        if (coupling_loss() > 0.1)
            out.emplace_back("1 - sigma = " + std::to_string(coupling_loss()) +
                             " exceeds 0.1; the weak-coupling approximations degrade");
        return out;
    }
};

/// A frequency expressed as (resonance order, detuning from that resonance).
/// Keeping the integer part separate lets phase sums cancel exactly.
struct ModeOffset {
    int order = 0;
    double detuning = 0.0;  // rad/s
};

/// Linear (no group-velocity dispersion) model k(w) = k(w0) + (w - w0)/v_g,
/// anchored so that k(w0) l = 2 pi M0.
class DispersionModel {
public:
    DispersionModel(int reference_order, double reference_frequency, double group_velocity,
                    double circumference)
        : order_(reference_order), omega0_(reference_frequency), vg_(group_velocity),
          length_(circumference) {
        if (reference_order < 1) throw std::invalid_argument("reference order must be >= 1");
        if (!(reference_frequency > 0.0))
            throw std::invalid_argument("reference frequency must be positive");
        if (!(group_velocity > 0.0 && circumference > 0.0))
            throw std::invalid_argument("group velocity and circumference must be positive");
        // Snap the resonance step so that w0 +/- step are exact in binary.
        const double step = constants::two_pi * vg_ / length_;
        step_ = (omega0_ + step) - omega0_;
    }

    /// Places the order-M0 resonance where the phase index puts it:
    /// w0 = 2 pi M0 c / (n l).
    static DispersionModel from_phase_index(const StructureParams& params, int reference_order) {
        params.validate();
        const double l = params.circumference();
        const double omega0 = constants::two_pi * reference_order * constants::speed_of_light /
                              (params.phase_index * l);
        return DispersionModel(reference_order, omega0, params.group_velocity, l);
    }

    int reference_order() const { return order_; }
    double reference_frequency() const { return omega0_; }
    double group_velocity() const { return vg_; }
    double circumference() const { return length_; }

    /// Angular spacing between adjacent resonances, 2 pi v_g / l.
    double resonance_spacing() const { return step_; }

    double reference_wavenumber() const { return constants::two_pi * order_ / length_; }

    double wavenumber(double omega) const {
        if (!(omega > 0.0)) throw std::domain_error("wavenumber: frequency must be positive");
        return reference_wavenumber() + (omega - omega0_) / vg_;
    }

    double resonance_frequency(int order) const {
        return omega0_ + static_cast<double>(order - order_) * step_;
    }

    /// Nearest resonance and the detuning from it.
    ModeOffset locate(double omega) const {
        if (!(omega > 0.0)) throw std::domain_error("locate: frequency must be positive");
        const double steps = std::nearbyint((omega - omega0_) / step_);
        const int order = order_ + static_cast<int>(steps);
        return {order, omega - resonance_frequency(order)};
    }

    double frequency(const ModeOffset& mode) const {
        return resonance_frequency(mode.order) + mode.detuning;
    }

    /// Round-trip phase k l reduced to its offset from 2 pi M.
    double round_trip_offset(double detuning) const { return detuning * length_ / vg_; }

private:
    int order_;
    double omega0_;
    double vg_;
    double length_;
    double step_ = 0.0;
};

/// Signal, pump and idler resonances. The default orientation puts the
/// signal one resonance below the pump and the idler one above.
struct ResonanceTriplet {
    double signal = 0.0;
    double pump = 0.0;
    double idler = 0.0;
    int signal_order = 0;
    int pump_order = 0;
    int idler_order = 0;

    static ResonanceTriplet around(const DispersionModel& model, int pump_order) {
        ResonanceTriplet t;
        t.pump_order = pump_order;
        t.signal_order = pump_order - 1;
        t.idler_order = pump_order + 1;
        t.pump = model.resonance_frequency(pump_order);
        t.signal = model.resonance_frequency(t.signal_order);
        t.idler = model.resonance_frequency(t.idler_order);
        return t;
    }

    static ResonanceTriplet around(const DispersionModel& model) {
        return around(model, model.reference_order());
    }

    /// Same resonances with the signal/idler roles exchanged.
    ResonanceTriplet swapped() const {
        ResonanceTriplet t = *this;
        std::swap(t.signal, t.idler);
        std::swap(t.signal_order, t.idler_order);
        return t;
    }

    /// 2 w_P - w_S - w_I, zero for resonances of a dispersionless ring.
    double energy_mismatch() const { return 2.0 * pump - signal - idler; }
};

// ---------------------------------------------------------------------------
// Linewidth and related scalars

/// FWHM of |F|^2 at a resonance, Delta = 2 (1 - sigma) v_g / l.
inline double linewidth(const StructureParams& p) {
    return 2.0 * p.coupling_loss() * p.group_velocity / p.circumference();
}

/// Free spectral range in Hz, v_g / l.
inline double free_spectral_range(const StructureParams& p) {
    return p.group_velocity / p.circumference();
}

inline double dwell_time(const StructureParams& p) { return 1.0 / linewidth(p); }

inline double quality_factor(const StructureParams& p, double omega) {
    return omega / linewidth(p);
}

inline double vacuum_wavelength(double omega) {
    return constants::two_pi * constants::speed_of_light / omega;
}

// ---------------------------------------------------------------------------
// Transmission phase

/// Excess phase of the all-pass ring at round-trip offset x from a
/// resonance: x + 2 atan(sigma sin x / (1 - sigma cos x)). The
/// denominator is positive for sigma < 1, so atan2 never changes branch
/// and the result is continuous and odd in x.
inline double transmission_phase_offset(double sigma, double x) {
    return x + 2.0 * std::atan2(sigma * std::sin(x), 1.0 - sigma * std::cos(x));
}

/// theta for a frequency given as (order, detuning). Continuous and
/// monotone in frequency; it advances by 2 pi per free spectral range.
inline double transmission_phase(const StructureParams& p, const DispersionModel& model,
                                 const ModeOffset& mode) {
    const double x = model.round_trip_offset(mode.detuning);
    return constants::pi + constants::two_pi * mode.order +
           transmission_phase_offset(p.self_coupling, x);
}

inline double transmission_phase(const StructureParams& p, const DispersionModel& model,
                                 double omega) {
    return transmission_phase(p, model, model.locate(omega));
}

/// T = (sigma - e^{ikl}) / (1 - sigma e^{ikl}).
inline complex transmission(const StructureParams& p, const DispersionModel& model,
                            double omega) {
    const double x = model.round_trip_offset(model.locate(omega).detuning);
    const complex e = std::polar(1.0, x);
    return (p.self_coupling - e) / (1.0 - p.self_coupling * e);
}

// ---------------------------------------------------------------------------
// Field enhancement

/// Exact intra-ring enhancement i kappa / (1 - sigma e^{ikl}).
inline complex field_enhancement(const StructureParams& p, const DispersionModel& model,
                                 const ModeOffset& mode) {
    const double x = model.round_trip_offset(mode.detuning);
    return complex(0.0, p.cross_coupling()) / (1.0 - p.self_coupling * std::polar(1.0, x));
}

inline complex field_enhancement(const StructureParams& p, const DispersionModel& model,
                                 double omega) {
    return field_enhancement(p, model, model.locate(omega));
}

/// Unit-peak-magnitude Lorentzian (Delta/2) / (detuning - i Delta/2).
inline complex resonance_lorentzian(double detuning, double width) {
    const double half = 0.5 * width;
    return half / complex(detuning, -half);
}

/// Near-resonance approximation sqrt(2/(1-sigma)) (Delta/2)/((w - w_M) - i Delta/2)
/// about the nearest resonance.
inline complex field_enhancement_lorentzian(const StructureParams& p,
                                            const DispersionModel& model, double omega) {
    const ModeOffset mode = model.locate(omega);
    return std::sqrt(2.0 / p.coupling_loss()) * resonance_lorentzian(mode.detuning, linewidth(p));
}

}  // namespace scissor
