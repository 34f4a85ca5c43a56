#pragma once

// Generalized phase matching for N identical rings on one bus:
//   J = e^{i chi} sin(N mu / 2) / sin(mu / 2) j_ref
// with mu the ring-to-ring phase slip and j_ref the single-ring kernel.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "scissor/constants.hpp"
#include "scissor/core_optics.hpp"

namespace scissor {

/// Frequencies (w1, w2) of the generated pair and (w3, w4) on the pump side.
/// Each is stored as (resonance order, detuning) so integer multiples of
/// 2 pi cancel exactly in the phase sums.
struct PhaseMatchInputs {
    std::array<ModeOffset, 4> modes{};

    static PhaseMatchInputs from_frequencies(const DispersionModel& model, double w1, double w2,
                                             double w3, double w4) {
        return {{model.locate(w1), model.locate(w2), model.locate(w3), model.locate(w4)}};
    }

    /// Detunings from (signal, idler, pump, pump).
    static PhaseMatchInputs from_detunings(const ResonanceTriplet& t, double d1, double d2,
                                           double d3, double d4) {
        return {{ModeOffset{t.signal_order, d1}, ModeOffset{t.idler_order, d2},
                 ModeOffset{t.pump_order, d3}, ModeOffset{t.pump_order, d4}}};
    }

    /// Pump-side pair fixed by energy conservation, w4 = w1 + w2 - w3.
    static PhaseMatchInputs energy_conserving(const ResonanceTriplet& t, double d1, double d2,
                                              double d3) {
        return from_detunings(t, d1, d2, d3, d1 + d2 - d3);
    }
};

namespace detail {

/// Detuning of a mode from the resonance of a given order.
inline double detuning_from(const DispersionModel& model, const ModeOffset& m, int order) {
    return m.detuning + static_cast<double>(m.order - order) * model.resonance_spacing();
}

inline int order_mismatch(const PhaseMatchInputs& in) {
    const auto& m = in.modes;
    return m[2].order + m[3].order - m[0].order - m[1].order;
}

inline double detuning_mismatch(const PhaseMatchInputs& in) {
    const auto& m = in.modes;
    return (m[2].detuning + m[3].detuning) - (m[0].detuning + m[1].detuning);
}

/// (k3 + k4 - k1 - k2) times a length.
inline double wavenumber_mismatch_times(const DispersionModel& model, const PhaseMatchInputs& in,
                                        double length) {
    const double integer_part = constants::two_pi * order_mismatch(in) / model.circumference();
    return (integer_part + detuning_mismatch(in) / model.group_velocity()) * length;
}

inline double excess(const StructureParams& p, const DispersionModel& model,
                     const ModeOffset& m) {
    return transmission_phase_offset(p.self_coupling, model.round_trip_offset(m.detuning));
}

}  // namespace detail

/// mu = (k3 + k4 - k1 - k2) Lambda + theta3 + theta4 - theta1 - theta2,
/// from the exact transmission phase.
inline double mu(const StructureParams& p, const DispersionModel& model,
                 const PhaseMatchInputs& in) {
    const auto& m = in.modes;
    const double propagation = detail::wavenumber_mismatch_times(model, in, p.ring_spacing);
    const double integer_theta = constants::two_pi * detail::order_mismatch(in);
    const double excess = (detail::excess(p, model, m[2]) + detail::excess(p, model, m[3])) -
                          (detail::excess(p, model, m[0]) + detail::excess(p, model, m[1]));
    return propagation + integer_theta + excess;
}

/// Dispersionless reduction of mu once energy conservation holds: the
/// propagation term drops and only the transmission phases remain.
inline double mu_no_gvd(const StructureParams& p, const DispersionModel& model,
                        const PhaseMatchInputs& in) {
    const auto& m = in.modes;
    return constants::two_pi * detail::order_mismatch(in) +
           (detail::excess(p, model, m[2]) + detail::excess(p, model, m[3])) -
           (detail::excess(p, model, m[0]) + detail::excess(p, model, m[1]));
}

/// chi = (k3 + k4 - k1 - k2) z1 + N (theta1 + theta2) + (N - 1) mu / 2.
/// Returns the full value, including the 2 pi (S + I + 1) N offset.
inline double chi(const StructureParams& p, const DispersionModel& model,
                  const PhaseMatchInputs& in, int rings) {
    const auto& m = in.modes;
    const double theta_sum =
        transmission_phase(p, model, m[0]) + transmission_phase(p, model, m[1]);
    return detail::wavenumber_mismatch_times(model, in, p.first_ring_position) +
           rings * theta_sum + 0.5 * (rings - 1) * mu(p, model, in);
}

/// chi with every integer multiple of 2 pi removed; e^{i chi} is unchanged
/// but the argument stays small, which keeps the complex phase accurate.
inline double chi_reduced(const StructureParams& p, const DispersionModel& model,
                          const PhaseMatchInputs& in, int rings) {
    const auto& m = in.modes;
    const double excess_sum = detail::excess(p, model, m[0]) + detail::excess(p, model, m[1]);
    // theta1 + theta2 = 2 pi (M1 + M2 + 1) + excess; the integer part drops.
    return detail::wavenumber_mismatch_times(model, in, p.first_ring_position) +
           rings * excess_sum + 0.5 * (rings - 1) * mu(p, model, in);
}

/// sin(N mu / 2) / sin(mu / 2), including the removable singularities at
/// mu = 2 pi j where it tends to N (-1)^{j (N - 1)}.
inline double dirichlet_factor(double mu_value, int rings) {
    if (rings < 1) throw std::invalid_argument("dirichlet_factor: N must be >= 1");
    const double x = 0.5 * mu_value;
    const double s = std::sin(x);
    if (std::abs(s) >= 1e-9) return std::sin(rings * x) / s;
    const double j = std::nearbyint(x / constants::pi);
    const double eps = x - j * constants::pi;
    const long long parity = static_cast<long long>(j) * (rings - 1);
    const double sign = (parity % 2 == 0) ? 1.0 : -1.0;
    const double n = rings;
    return sign * n * (1.0 - (n * n - 1.0) * eps * eps / 6.0);
}

/// Nonlinear overlap of one ring expressed through gamma:
///   K = l 4 eps0 v_g^2 gamma / (3 w_P (2 pi)^2).
inline double ring_kernel_constant(const StructureParams& p, double pump_frequency) {
    const double vg = p.group_velocity;
    return p.circumference() * 4.0 * constants::vacuum_permittivity * vg * vg *
           p.nonlinear_gamma / (3.0 * pump_frequency * constants::two_pi * constants::two_pi);
}

/// Single-ring kernel in the Lorentzian form
///   (2/(1-sigma))^2 L(w1-wS) L(w2-wI) L(w3-wP) L(w4-wP) K.
/// The in-ring propagation factor e^{i u zeta / v_g} is taken as 1.
inline complex j_ref(const StructureParams& p, const DispersionModel& model,
                     const ResonanceTriplet& t, const PhaseMatchInputs& in) {
    const double width = linewidth(p);
    const auto& m = in.modes;
    const double g = 2.0 / p.coupling_loss();
    const complex lorentz =
        resonance_lorentzian(detail::detuning_from(model, m[0], t.signal_order), width) *
        resonance_lorentzian(detail::detuning_from(model, m[1], t.idler_order), width) *
        resonance_lorentzian(detail::detuning_from(model, m[2], t.pump_order), width) *
        resonance_lorentzian(detail::detuning_from(model, m[3], t.pump_order), width);
    return g * g * lorentz * ring_kernel_constant(p, t.pump);
}

/// Generalized phase matching function of the N-ring structure.
inline complex big_j(const StructureParams& p, const DispersionModel& model,
                     const ResonanceTriplet& t, const PhaseMatchInputs& in, int rings) {
    const double slip = mu(p, model, in);
    return std::polar(1.0, chi_reduced(p, model, in, rings)) * dirichlet_factor(slip, rings) *
           j_ref(p, model, t, in);
}

/// Ring count beyond which the N^2 scaling gives way: (pi/2) Delta / delta.
inline double coherence_number(const StructureParams& p, double pump_bandwidth) {
    if (!(pump_bandwidth > 0.0))
        throw std::domain_error("coherence_number: pump bandwidth must be positive");
    return 0.5 * constants::pi * linewidth(p) / pump_bandwidth;
}

}  // namespace scissor
