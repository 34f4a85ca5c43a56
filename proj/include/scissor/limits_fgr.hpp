#pragma once

// Long-pulse (continuous-wave) limit of the pair probability, the same
// rate from per-ring pump loading in a Fermi's-Golden-Rule picture, and the
// Dicke rate factor of the atomic analogue.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "scissor/constants.hpp"
#include "scissor/core_optics.hpp"
#include "scissor/phase_matching.hpp"
#include "scissor/quadrature.hpp"

namespace scissor {

/// Pulses shorter than this many dwell times are outside the long-pulse regime.
inline constexpr double long_pulse_min_dwell_times = 10.0;

inline void check_long_pulse_regime(const StructureParams& p, double pulse_duration,
                                    std::vector<std::string>* warnings) {
    if (!(pulse_duration > 0.0)) throw std::domain_error("pulse duration must be positive");
    if (warnings && pulse_duration < long_pulse_min_dwell_times * dwell_time(p))
        warnings->push_back("pulse duration below 10 dwell times; long-pulse limit is unreliable");
}

namespace detail {

/// Integral over the signal resonance of f(nu) with nu = (Delta/2) tan(phi),
/// truncated at half a resonance spacing. Every caller that compares rates
/// shares these nodes.
template <typename F>
double signal_window_integral(const StructureParams& p, const DispersionModel& model, F&& f,
                              std::size_t nodes = 4097) {
    const double a = 0.5 * linewidth(p);
    const double edge = std::atan(0.5 * model.resonance_spacing() / a);
    const std::size_t n = quad::richardson_node_count(nodes);
    const double h = 2.0 * edge / static_cast<double>(n - 1);
    const auto w = quad::simpson_weights(n);
    std::vector<double> terms(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double phi = -edge + h * static_cast<double>(i);
        const double c = std::cos(phi);
        const double nu = a * std::tan(phi);
        terms[i] = w[i] * f(nu) * a / (c * c);
    }
    return quad::pairwise_sum(terms) * h / 3.0;
}

/// Continuous-wave pair (w, 2 w_P - w) with both pump photons on resonance.
inline PhaseMatchInputs cw_inputs(const ResonanceTriplet& t, double signal_detuning) {
    return PhaseMatchInputs::from_detunings(t, signal_detuning,
                                            t.energy_mismatch() - signal_detuning, 0.0, 0.0);
}

/// w (2 w_P - w) / v_g^2 for a signal detuning.
inline double pair_frequency_weight(const StructureParams& p, const ResonanceTriplet& t,
                                    double signal_detuning) {
    const double w = t.signal + signal_detuning;
    const double vg = p.group_velocity;
    return w * (2.0 * t.pump - w) / (vg * vg);
}

}  // namespace detail

/// |beta|^2/|alpha|^4 per pulse of length Delta T in the long-pulse limit,
///   (1/Delta T)(9 pi^3 / 2 eps0^2)(hbar w_P / v_g)^2
///     Int dw w (2 w_P - w)/v_g^2 |J(w, 2 w_P - w, w_P, w_P)|^2,
/// evaluated by quadrature over the signal resonance.
inline double long_pulse_rate(const StructureParams& p, const DispersionModel& model,
                              const ResonanceTriplet& t, int rings, double pulse_duration,
                              std::vector<std::string>* warnings = nullptr) {
    check_long_pulse_regime(p, pulse_duration, warnings);
    const double eps0 = constants::vacuum_permittivity;
    const double pref = 9.0 * std::pow(constants::pi, 3) / (2.0 * eps0 * eps0) *
                        std::pow(constants::hbar * t.pump / p.group_velocity, 2);
    const double integral = detail::signal_window_integral(p, model, [&](double nu) {
        const auto in = detail::cw_inputs(t, nu);
        return detail::pair_frequency_weight(p, t, nu) * std::norm(big_j(p, model, t, in, rings));
    });
    return pref * integral / pulse_duration;
}

/// Closed form of the long-pulse limit with w (2 w_P - w) frozen at w_P^2:
///   4 hbar^2 w_P^2 gamma^2 v_g l N^2 / ((1 - sigma)^3 Delta T).
inline double long_pulse_rate_closed_form(const StructureParams& p, const ResonanceTriplet& t,
                                          int rings, double pulse_duration,
                                          std::vector<std::string>* warnings = nullptr) {
    check_long_pulse_regime(p, pulse_duration, warnings);
    if (rings < 1) throw std::invalid_argument("number of rings must be >= 1");
    const double n = rings;
    const double hw = constants::hbar * t.pump;
    return 4.0 * hw * hw * p.nonlinear_gamma * p.nonlinear_gamma * p.group_velocity *
           p.circumference() * n * n / (std::pow(p.coupling_loss(), 3) * pulse_duration);
}

/// Pair rate (pairs/s) for a pump of energy density E = hbar w_P |alpha|^2 / (v_g Delta T);
/// in the long-pulse limit it depends on the pump only through E^2.
inline double long_pulse_rate_from_energy_density(const StructureParams& p,
                                                  const DispersionModel& model,
                                                  const ResonanceTriplet& t, int rings,
                                                  double energy_density) {
    // |beta|^2/|alpha|^4 * Delta T does not depend on Delta T.
    const double per_pulse_times_duration = long_pulse_rate(p, model, t, rings, 1.0);
    const double photons_per_length = energy_density * p.group_velocity /
                                      (constants::hbar * t.pump);
    return per_pulse_times_duration * photons_per_length * photons_per_length;
}

/// Coherent pump amplitude inside each ring, m = 1..N.
struct RingLoading {
    std::vector<complex> amplitudes;
    double pulse_duration = 0.0;
};

/// alpha_m = alpha sqrt(l/(v_g Delta T)) e^{i k_P z_m} T(k_P)^{m-1} F(w_P),
/// with alpha real and |alpha|^2 = photon_number.
inline RingLoading coherent_loading(const StructureParams& p, const DispersionModel& model,
                                    const ResonanceTriplet& t, int rings, double photon_number,
                                    double pulse_duration) {
    if (rings < 1) throw std::invalid_argument("number of rings must be >= 1");
    if (!(pulse_duration > 0.0)) throw std::domain_error("pulse duration must be positive");
    if (!(photon_number >= 0.0)) throw std::domain_error("photon number must be >= 0");
    const double kp = model.wavenumber(t.pump);
    const complex tp = transmission(p, model, t.pump);
    const complex fp = field_enhancement(p, model, t.pump);
    const double scale = std::sqrt(photon_number) *
                         std::sqrt(p.circumference() / (p.group_velocity * pulse_duration));
    RingLoading loading;
    loading.pulse_duration = pulse_duration;
    complex tpow = 1.0;
    for (int m = 1; m <= rings; ++m) {
        const double zm = p.first_ring_position + (m - 1) * p.ring_spacing;
        loading.amplitudes.push_back(scale * std::polar(1.0, kp * zm) * tpow * fp);
        tpow *= tp;
    }
    return loading;
}

/// Coherent loading with an independent uniformly random phase on every ring.
inline RingLoading scrambled_loading(const StructureParams& p, const DispersionModel& model,
                                     const ResonanceTriplet& t, int rings, double photon_number,
                                     double pulse_duration, std::uint32_t seed) {
    RingLoading loading = coherent_loading(p, model, t, rings, photon_number, pulse_duration);
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, constants::two_pi);
    for (auto& a : loading.amplitudes) a *= std::polar(1.0, phase(rng));
    return loading;
}

namespace detail {

/// Ring-m overlap F^(m)(w, 2 w_P - w), obtained from the identity
/// sum_m alpha_m^2 F^(m) = (2 pi/(v_g Delta T)) alpha^2 J under coherent loading.
inline complex ring_overlap(const StructureParams& p, const DispersionModel& model,
                            const ResonanceTriplet& t, int rings, int m, double signal_detuning) {
    const auto in = cw_inputs(t, signal_detuning);
    const auto& md = in.modes;
    const double kp = model.wavenumber(t.pump);
    const double zm = p.first_ring_position + (m - 1) * p.ring_spacing;
    const complex tp = transmission(p, model, t.pump);
    const complex fp = field_enhancement(p, model, t.pump);
    const double excess_pair = excess(p, model, md[0]) + excess(p, model, md[1]);
    const double phase = rings * excess_pair +
                         wavenumber_mismatch_times(model, in, p.first_ring_position) +
                         mu(p, model, in) * (m - 1);
    const complex jm = std::polar(1.0, phase) * j_ref(p, model, t, in);
    const complex pump_side = std::polar(1.0, 2.0 * kp * zm) * std::pow(tp, 2 * (m - 1)) * fp * fp;
    return constants::two_pi / p.circumference() * jm / pump_side;
}

}  // namespace detail

/// Pair generation rate (pairs/s) for a given per-ring pump loading,
///   (9 pi hbar^2 w_P^2 / 8 eps0^2) Int dw w (2 w_P - w)/v_g^2 |sum_m alpha_m^2 F^(m)|^2.
/// The sum over rings is carried out explicitly.
inline double fgr_rate(const StructureParams& p, const DispersionModel& model,
                       const ResonanceTriplet& t, const RingLoading& loading) {
    const int rings = static_cast<int>(loading.amplitudes.size());
    if (rings < 1) throw std::invalid_argument("ring loading is empty");
    const double eps0 = constants::vacuum_permittivity;
    const double hw = constants::hbar * t.pump;
    const double pref = 9.0 * constants::pi * hw * hw / (8.0 * eps0 * eps0);
    const double integral = detail::signal_window_integral(p, model, [&](double nu) {
        complex sum = 0.0;
        for (int m = 1; m <= rings; ++m) {
            const complex a = loading.amplitudes[m - 1];
            sum += a * a * detail::ring_overlap(p, model, t, rings, m, nu);
        }
        return detail::pair_frequency_weight(p, t, nu) * std::norm(sum);
    });
    return pref * integral;
}

/// Dicke emission factor (J + M)(J - M + 1) of a collective spin state.
inline double dicke_rate_factor(double j, double m) {
    const double two_j = 2.0 * j;
    const double two_m = 2.0 * m;
    if (two_j != std::nearbyint(two_j) || two_m != std::nearbyint(two_m) || j < 0.0)
        throw std::domain_error("J and M must be non-negative half-integers");
    if (std::fmod(std::abs(two_j - two_m), 2.0) != 0.0)
        throw std::domain_error("J - M must be an integer");
    if (std::abs(m) > j) throw std::domain_error("|M| must not exceed J");
    return (j + m) * (j - m + 1.0);
}

}  // namespace scissor
