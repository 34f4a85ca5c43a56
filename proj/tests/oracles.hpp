#pragma once

// Reference computations that avoid the library's own shortcuts: complex
// transmission products instead of phases, explicit ring sums instead of
// the Dirichlet factor, adaptive quadrature instead of fixed grids.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include "scissor/scissor.hpp"

namespace oracle {

using scissor::complex;

struct Setup {
    scissor::StructureParams p;
    scissor::DispersionModel model = scissor::DispersionModel::from_phase_index(p, 50);
    scissor::ResonanceTriplet t = scissor::ResonanceTriplet::around(model);
    double width = scissor::linewidth(p);
};

/// |F|^2 from the all-pass ring, (1 - sigma^2)/(1 - 2 sigma cos x + sigma^2).
inline double enhancement_sq(double sigma, double x) {
    return (1.0 - sigma * sigma) / (1.0 - 2.0 * sigma * std::cos(x) + sigma * sigma);
}

/// Complex transmission from the round-trip offset.
inline complex ring_transmission(double sigma, double x) {
    const complex e = std::polar(1.0, x);
    return (sigma - e) / (1.0 - sigma * e);
}

/// J as an explicit sum over rings: ring m sees the pump after m - 1 rings
/// and the pair through the remaining N - m + 1.
inline complex ring_sum_j(const Setup& s, int rings, double d1, double d2, double d3, double d4) {
    const double sigma = s.p.self_coupling;
    auto tr = [&](double d) { return ring_transmission(sigma, s.model.round_trip_offset(d)); };
    const complex t1 = tr(d1), t2 = tr(d2), t3 = tr(d3), t4 = tr(d4);
    const double vg = s.p.group_velocity;
    const double dk = ((d3 + d4) - (d1 + d2)) / vg;  // resonance wavenumbers cancel
    const auto in = scissor::PhaseMatchInputs::from_detunings(s.t, d1, d2, d3, d4);
    const complex jr = scissor::j_ref(s.p, s.model, s.t, in);
    complex sum = 0.0;
    for (int m = 1; m <= rings; ++m) {
        const double zm = s.p.first_ring_position + (m - 1) * s.p.ring_spacing;
        sum += std::polar(1.0, dk * zm) * std::pow(t3 * t4, m - 1) * std::pow(t1 * t2, rings - m + 1);
    }
    return sum * jr;
}

/// Adaptive Simpson to a relative tolerance.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 40) {
    struct Rec {
        const std::function<double(double)>& f;
        double run(double a, double b, double fa, double fm, double fb, double whole, double eps,
                   int depth) const {
            const double m = 0.5 * (a + b);
            const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
            const double flm = f(lm), frm = f(rm);
            const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
            const double diff = left + right - whole;
            if (depth <= 0 || std::abs(diff) <= 15.0 * eps) return left + right + diff / 15.0;
            return run(a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
                   run(m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
        }
    } rec{f};
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return rec.run(a, b, fa, fm, fb, whole, tol * std::abs(whole) + 1e-300, depth);
}

/// Adaptive integral over the real line split at the given break points.
inline double adaptive_over(const std::function<double(double)>& f,
                            std::initializer_list<double> cuts, double tol) {
    double total = 0.0;
    const double* prev = nullptr;
    for (const double& c : cuts) {
        if (prev) total += adaptive_simpson(f, *prev, c, tol);
        prev = &c;
    }
    return total;
}

/// Long-pulse |beta|^2/|alpha|^4 straight from its definition, with |J|^2
/// from the ring-sum oracle and adaptive quadrature in the detuning.
inline double long_pulse_rate(const Setup& s, int rings, double duration, double tol = 1e-9) {
    const double eps0 = scissor::constants::vacuum_permittivity;
    const double vg = s.p.group_velocity;
    const double pref = 9.0 * std::pow(scissor::constants::pi, 3) / (2.0 * eps0 * eps0) *
                        std::pow(scissor::constants::hbar * s.t.pump / vg, 2);
    auto f = [&](double nu) {
        const double w = s.t.signal + nu;
        const double weight = w * (2.0 * s.t.pump - w) / (vg * vg);
        return weight * std::norm(ring_sum_j(s, rings, nu, -nu, 0.0, 0.0));
    };
    const double edge = 0.5 * s.model.resonance_spacing();
    const double d = s.width;
    const double integral =
        adaptive_over(f, {-edge, -20 * d, -2 * d, 0.0, 2 * d, 20 * d, edge}, tol);
    return pref * integral / duration;
}

/// Amplitude from its definition: adaptive quadrature over the pump
/// frequency with J from the ring-sum oracle.
inline complex amplitude(const Setup& s, const scissor::PumpPulse& pulse, int rings, double d1,
                         double d2, double support, double tol = 1e-10) {
    const double u = d1 + d2;
    const double vg = s.p.group_velocity;
    auto integrand = [&](double t) {
        const double d3 = 0.5 * u + t, d4 = 0.5 * u - t;
        return std::sqrt((s.t.pump + d3) * (s.t.pump + d4)) *
               scissor::spectral_amplitude_at_detuning(pulse, d3) *
               scissor::spectral_amplitude_at_detuning(pulse, d4) *
               ring_sum_j(s, rings, d1, d2, d3, d4);
    };
    const double re = adaptive_simpson([&](double t) { return integrand(t).real(); }, -support,
                                       support, tol);
    const double im = adaptive_simpson([&](double t) { return integrand(t).imag(); }, -support,
                                       support, tol);
    const double c = 3.0 * scissor::constants::pi * std::sqrt(2.0) * scissor::constants::hbar /
                     (4.0 * scissor::constants::vacuum_permittivity);
    return pulse.photon_number * c * std::sqrt((s.t.signal + d1) * (s.t.idler + d2)) / (vg * vg) *
           complex(re, im);
}

/// Small-detuning form of mu on the energy-conserving line with
/// signal/idler detunings u +/- eta and both pump photons at u:
///   8u/Delta - (8u/Delta) Delta^2 / (Delta^2 + 4 eta^2 - 4 u^2).
inline double mu_series(double width, double u, double eta) {
    const double a = 8.0 * u / width;
    return a - a * width * width / (width * width + 4.0 * eta * eta - 4.0 * u * u);
}

}  // namespace oracle
