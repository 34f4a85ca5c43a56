#pragma once

// Biphoton amplitude, pair probability and joint spectral density.
//
// The amplitude for a pair (w1 near w_S, w2 near w_I) is
//   A = alpha^2 C sqrt(w1 w2)/v_g  Int dw sqrt(w (w1+w2-w))/v_g
//         phi_P(w) phi_P(w1+w2-w) J(w1, w2, w, w1+w2-w),
// C = 3 pi sqrt(2) hbar / (4 eps0). The pump integral is written in the
// symmetric variable t, with w3 = w_P + u/2 + t and w4 = w_P + u/2 - t,
// u = (w1 - w_S) + (w2 - w_I).
//
// Two evaluation routes share that quadrature. `bwf_amplitude` evaluates
// J pointwise through the Dirichlet factor. The lattice route expands the
// Dirichlet factor back into its ring sum,
//   e^{i chi} sin(N mu/2)/sin(mu/2) = sum_{m=0}^{N-1} e^{i (N-m) G_s + i m G_p},
// where G_s and G_p are the signal/idler and pump transmission phases. The
// pump integral then depends on u only and is tabulated once per lattice.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "scissor/constants.hpp"
#include "scissor/core_optics.hpp"
#include "scissor/errors.hpp"
#include "scissor/phase_matching.hpp"
#include "scissor/pump_pulse.hpp"
#include "scissor/quadrature.hpp"

namespace scissor {

/// Uniform axis of odd length centred on a resonance.
struct FrequencyGrid {
    double center = 0.0;      // rad/s
    double half_width = 0.0;  // rad/s
    int n_points = 257;

    static FrequencyGrid centered(double center, double half_width, int n_points) {
        FrequencyGrid g{center, half_width, n_points};
        g.validate();
        return g;
    }

    void validate() const {
        if (n_points < 33 || n_points % 2 == 0)
            throw std::invalid_argument("frequency grid needs an odd number of points >= 33");
        if (!(half_width > 0.0)) throw std::invalid_argument("grid half width must be positive");
    }

    int half_count() const { return (n_points - 1) / 2; }
    double spacing() const { return 2.0 * half_width / (n_points - 1); }
    /// Offset of node i (0-based) from the centre.
    double offset(int i) const { return (i - half_count()) * spacing(); }
    double node(int i) const { return center + offset(i); }

    /// Same span, twice the resolution.
    FrequencyGrid refined() const { return {center, half_width, 2 * n_points - 1}; }
};

struct EngineOptions {
    int pump_nodes = 1025;               // minimum nodes of the inner pump integral
    double pump_support = 0.0;           // half width of that integral; 0 selects max(10 delta, Delta)
    double richardson_tolerance = 1e-4;  // allowed h vs 2h change of the inner integral
    unsigned threads = 0;                // 0 = hardware concurrency
};

struct QuadratureDiagnostics {
    double pump_support = 0.0;
    std::size_t pump_nodes = 0;
    double pump_spacing = 0.0;
    double max_relative_change = 0.0;  // worst h vs 2h change of the inner integral
};

/// Sampled biphoton wave function on the (signal, idler) quadrant.
struct BwfGrid {
    FrequencyGrid signal_axis;
    FrequencyGrid idler_axis;
    std::vector<complex> amplitude;  // normalised phi, row-major [signal][idler], units s
    double efficiency = 0.0;         // |beta|^2 / |alpha|^4
    double beta_squared = 0.0;       // |beta|^2
    double linewidth = 0.0;          // Delta, rad/s
    int rings = 1;
    PumpPulse pulse;
    StructureParams params;
    QuadratureDiagnostics diagnostics;

    int rows() const { return signal_axis.n_points; }
    int cols() const { return idler_axis.n_points; }
    double density(int i, int j) const { return std::norm(amplitude[std::size_t(i) * cols() + j]); }
    /// Axis coordinates normalised to the linewidth, (w - w_S)/Delta and (w - w_I)/Delta.
    double signal_coordinate(int i) const { return signal_axis.offset(i) / linewidth; }
    double idler_coordinate(int j) const { return idler_axis.offset(j) / linewidth; }

    /// 2 sum |phi|^2 h1 h2, which is one after normalisation.
    double norm() const {
        std::vector<double> d(amplitude.size());
        for (std::size_t k = 0; k < d.size(); ++k) d[k] = std::norm(amplitude[k]);
        return 2.0 * quad::pairwise_sum(d) * signal_axis.spacing() * idler_axis.spacing();
    }
};

namespace detail {

/// 3 pi sqrt(2) hbar / (4 eps0)
inline double bwf_prefactor() {
    return 3.0 * constants::pi * std::sqrt(2.0) * constants::hbar /
           (4.0 * constants::vacuum_permittivity);
}

/// Inner-integral grid in t, symmetric about zero.
struct PumpQuadrature {
    double support = 0.0;
    std::size_t nodes = 0;
    double spacing = 0.0;
    std::vector<double> fine_weights;    // Simpson weights incl. h/3
    std::vector<double> coarse_weights;  // every-other-node Simpson weights incl. 2h/3, 0 elsewhere

    double node(std::size_t i) const { return -support + spacing * static_cast<double>(i); }
};

inline PumpQuadrature make_pump_quadrature(const StructureParams& p, const PumpPulse& pulse,
                                           int rings, const EngineOptions& opt) {
    const double width = linewidth(p);
    PumpQuadrature q;
    q.support = opt.pump_support > 0.0 ? opt.pump_support : default_pump_support(pulse, width);
    // At least 8 nodes per min(delta, Delta / N); the ring sum winds the
    // pump-side phase N times across each resonance.
    const double finest = std::min(bandwidth_delta(pulse), width / std::max(rings, 1)) / 8.0;
    const auto needed = static_cast<std::size_t>(std::ceil(2.0 * q.support / finest)) + 1;
    q.nodes = quad::richardson_node_count(
        std::max<std::size_t>(needed, static_cast<std::size_t>(std::max(opt.pump_nodes, 5))));
    q.spacing = 2.0 * q.support / static_cast<double>(q.nodes - 1);
    const auto w = quad::simpson_weights(q.nodes);
    const auto wc = quad::simpson_weights((q.nodes + 1) / 2);
    q.fine_weights.resize(q.nodes);
    q.coarse_weights.assign(q.nodes, 0.0);
    for (std::size_t i = 0; i < q.nodes; ++i) q.fine_weights[i] = w[i] * q.spacing / 3.0;
    for (std::size_t i = 0; i < wc.size(); ++i) q.coarse_weights[2 * i] = wc[i] * 2.0 * q.spacing / 3.0;
    return q;
}

inline void check_grid_pair(const ResonanceTriplet& t, const FrequencyGrid& s,
                            const FrequencyGrid& i) {
    s.validate();
    i.validate();
    if (s.n_points != i.n_points || std::abs(s.spacing() - i.spacing()) > 1e-12 * s.spacing())
        throw std::invalid_argument("signal and idler grids must share spacing and size");
    if (s.center != t.signal || i.center != t.idler)
        throw std::invalid_argument("grids must be centred on the signal and idler resonances");
}

}  // namespace detail

/// Direct evaluation of the amplitude at one (w1, w2) using J with its
/// Dirichlet factor. Scaled by alpha^2 = photon number. Throws
/// numerical_error when Simpson at h and 2h disagree by more than the
/// tolerance relative to the integral of |integrand|.
inline complex bwf_amplitude(const StructureParams& p, const DispersionModel& model,
                             const ResonanceTriplet& t, const PumpPulse& pulse, int rings,
                             double w1, double w2, const EngineOptions& opt = {}) {
    pulse.validate();
    const auto pq = detail::make_pump_quadrature(p, pulse, rings, opt);
    const double d1 = w1 - t.signal;
    const double d2 = w2 - t.idler;
    const double u = d1 + d2;
    std::vector<complex> fine(pq.nodes), coarse(pq.nodes);
    std::vector<double> mass(pq.nodes);
    for (std::size_t k = 0; k < pq.nodes; ++k) {
        const double d3 = 0.5 * u + pq.node(k);
        const double d4 = 0.5 * u - pq.node(k);
        const double amp = spectral_amplitude_at_detuning(pulse, d3) *
                           spectral_amplitude_at_detuning(pulse, d4);
        complex f = 0.0;
        if (amp != 0.0) {
            const auto in = PhaseMatchInputs::from_detunings(t, d1, d2, d3, d4);
            f = std::sqrt((t.pump + d3) * (t.pump + d4)) * amp * big_j(p, model, t, in, rings);
        }
        fine[k] = f * pq.fine_weights[k];
        coarse[k] = f * pq.coarse_weights[k];
        mass[k] = std::abs(f) * pq.fine_weights[k];
    }
    const complex integral = quad::pairwise_sum(fine);
    const complex integral_coarse = quad::pairwise_sum(coarse);
    const double scale = quad::pairwise_sum(mass);
    if (scale > 0.0 && std::abs(integral - integral_coarse) > opt.richardson_tolerance * scale)
        throw numerical_error("pump integral did not converge", std::abs(integral_coarse),
                              std::abs(integral), opt.richardson_tolerance);
    const double vg = p.group_velocity;
    return pulse.photon_number * detail::bwf_prefactor() * std::sqrt(w1 * w2) / (vg * vg) *
           integral;
}

/// Amplitudes on a square lattice of detunings (i h, j h), i, j in
/// [-n, n], around (w_S, w_I), per unit alpha^2, via the ring-sum route.
struct LatticeAmplitudes {
    int half_count = 0;
    double spacing = 0.0;
    std::vector<complex> values;  // row-major, (2n+1)^2
    QuadratureDiagnostics diagnostics;
};

inline LatticeAmplitudes lattice_amplitudes(const StructureParams& p, const DispersionModel& model,
                                            const ResonanceTriplet& t, const PumpPulse& pulse,
                                            int rings, int half_count, double spacing,
                                            const EngineOptions& opt = {}) {
    if (rings < 1) throw std::invalid_argument("number of rings must be >= 1");
    if (half_count < 1 || !(spacing > 0.0)) throw std::invalid_argument("bad lattice");
    pulse.validate();
    const auto pq = detail::make_pump_quadrature(p, pulse, rings, opt);
    const double width = linewidth(p);
    const double sigma = p.self_coupling;
    const std::size_t nr = static_cast<std::size_t>(rings);

    // Pump table Q_m(u) for u = k h, k in [-2n, 2n], m in [0, N).
    const int nu = 4 * half_count + 1;
    std::vector<complex> table(std::size_t(nu) * nr), table_coarse(std::size_t(nu) * nr);
    std::vector<double> mass(nu);
    quad::parallel_for(
        std::size_t(nu),
        [&](std::size_t row) {
            const double u = (static_cast<int>(row) - 2 * half_count) * spacing;
            complex* q = &table[row * nr];
            complex* qc = &table_coarse[row * nr];
            double abs_mass = 0.0;
            for (std::size_t k = 0; k < pq.nodes; ++k) {
                const double d3 = 0.5 * u + pq.node(k);
                const double d4 = 0.5 * u - pq.node(k);
                const double amp = spectral_amplitude_at_detuning(pulse, d3) *
                                   spectral_amplitude_at_detuning(pulse, d4);
                if (amp == 0.0) continue;
                const complex base = std::sqrt((t.pump + d3) * (t.pump + d4)) * amp *
                                     resonance_lorentzian(d3, width) *
                                     resonance_lorentzian(d4, width);
                const double gp =
                    transmission_phase_offset(sigma, model.round_trip_offset(d3)) +
                    transmission_phase_offset(sigma, model.round_trip_offset(d4));
                const complex z = std::polar(1.0, gp);
                const double wf = pq.fine_weights[k];
                const double wc = pq.coarse_weights[k];
                complex term = base;
                for (std::size_t m = 0; m < nr; ++m) {
                    q[m] += wf * term;
                    if (wc != 0.0) qc[m] += wc * term;
                    term *= z;
                }
                abs_mass += wf * std::abs(base);
            }
            mass[row] = abs_mass;
        },
        opt.threads);

    double worst_diff = 0.0;
    const double scale = *std::max_element(mass.begin(), mass.end());
    for (std::size_t k = 0; k < table.size(); ++k)
        worst_diff = std::max(worst_diff, std::abs(table[k] - table_coarse[k]));
    LatticeAmplitudes out;
    out.half_count = half_count;
    out.spacing = spacing;
    out.diagnostics = {pq.support, pq.nodes, pq.spacing, scale > 0.0 ? worst_diff / scale : 0.0};
    if (scale > 0.0 && worst_diff > opt.richardson_tolerance * scale)
        throw numerical_error("pump integral did not converge on the lattice", 0.0,
                              worst_diff / scale, opt.richardson_tolerance);

    // Per-axis factors sqrt(w) L(d) and e^{i g(d)}.
    const int n = 2 * half_count + 1;
    std::vector<complex> axis_s(n), axis_i(n), phase_s(n), phase_i(n);
    for (int i = 0; i < n; ++i) {
        const double d = (i - half_count) * spacing;
        axis_s[i] = std::sqrt(t.signal + d) * resonance_lorentzian(d, width);
        axis_i[i] = std::sqrt(t.idler + d) * resonance_lorentzian(d, width);
        const double g = transmission_phase_offset(sigma, model.round_trip_offset(d));
        phase_s[i] = std::polar(1.0, g);
        phase_i[i] = phase_s[i];  // same offset function on both resonances
    }
    const double vg = p.group_velocity;
    const double gain = 2.0 / p.coupling_loss();
    const double pref = detail::bwf_prefactor() * gain * gain *
                        ring_kernel_constant(p, t.pump) / (vg * vg);

    out.values.assign(std::size_t(n) * n, complex{});
    quad::parallel_for(
        std::size_t(n),
        [&](std::size_t row) {
            const int i = static_cast<int>(row);
            for (int j = 0; j < n; ++j) {
                const complex z = phase_s[i] * phase_i[j];
                const complex* q = &table[std::size_t(i + j) * nr];
                complex acc = q[0];
                for (std::size_t m = 1; m < nr; ++m) acc = acc * z + q[m];
                acc *= z;
                out.values[row * n + j] = pref * axis_s[i] * axis_i[j] * acc;
            }
        },
        opt.threads);
    return out;
}

/// |beta|^2 / |alpha|^4 = 2 sum |A / alpha^2|^2 h1 h2 over the quadrant.
/// The grids must cover at least +/- max(5 Delta, 5 delta) and share a spacing.
inline double beta_squared(const StructureParams& p, const DispersionModel& model,
                           const ResonanceTriplet& t, const PumpPulse& pulse, int rings,
                           const FrequencyGrid& signal_axis, const FrequencyGrid& idler_axis,
                           const EngineOptions& opt = {},
                           QuadratureDiagnostics* diagnostics = nullptr) {
    detail::check_grid_pair(t, signal_axis, idler_axis);
    const double reach = std::max(5.0 * linewidth(p), 5.0 * bandwidth_delta(pulse));
    if (signal_axis.half_width < reach * (1.0 - 1e-12))
        throw std::invalid_argument("grid must cover +/- max(5 Delta, 5 delta)");
    const auto lattice = lattice_amplitudes(p, model, t, pulse, rings, signal_axis.half_count(),
                                            signal_axis.spacing(), opt);
    if (diagnostics) *diagnostics = lattice.diagnostics;
    std::vector<double> dens(lattice.values.size());
    for (std::size_t k = 0; k < dens.size(); ++k) dens[k] = std::norm(lattice.values[k]);
    const double h = signal_axis.spacing();
    return 2.0 * quad::pairwise_sum(dens) * h * h;
}

/// Grid for |beta|^2 that covers +/- max(5 Delta, 5 delta) and resolves the
/// narrower of the resonance and the pump spectrum.
inline FrequencyGrid efficiency_grid(const StructureParams& p, const PumpPulse& pulse,
                                     double center, int min_points = 257) {
    const double width = linewidth(p);
    const double reach = std::max(5.0 * width, 5.0 * bandwidth_delta(pulse));
    const double spacing = std::min(2.0 * reach / (min_points - 1), pulse.spectral_scale());
    int half = static_cast<int>(std::ceil(reach / spacing));
    return FrequencyGrid::centered(center, half * spacing, 2 * half + 1);
}

struct ConvergedEfficiency {
    double value = 0.0;      // on the refined grid
    double coarse = 0.0;     // on the starting grid
    double relative_change = 0.0;
    FrequencyGrid grid;      // refined signal grid
    QuadratureDiagnostics diagnostics;  // of the refined evaluation
};

/// |beta|^2/|alpha|^4 at spacing h and h/2; throws numerical_error if they
/// differ by more than `tolerance` (relative).
inline ConvergedEfficiency beta_squared_converged(const StructureParams& p,
                                                  const DispersionModel& model,
                                                  const ResonanceTriplet& t,
                                                  const PumpPulse& pulse, int rings,
                                                  const FrequencyGrid& signal_axis,
                                                  const FrequencyGrid& idler_axis,
                                                  const EngineOptions& opt = {},
                                                  double tolerance = 0.01) {
    ConvergedEfficiency r;
    r.coarse = beta_squared(p, model, t, pulse, rings, signal_axis, idler_axis, opt);
    r.grid = signal_axis.refined();
    r.value = beta_squared(p, model, t, pulse, rings, r.grid, idler_axis.refined(), opt,
                           &r.diagnostics);
    r.relative_change = std::abs(r.value - r.coarse) / std::abs(r.value);
    if (r.relative_change > tolerance)
        throw numerical_error("pair probability not converged under grid refinement", r.coarse,
                              r.value, tolerance);
    return r;
}

/// Normalised BWF and |beta|^2 on the given quadrant grids.
inline BwfGrid jsd_grid(const StructureParams& p, const DispersionModel& model,
                        const ResonanceTriplet& t, const PumpPulse& pulse, int rings,
                        const FrequencyGrid& signal_axis, const FrequencyGrid& idler_axis,
                        const EngineOptions& opt = {}) {
    detail::check_grid_pair(t, signal_axis, idler_axis);
    auto lattice = lattice_amplitudes(p, model, t, pulse, rings, signal_axis.half_count(),
                                      signal_axis.spacing(), opt);
    BwfGrid g;
    g.signal_axis = signal_axis;
    g.idler_axis = idler_axis;
    g.linewidth = linewidth(p);
    g.rings = rings;
    g.pulse = pulse;
    g.params = p;
    g.diagnostics = lattice.diagnostics;
    std::vector<double> dens(lattice.values.size());
    for (std::size_t k = 0; k < dens.size(); ++k) dens[k] = std::norm(lattice.values[k]);
    const double h = signal_axis.spacing();
    g.efficiency = 2.0 * quad::pairwise_sum(dens) * h * h;
    g.beta_squared = g.efficiency * pulse.photon_number * pulse.photon_number;
    if (!(g.efficiency > 0.0)) throw numerical_error("vanishing pair amplitude on grid", 0, 0, 0);
    const double inv = 1.0 / std::sqrt(g.efficiency);
    g.amplitude = std::move(lattice.values);
    // The i prefactor is a global phase and is kept.
    const complex i_unit(0.0, 1.0);
    for (auto& a : g.amplitude) a *= i_unit * inv;
    return g;
}

}  // namespace scissor
