#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "scissor/core_optics.hpp"

using namespace scissor;

TEST(CoreOptics, DerivedScalarsOfDefaultStructure) {
    oracle::Setup s;
    EXPECT_NEAR(s.width, 2 * 0.0126 * 0.75e8 / (constants::two_pi * 5e-6), 1e-3);
    EXPECT_NEAR(s.width / 6.0e10, 1.0, 0.01);
    EXPECT_NEAR(quality_factor(s.p, s.t.pump) / 20000.0, 1.0, 0.02);
    EXPECT_NEAR(dwell_time(s.p) / 0.017e-9, 1.0, 0.03);
    EXPECT_NEAR(vacuum_wavelength(s.t.pump) / 1570e-9, 1.0, 0.01);
    EXPECT_NEAR(free_spectral_range(s.p), 0.75e8 / (constants::two_pi * 5e-6), 1e-3);
}

TEST(CoreOptics, ResonanceBookkeeping) {
    oracle::Setup s;
    EXPECT_EQ(s.t.pump_order, 50);
    EXPECT_EQ(s.t.signal_order, 49);
    EXPECT_EQ(s.t.idler_order, 51);
    EXPECT_LT(s.t.signal, s.t.pump);
    EXPECT_EQ(s.t.energy_mismatch(), 0.0);
    const auto m = s.model.locate(s.t.idler + 0.3 * s.model.resonance_spacing());
    EXPECT_EQ(m.order, 51);
    EXPECT_NEAR(m.detuning / s.model.resonance_spacing(), 0.3, 1e-12);
    EXPECT_NEAR(s.model.wavenumber(s.t.pump) * s.p.circumference(), constants::two_pi * 50, 1e-9);
    const auto sw = s.t.swapped();
    EXPECT_EQ(sw.signal, s.t.idler);
    EXPECT_EQ(sw.idler_order, s.t.signal_order);
}

TEST(CoreOptics, InvalidInputsRejected) {
    StructureParams p;
    p.self_coupling = 1.0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.ring_radius = -1;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    p = {};
    p.num_rings = 0;
    EXPECT_THROW(p.validate(), std::invalid_argument);
    oracle::Setup s;
    EXPECT_THROW(s.model.wavenumber(0.0), std::domain_error);
    EXPECT_THROW(s.model.wavenumber(-1.0), std::domain_error);
    EXPECT_THROW(DispersionModel(0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST(CoreOptics, WeakCouplingWarning) {
    StructureParams p;
    EXPECT_TRUE(p.warnings().empty());
    p.self_coupling = 0.8;
    EXPECT_EQ(p.warnings().size(), 1u);
}

TEST(CoreOptics, TransmissionIsUnimodularEverywhere) {
    oracle::Setup s;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int k = 0; k < 2000; ++k) {
        const double w = s.t.pump + d(rng) * s.model.resonance_spacing();
        EXPECT_NEAR(std::abs(transmission(s.p, s.model, w)), 1.0, 1e-12);
    }
}

TEST(CoreOptics, TransmissionPhaseMatchesUnwrappedArgument) {
    oracle::Setup s;
    const double sigma = s.p.self_coupling;
    // Unwrap arg T along x from the resonance, where T = -1.
    double unwrapped = constants::pi;
    double prev = std::arg(oracle::ring_transmission(sigma, 0.0));
    const int steps = 200000;
    const double xmax = 3.0 * constants::two_pi;
    for (int k = 1; k <= steps; ++k) {
        const double x = xmax * k / steps;
        const double a = std::arg(oracle::ring_transmission(sigma, x));
        double da = a - prev;
        while (da > constants::pi) da -= constants::two_pi;
        while (da < -constants::pi) da += constants::two_pi;
        unwrapped += da;
        prev = a;
        if (k % 5000 == 0) {
            const double detuning = x * s.p.group_velocity / s.p.circumference();
            const double theta = transmission_phase(s.p, s.model, ModeOffset{0, detuning});
            EXPECT_NEAR(theta, unwrapped, 1e-9) << "x = " << x;
        }
    }
}

TEST(CoreOptics, TransmissionPhaseMonotoneAndTwoPiPerResonance) {
    oracle::Setup s;
    const double step = s.model.resonance_spacing();
    double prev = transmission_phase(s.p, s.model, s.t.signal - 0.5 * step);
    for (int k = 1; k <= 4000; ++k) {
        const double w = s.t.signal - 0.5 * step + 3.0 * step * k / 4000.0;
        const double th = transmission_phase(s.p, s.model, ModeOffset{s.t.signal_order,
                                                                      w - s.t.signal});
        EXPECT_GT(th, prev);
        prev = th;
    }
    const double a = transmission_phase(s.p, s.model, s.t.signal);
    const double b = transmission_phase(s.p, s.model, s.t.pump);
    EXPECT_NEAR(b - a, constants::two_pi, 1e-9);
}

TEST(CoreOptics, TransmissionPhaseSmallOffsetForm) {
    const double sigma = 1.0 - 0.0126;
    auto approx = [&](double x) { return x + 2.0 * std::atan(sigma * x / (1.0 - sigma)); };
    EXPECT_NEAR(transmission_phase_offset(sigma, 1e-4), approx(1e-4), 1e-6);
    // Farther out the two forms separate.
    EXPECT_NEAR(transmission_phase_offset(sigma, 0.01) - approx(0.01), -3.8e-3, 2e-4);
    EXPECT_EQ(transmission_phase_offset(sigma, 0.0), 0.0);
    EXPECT_EQ(transmission_phase_offset(sigma, -0.3), -transmission_phase_offset(sigma, 0.3));
}

TEST(CoreOptics, FieldEnhancementMatchesAllPassRing) {
    oracle::Setup s;
    const double sigma = s.p.self_coupling;
    EXPECT_NEAR(std::norm(field_enhancement(s.p, s.model, s.t.pump)),
                (1 + sigma) / (1 - sigma), 1e-9);
    const double anti = s.t.pump + 0.5 * s.model.resonance_spacing();
    EXPECT_NEAR(std::norm(field_enhancement(s.p, s.model, ModeOffset{50, anti - s.t.pump})),
                (1 - sigma) / (1 + sigma), 1e-12);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-0.5, 0.5);
    for (int k = 0; k < 500; ++k) {
        const double nu = d(rng) * s.model.resonance_spacing();
        const double x = s.model.round_trip_offset(nu);
        const double f2 = std::norm(field_enhancement(s.p, s.model, ModeOffset{50, nu}));
        EXPECT_NEAR(f2 / oracle::enhancement_sq(sigma, x), 1.0, 1e-12);
    }
}

TEST(CoreOptics, LorentzianWithinTwoPercentNearResonance) {
    oracle::Setup s;
    for (int k = -300; k <= 300; ++k) {
        const double w = s.t.pump + 3.0 * s.width * k / 300.0;
        const double exact = std::abs(field_enhancement(s.p, s.model, w));
        const double lor = std::abs(field_enhancement_lorentzian(s.p, s.model, w));
        EXPECT_NEAR(lor / exact, 1.0, 0.02) << "k = " << k;
    }
    // Peak 2/(1 - sigma) and half maximum at Delta/2.
    const double peak = std::norm(field_enhancement_lorentzian(s.p, s.model, s.t.pump));
    EXPECT_NEAR(peak, 2.0 / s.p.coupling_loss(), 1e-9);
    EXPECT_NEAR(std::norm(field_enhancement_lorentzian(s.p, s.model, s.t.pump + 0.5 * s.width)) /
                    peak,
                0.5, 1e-10);
}
