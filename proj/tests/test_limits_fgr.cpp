#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "scissor/limits_fgr.hpp"

using namespace scissor;

TEST(LongPulse, ClosedFormMatchesQuadrature) {
    oracle::Setup s;
    const double closed = long_pulse_rate_closed_form(s.p, s.t, 1, 1e-9);
    const double quad = long_pulse_rate(s.p, s.model, s.t, 1, 1e-9);
    EXPECT_NEAR(closed / 3.0e-15, 1.0, 0.02);
    EXPECT_NEAR(quad / closed, 1.0, 0.02);
}

TEST(LongPulse, QuadratureMatchesAdaptiveOracle) {
    oracle::Setup s;
    for (int n : {1, 4}) {
        const double lib = long_pulse_rate(s.p, s.model, s.t, n, 1e-9);
        const double ref = oracle::long_pulse_rate(s, n, 1e-9);
        EXPECT_NEAR(lib / ref, 1.0, 1e-6);
    }
}

TEST(LongPulse, ScalingWithRingsAndDuration) {
    oracle::Setup s;
    const double base = long_pulse_rate(s.p, s.model, s.t, 3, 1e-9);
    EXPECT_NEAR(long_pulse_rate(s.p, s.model, s.t, 6, 1e-9) / base, 4.0, 1e-12);
    EXPECT_NEAR(long_pulse_rate(s.p, s.model, s.t, 3, 2e-9) / base, 0.5, 1e-12);
    EXPECT_NEAR(long_pulse_rate_closed_form(s.p, s.t, 6, 1e-9) /
                    long_pulse_rate_closed_form(s.p, s.t, 3, 1e-9),
                4.0, 1e-12);
}

TEST(LongPulse, RegimeWarning) {
    oracle::Setup s;
    std::vector<std::string> warnings;
    long_pulse_rate(s.p, s.model, s.t, 1, 1e-9, &warnings);
    EXPECT_TRUE(warnings.empty());
    long_pulse_rate(s.p, s.model, s.t, 1, 5 * dwell_time(s.p), &warnings);
    EXPECT_EQ(warnings.size(), 1u);
    EXPECT_THROW(long_pulse_rate(s.p, s.model, s.t, 1, 0.0), std::domain_error);
}

TEST(LongPulse, EnergyDensityForm) {
    oracle::Setup s;
    const double photons = 1e6, dt = 1e-9;
    const double energy = constants::hbar * s.t.pump * photons / (s.p.group_velocity * dt);
    const double rate = long_pulse_rate_from_energy_density(s.p, s.model, s.t, 2, energy);
    const double per_pulse = long_pulse_rate(s.p, s.model, s.t, 2, dt) * photons * photons;
    EXPECT_NEAR(rate * dt / per_pulse, 1.0, 1e-12);
}

TEST(Fgr, CoherentLoadingReproducesLongPulse) {
    oracle::Setup s;
    for (int n : {1, 2, 5, 12}) {
        for (double dt : {1e-9, 5e-10}) {
            const auto loading = coherent_loading(s.p, s.model, s.t, n, 1.0, dt);
            const double fgr = fgr_rate(s.p, s.model, s.t, loading) * dt;
            const double lp = long_pulse_rate(s.p, s.model, s.t, n, dt);
            EXPECT_NEAR(fgr / lp, 1.0, 1e-10) << "N " << n;
        }
    }
}

TEST(Fgr, LoadingMagnitudesAreEqual) {
    oracle::Setup s;
    const auto loading = coherent_loading(s.p, s.model, s.t, 8, 4.0, 1e-9);
    const double expected = 2.0 * std::sqrt(s.p.circumference() / (s.p.group_velocity * 1e-9)) *
                            std::abs(field_enhancement(s.p, s.model, s.t.pump));
    for (const auto& a : loading.amplitudes) EXPECT_NEAR(std::abs(a) / expected, 1.0, 1e-12);
}

TEST(Fgr, CoherentLoadingInterferesConstructively) {
    oracle::Setup s;
    const int n = 6;
    const auto loading = coherent_loading(s.p, s.model, s.t, n, 1.0, 1e-9);
    for (double nu : {0.0, 0.3 * s.width, -1.7 * s.width}) {
        complex sum = 0.0;
        double magnitudes = 0.0;
        for (int m = 1; m <= n; ++m) {
            const complex a = loading.amplitudes[m - 1];
            const complex term = a * a * detail::ring_overlap(s.p, s.model, s.t, n, m, nu);
            sum += term;
            magnitudes += std::abs(term);
        }
        EXPECT_NEAR(std::abs(sum) / magnitudes, 1.0, 1e-12);
    }
}

TEST(Fgr, ScrambledLoadingLowersRate) {
    oracle::Setup s;
    for (int n : {2, 3, 10}) {
        const double coherent = fgr_rate(s.p, s.model, s.t, coherent_loading(s.p, s.model, s.t, n, 1.0, 1e-9));
        for (std::uint32_t seed : {1u, 2u, 3u}) {
            const double scrambled = fgr_rate(
                s.p, s.model, s.t, scrambled_loading(s.p, s.model, s.t, n, 1.0, 1e-9, seed));
            EXPECT_LT(scrambled, coherent);
        }
    }
    const double one = fgr_rate(s.p, s.model, s.t, coherent_loading(s.p, s.model, s.t, 1, 1.0, 1e-9));
    const double one_scrambled =
        fgr_rate(s.p, s.model, s.t, scrambled_loading(s.p, s.model, s.t, 1, 1.0, 1e-9, 42));
    EXPECT_NEAR(one_scrambled / one, 1.0, 1e-12);
    EXPECT_THROW(fgr_rate(s.p, s.model, s.t, RingLoading{}), std::invalid_argument);
}

TEST(Dicke, RateFactorTable) {
    for (int n : {1, 2, 5, 10}) {
        const double j = 0.5 * n;
        EXPECT_DOUBLE_EQ(dicke_rate_factor(j, j), n);
        EXPECT_DOUBLE_EQ(dicke_rate_factor(j, -j), 0.0);
    }
    EXPECT_DOUBLE_EQ(dicke_rate_factor(2.0, 0.0), 6.0);
    EXPECT_DOUBLE_EQ(dicke_rate_factor(5.0, 0.0), 30.0);
    EXPECT_DOUBLE_EQ(dicke_rate_factor(1.5, 0.5), 4.0);
    EXPECT_DOUBLE_EQ(dicke_rate_factor(1.5, -0.5), 3.0);
    // Largest at M = 0 (or 1/2) for fixed J = N/2.
    double best = 0.0, best_m = -1;
    for (int k = -10; k <= 10; k += 2) {
        const double f = dicke_rate_factor(5.0, 0.5 * k);
        if (f > best) best = f, best_m = 0.5 * k;
    }
    EXPECT_DOUBLE_EQ(best_m, 0.0);
    EXPECT_THROW(dicke_rate_factor(1.0, 2.0), std::domain_error);
    EXPECT_THROW(dicke_rate_factor(1.0, 0.5), std::domain_error);
    EXPECT_THROW(dicke_rate_factor(0.3, 0.0), std::domain_error);
}
