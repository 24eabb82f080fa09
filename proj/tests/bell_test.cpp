#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "polbell/bell.hpp"
#include "polbell/prep.hpp"

using namespace polbell;
using oracle::pi;

namespace {

const double kR2 = std::sqrt(2.0) / 2;

// S for the family closed forms with settings (d1, p, p, 2p - d1), written out.
double closed_form_s(Family f, double p, double d1) {
    auto eta = [f](double x) { return f == Family::product ? std::cos(x) : std::sin(x); };
    return std::abs(eta(d1) + 2 * eta(p) - eta(2 * p - d1));
}

}  // namespace

TEST(Eta, Examples) {
    EXPECT_DOUBLE_EQ(correlation_eta({1, 0, 0}, {1, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(correlation_eta({1, 0, 0}, {0, 1, 0}), 0.0);
    const auto st = target_entangled(pi / 4);
    EXPECT_NEAR(correlation_eta(reduced_stokes(st, Dof::polarization), reduced_stokes(st, Dof::path)), kR2, 1e-9);
}

TEST(Eta, DegenerateInputRejected) {
    for (const StokesVector& z : {StokesVector{0, 0, 0}, StokesVector{1e-10, 0, 0}}) {
        try {
            correlation_eta(z, {1, 0, 0});
            FAIL();
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::degenerate_stokes);
            EXPECT_STREQ(e.what(), "Stokes vector degenerate");
        }
        EXPECT_THROW(correlation_eta({0, 1, 0}, z), Error);
    }
    EXPECT_NO_THROW(correlation_eta({2e-9, 0, 0}, {1, 0, 0}));
}

TEST(Eta, SymmetricScaleInvariantBounded) {
    std::mt19937_64 rng(51);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> c(1e-3, 1e3);
    for (int i = 0; i < 1000; ++i) {
        const StokesVector a{g(rng), g(rng), g(rng)}, b{g(rng), g(rng), g(rng)};
        const double e = correlation_eta(a, b);
        EXPECT_NEAR(e, correlation_eta(b, a), 1e-12);
        EXPECT_NEAR(e, correlation_eta(a * c(rng), b), 1e-12);
        EXPECT_NEAR(e, correlation_eta(a, b * c(rng)), 1e-12);
        EXPECT_LE(std::abs(e), 1 + 1e-12);
    }
}

TEST(Eta, ClosedForms) {
    EXPECT_EQ(eta_product(0), 1.0);
    EXPECT_EQ(eta_entangled(pi / 2), 1.0);
    EXPECT_EQ(family_eta(Family::product, 0.4), std::cos(0.4));
    EXPECT_EQ(family_eta(Family::entangled, 0.4), std::sin(0.4));
}

TEST(Eta, ProductClosedFormMatchesStokesPair) {
    for (int i = 0; i < 100; ++i) {
        const double d = 2 * pi * i / 100;
        EXPECT_NEAR(state_correlation(target_product(d)), eta_product(d), 1e-9);
    }
}

TEST(Eta, EntangledClosedFormMatchesStokesPair) {
    for (int i = 0; i < 100; ++i) {
        const double t = 2 * pi * i / 100;
        if (std::abs(std::cos(t)) < 1e-3) continue;  // reduced Stokes vectors vanish
        EXPECT_NEAR(state_correlation(target_entangled(t)), eta_entangled(t), 1e-9);
    }
}

TEST(Eta, EntangledAtHalfPiIsDegenerate) {
    EXPECT_THROW(state_correlation(target_entangled(pi / 2)), Error);
}

// General-phase states with equal moduli. The Stokes inner product at
// phi = (0, pi/2, 0, 0) is 0, which coincides with cos(phi2 - phi3).
TEST(EtaGeneral, CounterInstanceMeasuredValue) {
    const auto st = make_general_state({0.5, 0.5, 0.5, 0.5}, {0, pi / 2, 0, 0});
    const auto a = reduced_stokes(st, Dof::polarization);
    const auto b = reduced_stokes(st, Dof::path);
    EXPECT_NEAR(a.s1, 0.5, 1e-15);
    EXPECT_NEAR(a.s2, -0.5, 1e-15);
    EXPECT_NEAR(a.s3, 0.0, 1e-15);
    EXPECT_NEAR(b.s1, 0.5, 1e-15);
    EXPECT_NEAR(b.s2, 0.5, 1e-15);
    EXPECT_NEAR(b.s3, 0.0, 1e-15);
    EXPECT_NEAR(correlation_eta(a, b), 0.0, 1e-12);
    EXPECT_NEAR(correlation_eta(a, b), std::cos(pi / 2 - 0), 1e-12);
}

TEST(EtaGeneral, EqualModuliGiveCosineOfInnerPhases) {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> u(-pi, pi);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const std::array<double, 4> phi{u(rng), u(rng), u(rng), u(rng)};
        const auto st = make_general_state({0.5, 0.5, 0.5, 0.5}, phi);
        const auto a = reduced_stokes(st, Dof::polarization);
        const auto b = reduced_stokes(st, Dof::path);
        if (a.norm() < 1e-6 || b.norm() < 1e-6) continue;
        EXPECT_NEAR(correlation_eta(a, b), std::cos(phi[1] - phi[2]), 1e-9);
        ++checked;
    }
    EXPECT_GT(checked, 1900);
}

TEST(BellParameter, Examples) {
    EXPECT_DOUBLE_EQ(bell_parameter(1, 1, 1, 1), 2.0);
    EXPECT_NEAR(bell_parameter(-kR2, -kR2, -kR2, kR2), 2 * std::sqrt(2.0), 1e-15);
    EXPECT_DOUBLE_EQ(bell_parameter(0, 0, 0, 0), 0.0);
}

TEST(BellParameter, InputRange) {
    EXPECT_NO_THROW(bell_parameter(1 + 1e-10, 0, 0, 0));
    EXPECT_THROW(bell_parameter(1.01, 0, 0, 0), Error);
    EXPECT_THROW(bell_parameter(0, 0, 0, std::nan("")), Error);
}

TEST(Settings, Examples) {
    const auto s = settings_from_free_param(3 * pi / 4, -3 * pi / 4);
    EXPECT_DOUBLE_EQ(s.delta1(), -3 * pi / 4);
    EXPECT_DOUBLE_EQ(s.delta2(), 3 * pi / 4);
    EXPECT_DOUBLE_EQ(s.delta3(), 3 * pi / 4);
    EXPECT_NEAR(s.delta4(), 9 * pi / 4, 1e-15);
    const auto z = settings_from_free_param(0, 0);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_EQ(z[k], 0.0);
}

TEST(Settings, IdentityHolds) {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-50, 50);
    for (int i = 0; i < 1000; ++i) {
        const auto s = settings_from_free_param(u(rng), u(rng));
        EXPECT_NEAR(s.delta1() + s.delta4(), s.delta2() + s.delta3(), 1e-12 * 100);
    }
}

TEST(Settings, ConstructorRejectsBrokenIdentity) {
    EXPECT_THROW(CorrelationSettings(0, 1, 1, 1), Error);
    EXPECT_NO_THROW(CorrelationSettings(0.5, 1, 1, 1.5));
}

TEST(OracleBell, TsirelsonAndClassicalPoints) {
    EXPECT_NEAR(oracle_bell(Family::product, 3 * pi / 4), 2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(oracle_bell(Family::entangled, pi / 2), 2.0, 1e-12);
    EXPECT_NEAR(oracle_bell(Family::entangled, 7 * pi / 4), 2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(concurrence(target_entangled(7 * pi / 4)), kR2, 1e-15);
}

TEST(OracleBell, MatchesWrittenOutFormula) {
    std::mt19937_64 rng(54);
    std::uniform_real_distribution<double> u(-2 * pi, 2 * pi);
    for (int i = 0; i < 500; ++i) {
        const double p = u(rng), d1 = u(rng);
        for (Family f : {Family::product, Family::entangled})
            EXPECT_NEAR(oracle_bell(f, p, d1), closed_form_s(f, p, d1), 1e-12);
    }
}

TEST(OracleBell, BoundedOverFullGrid) {
    for (int i = 0; i < 3600; ++i) {
        const double p = 2 * pi * i / 3600;
        for (Family f : {Family::product, Family::entangled}) {
            const double s = oracle_bell(f, p);
            EXPECT_GE(s, 0.0);
            EXPECT_LE(s, kTsirelson + 1e-9);
        }
    }
}

TEST(Maximize, ProductPeak) {
    const auto m = maximize_bell(Family::product);
    EXPECT_NEAR(m.s_bell, 2 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(m.param, 3 * pi / 4, 1e-6);
}

TEST(Maximize, EntangledPeak) {
    const auto m = maximize_bell(Family::entangled);
    EXPECT_NEAR(m.s_bell, 2 * std::sqrt(2.0), 1e-9);
    EXPECT_NEAR(m.param, 7 * pi / 4, 1e-6);
}

TEST(Maximize, NeverExceedsTsirelson) {
    std::mt19937_64 rng(55);
    std::uniform_real_distribution<double> u(-pi, pi);
    for (int i = 0; i < 100; ++i) {
        const double d1 = u(rng);
        for (Family f : {Family::product, Family::entangled}) {
            const auto m = maximize_bell(f, d1);
            EXPECT_LE(m.s_bell, kTsirelson + 1e-9);
            EXPECT_GE(m.param, 0.0);
            EXPECT_LT(m.param, 2 * pi);
            // The refined value is at least as good as a fine brute-force scan.
            double best = 0;
            for (int k = 0; k < 720; ++k) best = std::max(best, closed_form_s(f, 2 * pi * k / 720, d1));
            EXPECT_GE(m.s_bell, best - 1e-9);
        }
    }
}
