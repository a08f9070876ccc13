#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "quec/regret.hpp"

using namespace quec;

TEST(Regret, StationaryMatchesClosedForm) {
    RegretOptions o;
    const auto tr = regret_simulate(o);
    ASSERT_EQ(tr.t.size(), 1001u);
    EXPECT_EQ(tr.G[0], 0.0);
    for (std::size_t i = 0; i < tr.t.size(); ++i) {
        EXPECT_NEAR(tr.g[i], o.g0 / (1 + o.eta * o.g0 * tr.t[i]), 1e-9);
        // trapezoid on dt = 0.1
        EXPECT_NEAR(tr.G[i], regret_reference(o.eta, o.g0, tr.t[i]), 1e-4 * (1 + tr.G[i]));
    }
    EXPECT_FALSE(tr.diverged);
}

TEST(Regret, ReferenceIsLogarithmic) {
    EXPECT_NEAR(regret_reference(0.1, 1.0, 100.0), 10.0 * std::log(11.0), 1e-12);
    EXPECT_NEAR(regret_reference(0.5, 2.0, 3.0, 0.5), std::log(1.0 + 1.5) / 0.25, 1e-12);
}

TEST(Regret, ZeroNoiseIgnoresFrequency) {
    RegretOptions a, b;
    a.p = b.p = 0.0;
    b.nu = std::numbers::pi / 0.01;
    const auto ta = regret_simulate(a), tb = regret_simulate(b);
    ASSERT_EQ(ta.G.size(), tb.G.size());
    for (std::size_t i = 0; i < ta.G.size(); ++i) EXPECT_EQ(ta.G[i], tb.G[i]);
}

TEST(Regret, CumulativeNondecreasingWhileNonnegative) {
    RegretOptions o;
    o.nu = std::numbers::pi / 0.5;
    o.horizon = 20.0;
    o.grid = 400;
    const auto tr = regret_simulate(o);
    for (std::size_t i = 1; i < tr.G.size(); ++i)
        if (tr.g[i - 1] >= 0 && tr.g[i] >= 0) EXPECT_GE(tr.G[i], tr.G[i - 1]);
}

TEST(Regret, ForcingMatchesFormula) {
    const double nu = 3.0, p = 0.2, t = 0.37;
    const double u = std::sin(std::numbers::pi * nu * t / 2);
    const double s = std::abs(std::cos(u)) + std::abs(std::sin(u));
    EXPECT_NEAR(regret_forcing(t, nu, p), 2 * p * s * s * std::numbers::pi * nu * std::sin(2 * nu * t), 1e-15);
    EXPECT_EQ(regret_forcing(0.0, nu, p), 0.0);
}

TEST(Regret, SubstepsResolveTheForcingPeriod) {
    RegretOptions o;
    o.nu = std::numbers::pi / 0.01;
    o.horizon = 1.0;
    o.grid = 10;
    const auto tr = regret_simulate(o);
    // dt = 0.1, forcing period 0.01, 40 steps per period.
    EXPECT_EQ(tr.substeps, 400);
}

TEST(Regret, PrintedDynamicsDivergeAtLongHorizon) {
    RegretOptions o;
    o.nu = std::numbers::pi / 0.5;
    const auto tr = regret_simulate(o);
    EXPECT_TRUE(tr.diverged);
    EXPECT_GT(tr.diverged_at, 50.0);
    EXPECT_LT(tr.diverged_at, 100.0);
    EXPECT_EQ(tr.t.size(), tr.G.size());
    EXPECT_LT(tr.g.back(), 0.0);
}

TEST(Regret, FlooredCurvesLieAboveStationary) {
    RegretOptions base;
    base.horizon = 50.0;
    base.grid = 500;
    const auto ref = regret_simulate(base);
    for (double tau : {0.5, 0.1}) {
        RegretOptions o = base;
        o.nu = std::numbers::pi / tau;
        o.floor_at_zero = true;
        const auto tr = regret_simulate(o);
        ASSERT_FALSE(tr.diverged);
        for (std::size_t i = 0; i < tr.G.size(); ++i) {
            EXPECT_GE(tr.g[i], 0.0);
            EXPECT_GE(tr.G[i], ref.G[i] - 1e-9);
        }
    }
}

TEST(Regret, RejectsBadInput) {
    RegretOptions o;
    o.eta = 0.0;
    EXPECT_THROW(regret_simulate(o), std::invalid_argument);
    o = {};
    o.horizon = -1.0;
    EXPECT_THROW(regret_simulate(o), std::invalid_argument);
    o = {};
    o.grid = 0;
    EXPECT_THROW(regret_simulate(o), std::invalid_argument);
}
