#include "kirchhoff/constants.hpp"
#include "kirchhoff/params.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace kirchhoff;

TEST(Constants, CriticalExponent) {
    EXPECT_DOUBLE_EQ(critical_exponent(5), 10.0 / 3.0);
    EXPECT_DOUBLE_EQ(critical_exponent(6), 3.0);
    EXPECT_THROW(critical_exponent(2), std::invalid_argument);
}

TEST(Constants, BallVolumeMatchesStdGamma) {
    for (int N = 1; N <= 12; ++N) {
        const double ref = std::pow(M_PI, 0.5 * N) / std::tgamma(0.5 * N + 1.0);
        EXPECT_NEAR(unit_ball_volume(N) / ref, 1.0, 1e-13) << N;
    }
}

TEST(Constants, RejectsLowDimensions) {
    for (int N : {1, 2, 3, 4}) {
        EXPECT_THROW(sobolev_constant(N), std::invalid_argument);
    }
}

TEST(Constants, RatioClosedForm) {
    for (int N = 5; N <= 12; ++N) {
        const auto c = sobolev_constant(N);
        EXPECT_LT(c.C1, c.C2);
        EXPECT_NEAR(c.C1 / c.C2, oracle::c1_over_c2(N), 1e-12 * oracle::c1_over_c2(N)) << N;
    }
}

TEST(Constants, SNClosedForm) {
    const auto c = sobolev_constant(5);
    EXPECT_NEAR(c.S_N, 5.0 * 3.0 / 4.0 * std::pow(8.0 * M_PI * M_PI / 15.0, 0.4), 1e-12);
    EXPECT_NEAR(c.omega_N, 8.0 * M_PI * M_PI / 15.0, 1e-13);
}

TEST(Constants, ScaledConstantsIndependentOfS) {
    for (double S : {1.0, 7.3, 14.8}) {
        const auto cc = critical_constants(7, S);
        EXPECT_NEAR(cc.C1 * std::pow(S, 3.5), scaled_C1(7), 1e-13 * scaled_C1(7));
        EXPECT_NEAR(cc.C2 * std::pow(S, 3.5), scaled_C2(7), 1e-13 * scaled_C2(7));
    }
    EXPECT_THROW(critical_constants(5, 0.0), std::invalid_argument);
}

TEST(Constants, TalentiKnownValues) {
    // N = 3 sharp constant 3 (pi/2)^{4/3}.
    EXPECT_NEAR(talenti_constant(3), 3.0 * std::pow(M_PI / 2.0, 4.0 / 3.0), 1e-12);
    EXPECT_NEAR(talenti_constant(5), 14.81191172000593, 1e-10);
}

TEST(Params, Validation) {
    ProblemParams p;
    EXPECT_NO_THROW(p.validate());
    EXPECT_THROW(p.with_b(-1.0).validate(), std::invalid_argument);
    EXPECT_THROW(p.with_lambda(-0.5).validate(), std::invalid_argument);
    ProblemParams bad = p;
    bad.p = 4.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.a = 0.0;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
    bad = p;
    bad.N = 4;
    EXPECT_THROW(bad.validate(), std::invalid_argument);
}

TEST(Params, HyperbolaValue) {
    ProblemParams p;
    p.N = 7;
    p.a = 4.0;
    p.b = 0.25;
    EXPECT_NEAR(p.hyperbola_value(), std::pow(4.0, 1.5) * 0.25, 1e-15);
}
