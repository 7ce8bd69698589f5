#include <gtest/gtest.h>

#include <numbers>

#include "test_support.hpp"

using namespace cablesail;

TEST(QuinticBlend, EndpointsMidpointAndDerivatives) {
    EXPECT_EQ(quintic_blend(0.0).value, 0.0);
    EXPECT_EQ(quintic_blend(1.0).value, 1.0);
    EXPECT_DOUBLE_EQ(quintic_blend(0.5).value, 0.5);
    EXPECT_EQ(quintic_blend(-0.3).value, 0.0);
    EXPECT_EQ(quintic_blend(1.7).value, 1.0);
    // Derivatives against central differences in the interior.
    for (double s : {0.1, 0.37, 0.8}) {
        const double h = 1e-6;
        EXPECT_NEAR(quintic_blend(s).rate, (quintic_blend(s + h).value - quintic_blend(s - h).value) / (2 * h), 1e-8);
        EXPECT_NEAR(quintic_blend(s).accel, (quintic_blend(s + h).rate - quintic_blend(s - h).rate) / (2 * h), 1e-7);
    }
}

TEST(QuinticBlend, Monotone) {
    double prev = -1.0;
    for (int i = 0; i <= 1000; ++i) {
        const double v = quintic_blend(i / 1000.0).value;
        EXPECT_GE(v, prev);
        prev = v;
    }
}

TEST(Feedforward, QuinticProfile) {
    const auto p = FeedforwardProfile::quintic(0.15, 0.327, 40.0);
    EXPECT_DOUBLE_EQ(feedforward_tension(p, 0.0), 0.15);
    EXPECT_DOUBLE_EQ(feedforward_tension(p, 40.0), 0.327);
    EXPECT_DOUBLE_EQ(feedforward_tension(p, 20.0), 0.5 * (0.15 + 0.327));
    EXPECT_DOUBLE_EQ(feedforward_tension(p, 500.0), 0.327);
    const auto a = feedforward_sample(p, 0.0);
    const auto b = feedforward_sample(p, 40.0);
    EXPECT_EQ(a.rate, 0.0);
    EXPECT_EQ(a.accel, 0.0);
    EXPECT_EQ(b.rate, 0.0);
    EXPECT_EQ(b.accel, 0.0);
}

TEST(Feedforward, ConstantIgnoresTime) {
    const auto p = FeedforwardProfile::constant(1.0);
    for (double t : {0.0, 3.0, 1e4}) EXPECT_EQ(feedforward_tension(p, t), 1.0);
}

TEST(Feedforward, Validation) {
    EXPECT_THROW(FeedforwardProfile::quintic(0.0, 1.0, 0.0).validate(), InvalidArgument);
    EXPECT_THROW(FeedforwardProfile::constant(NAN).validate(), InvalidArgument);
    EXPECT_THROW(feedforward_tension(FeedforwardProfile::constant(1.0), -1.0), InvalidArgument);
}

TEST(Reference, QuinticDeflection) {
    const auto r = ReferenceTrajectory::quintic(1.0, 0.4, 100.0);
    const auto a = desired_deflection(r, 0.0);
    const auto b = desired_deflection(r, 100.0);
    EXPECT_EQ(a.w, 1.0);
    EXPECT_EQ(a.w_dot, 0.0);
    EXPECT_EQ(b.w, 0.4);
    EXPECT_EQ(b.w_dot, 0.0);
    EXPECT_EQ(desired_deflection(r, 150.0).w, 0.4);
    const double h = 1e-4;
    EXPECT_NEAR(desired_deflection(r, 30.0).w_dot,
                (desired_deflection(r, 30.0 + h).w - desired_deflection(r, 30.0 - h).w) / (2 * h), 1e-9);
}

TEST(Reference, PrintedCubicValues) {
    const auto map = cablesail::testing::printed_cubic();
    EXPECT_NEAR(map(0.327), 5.77, 0.01);
    EXPECT_NEAR(map(0.15), 0.06, 0.005);
}

TEST(Reference, MapComposedChainRule) {
    const auto ff = FeedforwardProfile::quintic(0.15, 0.327, 40.0);
    const auto r = ReferenceTrajectory::composed(cablesail::testing::printed_cubic(), ff);
    EXPECT_NO_THROW(r.validate());
    EXPECT_NEAR(desired_deflection(r, 40.0).w, 5.77, 0.01);
    for (double t : {5.0, 20.0, 33.0}) {
        const double h = 1e-4;
        const double fd = (desired_deflection(r, t + h).w - desired_deflection(r, t - h).w) / (2 * h);
        EXPECT_NEAR(desired_deflection(r, t).w_dot, fd, 1e-7 * std::max(1.0, std::abs(fd)));
    }
}

TEST(Reference, ComposedIsDegreeFifteenInTime) {
    // Cubic of a quintic: fit a degree-15 polynomial through 16 Chebyshev nodes and compare elsewhere.
    const auto ff = FeedforwardProfile::quintic(0.15, 0.327, 1.0);
    const auto r = ReferenceTrajectory::composed(cablesail::testing::printed_cubic(), ff);
    const int n = 16;
    Eigen::MatrixXd v(n, n);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        const double t = 0.5 - 0.5 * std::cos(std::numbers::pi * (i + 0.5) / n);
        for (int j = 0; j < n; ++j) v(i, j) = std::pow(t, j);
        y(i) = desired_deflection(r, t).w;
    }
    const Eigen::VectorXd c = v.colPivHouseholderQr().solve(y);
    for (double t : {0.05, 0.42, 0.91}) {
        double p = 0.0;
        for (int j = n - 1; j >= 0; --j) p = p * t + c(j);
        EXPECT_NEAR(p, desired_deflection(r, t).w, 1e-8);
    }
}

TEST(Reference, MapComposedNeedsMap) {
    ReferenceTrajectory r;
    r.mode = ReferenceMode::map_composed;
    EXPECT_THROW(r.validate(), InvalidArgument);
    EXPECT_THROW(desired_deflection(r, 0.0), InvalidArgument);
}

TEST(ControlInput, ZeroErrorGivesFeedforward) {
    ControllerConfig cfg;
    cfg.feedforward = FeedforwardProfile::quintic(0.2, 1.0, 50.0);
    cfg.reference = ReferenceTrajectory::quintic(1.0, 0.4, 50.0);
    const auto des = desired_deflection(cfg.reference, 12.0);
    const auto s = control_input(cfg, 12.0, des.w, des.w_dot);
    EXPECT_EQ(s.u, feedforward_tension(cfg.feedforward, 12.0));
}

TEST(ControlInput, GainArithmetic) {
    ControllerConfig cfg;
    cfg.gains = {10.0, 25.0};
    cfg.feedforward = FeedforwardProfile::constant(1.0);
    cfg.reference = ReferenceTrajectory::constant(0.5);
    const auto s = control_input(cfg, 0.0, 0.6, 0.0);
    EXPECT_NEAR(s.u, 0.0, 1e-15);
}

TEST(ControlInput, ClampLogsPreClampValue) {
    ControllerConfig cfg;
    cfg.gains = {10.0, 25.0};
    cfg.feedforward = FeedforwardProfile::constant(1.0);
    cfg.reference = ReferenceTrajectory::constant(0.5);
    cfg.clamp_nonnegative = true;
    const auto s = control_input(cfg, 0.0, 0.62, 0.0);
    EXPECT_NEAR(s.u_preclamp, -0.2, 1e-12);
    EXPECT_EQ(s.u, 0.0);
}

TEST(ControllerConfig, Validation) {
    ControllerConfig cfg;
    cfg.gains = {0.0, 25.0};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg.gains = {10.0, -1.0};
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg.gains = {10.0, 25.0};
    cfg.feedforward = FeedforwardProfile::quintic(0.0, 1.0, 50.0);
    cfg.reference = ReferenceTrajectory::quintic(1.0, 0.4, 60.0);
    EXPECT_THROW(cfg.validate(), InvalidArgument);
    cfg.reference.duration = 50.0;
    EXPECT_NO_THROW(cfg.validate());
    cfg.reference = ReferenceTrajectory::composed(Polynomial{{1.0, 0.0}}, FeedforwardProfile::quintic(0.0, 2.0, 50.0));
    EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(FeedbackLaw, PiMapPhaseAndFeedthrough) {
    for (double kp : {0.1, 10.0, 1e3})
        for (double kd : {1e-3, 25.0, 50.0})
            for (double w : numerics::logspace(1e-4, 1e4, 200)) {
                const auto g = feedback_transfer({kp, kd}, w);
                const double ph = std::arg(g) * 180.0 / std::numbers::pi;
                EXPECT_GT(ph, -90.0);
                EXPECT_LE(ph, 90.0);
                EXPECT_GT(g.real(), 0.0);
            }
}
