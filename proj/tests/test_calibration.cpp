#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "test_support.hpp"

using namespace cablesail;

namespace {

MeasurementSet sample(const Polynomial& p, int count, double lo, double hi, double sigma = 0.0, unsigned seed = 1) {
    MeasurementSet d;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, sigma > 0.0 ? sigma : 1.0);
    for (int i = 0; i < count; ++i) {
        const double t = lo + (hi - lo) * i / (count - 1);
        d.torque.push_back(t);
        d.deflection.push_back(p(t) + (sigma > 0.0 ? noise(rng) * sigma : 0.0));
    }
    return d;
}

double rms_of(const MeasurementSet& d, const Polynomial& p) {
    double s = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) s += std::pow(d.deflection[i] - p(d.torque[i]), 2);
    return std::sqrt(s / static_cast<double>(d.size()));
}

}  // namespace

TEST(ReadMeasurements, ParsesHeaderUnitsAndRows) {
    std::istringstream in("torque_Nm,deflection_mm\n# comment\n0.15, 0.06\n\n0.2,1.5\n");
    const auto d = read_measurements(in, "bench");
    EXPECT_EQ(d.torque_unit, "Nm");
    EXPECT_EQ(d.deflection_unit, "mm");
    EXPECT_EQ(d.source, "bench");
    ASSERT_EQ(d.size(), 2u);
    EXPECT_DOUBLE_EQ(d.deflection[1], 1.5);
}

TEST(ReadMeasurements, SchemaErrorsNameTheLine) {
    auto message = [](const std::string& text) {
        std::istringstream in(text);
        try {
            read_measurements(in);
        } catch (const InvalidArgument& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    EXPECT_NE(message("torque,deflection_mm\n").find("line 1"), std::string::npos);
    EXPECT_NE(message("torque_Nm,deflection_mm\n0.1,2\n0.2,abc\n").find("line 3"), std::string::npos);
    EXPECT_NE(message("torque_Nm,deflection_mm\n0.1,2,3\n").find("line 2"), std::string::npos);
    EXPECT_NE(message("torque_Nm,deflection_mm\n0.1,inf\n").find("line 2"), std::string::npos);
    EXPECT_NE(message("").find("missing CSV header"), std::string::npos);
}

TEST(FitMap, ExactLine) {
    const auto m = fit_map(sample(Polynomial{{2.0, 1.0}}, 7, 0.0, 3.0), 1);
    ASSERT_EQ(m.degree(), 1);
    EXPECT_NEAR(m.coefficients()[0], 2.0, 1e-12);
    EXPECT_NEAR(m.coefficients()[1], 1.0, 1e-12);
    EXPECT_LT(m.rms_residual, 1e-12);
    EXPECT_DOUBLE_EQ(m.torque_min, 0.0);
    EXPECT_DOUBLE_EQ(m.torque_max, 3.0);
}

TEST(FitMap, NoiseFreeCubicRecovery) {
    const auto truth = cablesail::testing::printed_cubic();
    const auto m = fit_map(sample(truth, 20, 0.15, 0.4), 3);
    for (std::size_t i = 0; i < 4; ++i)
        EXPECT_NEAR(m.coefficients()[i], truth.coefficients[i], 1e-9 * std::abs(truth.coefficients[i]));
    EXPECT_NEAR(m.evaluate(0.327).value, 5.77, 0.01);
}

TEST(FitMap, ExtrapolationIsFlagged) {
    const auto m = fit_map(sample(cablesail::testing::printed_cubic(), 20, 0.15, 0.4), 3);
    EXPECT_FALSE(m.evaluate(0.3).extrapolated);
    EXPECT_TRUE(m.evaluate(0.5).extrapolated);
    EXPECT_TRUE(m.evaluate(0.1).extrapolated);
}

TEST(FitMap, RankDeficiency) {
    MeasurementSet d;
    d.torque = {0.1, 0.1, 0.2, 0.2};
    d.deflection = {1.0, 1.1, 2.0, 2.1};
    EXPECT_THROW(fit_map(d, 3), RankDeficient);
    EXPECT_THROW(fit_map(d, 2), RankDeficient);
    EXPECT_NO_THROW(fit_map(d, 1));
    EXPECT_THROW(fit_map(d, 4), InvalidArgument);
}

TEST(FitMap, LeastSquaresOptimality) {
    const auto d = sample(cablesail::testing::printed_cubic(), 20, 0.15, 0.4, 0.1, 7);
    const auto m = fit_map(d, 3);
    EXPECT_NEAR(rms_of(d, m.polynomial), m.rms_residual, 1e-12);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1e-3, 1e-3);
    for (int k = 0; k < 100; ++k) {
        Polynomial p = m.polynomial;
        for (double& c : p.coefficients) c += u(rng);
        EXPECT_GE(rms_of(d, p), m.rms_residual);
    }
}

TEST(FitMap, StandardErrorsCoverTheTruth) {
    const auto truth = cablesail::testing::printed_cubic();
    int covered = 0;
    for (unsigned seed = 0; seed < 100; ++seed) {
        const auto m = fit_map(sample(truth, 20, 0.15, 0.4, 0.1, seed + 100), 3);
        bool ok = true;
        for (std::size_t i = 0; i < 4; ++i)
            ok = ok && std::abs(m.coefficients()[i] - truth.coefficients[i]) <= 3.0 * m.standard_errors[i];
        covered += ok;
    }
    EXPECT_GE(covered, 95);
}

TEST(SelectDegree, LinearDataPicksLine) {
    const auto sel = select_degree(sample(Polynomial{{2.0, 1.0}}, 10, 0.0, 1.0));
    EXPECT_EQ(sel.best_degree, 1);
}

TEST(SelectDegree, CubicDataPicksCubic) {
    const auto sel = select_degree(sample(cablesail::testing::printed_cubic(), 20, 0.15, 0.4));
    EXPECT_EQ(sel.best_degree, 3);
    EXPECT_EQ(sel.best().degree(), 3);
}

TEST(SelectDegree, NoisyCubicPicksCubic) {
    const auto sel = select_degree(sample(cablesail::testing::printed_cubic(), 20, 0.15, 0.4, 0.1, 3));
    EXPECT_EQ(sel.best_degree, 3);
}

TEST(SelectDegree, ResidualsNonIncreasing) {
    for (unsigned seed = 0; seed < 10; ++seed) {
        const auto sel = select_degree(sample(cablesail::testing::printed_cubic(), 15, 0.15, 0.4, 0.2, seed));
        EXPECT_GE(sel.rms_residuals[0], sel.rms_residuals[1]);
        EXPECT_GE(sel.rms_residuals[1], sel.rms_residuals[2]);
    }
}

TEST(SelectDegree, NeedsFourTorques) {
    EXPECT_THROW(select_degree(sample(Polynomial{{1.0, 0.0}}, 3, 0.0, 1.0)), RankDeficient);
}

TEST(RoundTrip, FittedMapDrivesTheComposedReference) {
    const auto truth = cablesail::testing::printed_cubic();
    const auto m = fit_map(sample(truth, 20, 0.15, 0.4), 3);
    const auto ff = FeedforwardProfile::quintic(0.15, 0.327, 40.0);
    const auto fitted = ReferenceTrajectory::composed(m.polynomial, ff);
    const auto exact = ReferenceTrajectory::composed(truth, ff);
    for (double t : {0.0, 7.0, 19.5, 40.0, 80.0})
        EXPECT_NEAR(desired_deflection(fitted, t).w, desired_deflection(exact, t).w, 1e-9);
}
