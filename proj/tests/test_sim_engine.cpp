#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cablesail;

namespace {

std::shared_ptr<const StructuralModel> nominal_model(int n = 3) {
    return std::make_shared<const StructuralModel>(assemble_matrices(BoomParams{}, BasisSet(n)));
}

}  // namespace

TEST(Simulation, ZeroStateStaysZero) {
    SimScenario sc;
    sc.model = nominal_model();
    sc.duration = 5.0;
    const auto r = run_simulation(sc);
    EXPECT_EQ(r.status, SimStatus::completed);
    for (const auto& row : r.rows) {
        EXPECT_EQ(row.q.norm(), 0.0);
        EXPECT_EQ(row.u, 0.0);
    }
    EXPECT_EQ(r.rows.size(), 51u);
    EXPECT_DOUBLE_EQ(r.final_row().t, 5.0);
}

TEST(Simulation, InitialStateFromDeflection) {
    const auto m = nominal_model();
    const auto s = initial_state_from_deflection(*m, 1.0, 10.0);
    EXPECT_NEAR(tip_deflection(*m, s.q), 1.0, 1e-6);
    EXPECT_EQ(s.q_dot.norm(), 0.0);
    EXPECT_EQ(initial_state_from_deflection(*m, 0.0).q.norm(), 0.0);
    EXPECT_THROW(initial_state_from_deflection(*m, 1.0, 2.0), OutOfRange);
}

TEST(Simulation, UnforcedRunTracksModalSolution) {
    const auto m = nominal_model();
    SimScenario sc;
    sc.model = m;
    sc.initial_deflection = 1.0;
    sc.duration = 20.0;
    const auto r = run_simulation(sc);
    const auto s0 = initial_state_from_deflection(*m, 1.0, sc.max_initial_tension);
    const auto exact = cablesail::testing::modal_solution(*m, s0, 20.0);
    EXPECT_LT((r.final_row().q - exact.q).norm(), 1e-8 * exact.q.norm());
}

TEST(Simulation, UnforcedEnergyDriftShrinksWithStep) {
    const auto m = nominal_model();
    auto drift = [&](double dt) {
        SimScenario sc;
        sc.model = m;
        sc.initial_deflection = 1.0;
        sc.duration = 200.0;
        sc.dt = dt;
        sc.decimation = 1000;
        const auto r = run_simulation(sc);
        const double e0 = r.rows.front().kinetic + r.rows.front().potential;
        double worst = 0.0;
        for (const auto& row : r.rows) worst = std::max(worst, std::abs(row.kinetic + row.potential - e0) / e0);
        return worst;
    };
    const double d1 = drift(1e-2);
    const double d2 = drift(5e-3);
    EXPECT_LT(d2, d1 / 8.0);  // O(dt^5) dissipation per unit time, minus roundoff headroom
    EXPECT_LT(drift(1e-3), 1e-6);
}

TEST(Simulation, DeterministicRepeatedRuns) {
    const auto suite = scenario_suite(nominal_model(), [] {
        SuiteOptions o;
        o.duration = 10.0;
        return o;
    }());
    const auto a = run_simulation(suite[0]);
    const auto b = run_simulation(suite[0]);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].q, b.rows[i].q);
        EXPECT_EQ(a.rows[i].u, b.rows[i].u);
    }
}

TEST(Simulation, DivergenceIsAStatus) {
    // Constant tension far past buckling: the effective stiffness is indefinite and the state grows without bound.
    SimScenario sc;
    sc.model = nominal_model();
    ControllerConfig cfg;
    cfg.gains = {1e-9, 1e-9};
    cfg.feedforward = FeedforwardProfile::constant(1e4);
    cfg.reference = ReferenceTrajectory::constant(0.0);
    sc.controller = cfg;
    sc.initial_state = State{Eigen::Vector3d(1e-3, 0.0, 0.0), Eigen::Vector3d::Zero()};
    sc.duration = 500.0;
    sc.dt = 1e-2;
    const auto r = run_simulation(sc);
    EXPECT_EQ(r.status, SimStatus::diverged);
    ASSERT_TRUE(r.divergence_time.has_value());
    EXPECT_DOUBLE_EQ(r.final_row().t, *r.divergence_time);
    EXPECT_LT(*r.divergence_time, 500.0);
}

TEST(Simulation, ScenarioValidation) {
    SimScenario sc;
    EXPECT_THROW(run_simulation(sc), InvalidArgument);
    sc.model = nominal_model();
    sc.dt = 0.0;
    EXPECT_THROW(run_simulation(sc), InvalidArgument);
    sc.dt = 1e-3;
    sc.decimation = 0;
    EXPECT_THROW(run_simulation(sc), InvalidArgument);
}

TEST(ScenarioSuite, FourNamedScenarios) {
    const auto suite = scenario_suite(nominal_model());
    ASSERT_EQ(suite.size(), 4u);
    EXPECT_EQ(suite[0].name, "fig7a");
    EXPECT_EQ(suite[0].controller->gains.kd, 25.0);
    EXPECT_EQ(suite[1].controller->gains.kd, 50.0);
    EXPECT_EQ(suite[2].controller->feedforward.mode, FeedforwardMode::quintic);
    EXPECT_TRUE(suite[3].controller->clamp_nonnegative);
    for (const auto& s : suite) {
        EXPECT_EQ(s.controller->gains.kp, 10.0);
        EXPECT_DOUBLE_EQ(s.initial_deflection, 1.0);
        EXPECT_EQ(s.duration, 200.0);
    }
    EXPECT_TRUE(find_scenario(suite, "fig8").has_value());
    EXPECT_FALSE(find_scenario(suite, "fig9").has_value());
}

TEST(ScenarioSuite, ClampedRunNeverCommandsCompression) {
    SuiteOptions o;
    o.duration = 150.0;
    const auto sc = *find_scenario(scenario_suite(nominal_model(), o), "fig8-clamped");
    const auto r = run_simulation(sc);
    for (const auto& row : r.rows) EXPECT_GE(row.u, 0.0);
}

TEST(ScenarioSuite, StepScaleMovesTheStart) {
    SuiteOptions o;
    o.step_scale = 2.0;
    const auto m = nominal_model();
    const auto sc = make_step_scenario(m, "x", ScenarioKind::constant_feedforward, 50.0, false, o);
    const double wf = solve_equilibrium(*m, 1.0).tip_deflection;
    EXPECT_NEAR(sc.initial_deflection - wf, 2.0 * (1.0 - wf), 1e-12);
}
