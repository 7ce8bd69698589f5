#pragma once

// Fixed-step RK4 integration of the closed-loop nonlinear boom, and the
// constant/time-varying feedforward scenarios.

#include <Eigen/Dense>

#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cablesail/boom_model.hpp"
#include "cablesail/control.hpp"
#include "cablesail/equilibrium.hpp"
#include "cablesail/error.hpp"

namespace cablesail {

inline constexpr double kDivergenceFactor = 1e6;

/// Equilibrium shape whose tip sits at `w_init`, at rest.
inline State initial_state_from_deflection(const StructuralModel& model, double w_init,
                                           double max_tension = kDefaultMaxTension) {
    const double t0 = tension_for_deflection(model, w_init, max_tension);
    const int n = model.mode_count();
    if (t0 == 0.0) return State::zero(n);
    return {solve_equilibrium(model, t0).q, Eigen::VectorXd::Zero(n)};
}

struct SimScenario {
    std::string name;
    std::shared_ptr<const StructuralModel> model;
    std::optional<ControllerConfig> controller;  // empty: u = 0
    double initial_deflection = 0.0;             // w_init [m]
    double duration = 200.0;                     // [s]
    double dt = 1e-3;                            // [s]
    int decimation = 100;                        // log every k-th step
    double max_initial_tension = 10.0;           // bracket for the initial equilibrium
    std::optional<State> initial_state;          // overrides initial_deflection

    void validate() const {
        if (!model) throw InvalidArgument("scenario '" + name + "' has no model");
        if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("time step dt must be > 0");
        if (!(duration >= dt)) throw InvalidArgument("duration must be >= dt");
        if (decimation < 1) throw InvalidArgument("decimation must be >= 1");
        if (controller) controller->validate();
    }
};

struct SimRow {
    double t = 0.0;
    Eigen::VectorXd q;
    Eigen::VectorXd q_dot;
    double w_tip = 0.0;
    double w_dot_tip = 0.0;
    double u = 0.0;
    double u_preclamp = 0.0;
    double feedforward = 0.0;
    double w_des = 0.0;
    double w_dot_des = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
};

enum class SimStatus { completed, diverged };

inline const char* to_string(SimStatus s) { return s == SimStatus::completed ? "completed" : "diverged"; }

struct SimResult {
    std::string scenario;
    int mode_count = 0;
    std::vector<SimRow> rows;
    SimStatus status = SimStatus::completed;
    std::optional<double> divergence_time;
    long long steps_taken = 0;

    const SimRow& final_row() const { return rows.back(); }
};

namespace detail {

inline ControlSample evaluate_input(const SimScenario& sc, double t, const Eigen::VectorXd& x) {
    if (!sc.controller) return {};
    const auto& model = *sc.model;
    const Eigen::Index n = model.mode_count();
    return control_input(*sc.controller, t, model.tip_row().dot(x.head(n)), model.tip_row().dot(x.tail(n)));
}

inline SimRow make_row(const SimScenario& sc, double t, const Eigen::VectorXd& x) {
    const auto& model = *sc.model;
    const Eigen::Index n = model.mode_count();
    SimRow r;
    r.t = t;
    r.q = x.head(n);
    r.q_dot = x.tail(n);
    r.w_tip = tip_deflection(model, r.q);
    r.w_dot_tip = tip_rate(model, r.q_dot);
    const auto c = evaluate_input(sc, t, x);
    r.u = c.u;
    r.u_preclamp = c.u_preclamp;
    r.feedforward = c.feedforward;
    r.w_des = c.w_des;
    r.w_dot_des = c.w_dot_des;
    const auto e = total_energy(model, {r.q, r.q_dot});
    r.kinetic = e.kinetic;
    r.potential = e.potential;
    return r;
}

}  // namespace detail

inline SimResult run_simulation(const SimScenario& sc) {
    sc.validate();
    const auto& model = *sc.model;
    const int n = model.mode_count();

    const State s0 = sc.initial_state ? *sc.initial_state
                                      : initial_state_from_deflection(model, sc.initial_deflection, sc.max_initial_tension);
    if (s0.q.size() != n || s0.q_dot.size() != n) throw InvalidArgument("initial state does not match the model");
    Eigen::VectorXd x = s0.stacked();

    // Divergence reference: the larger of the initial state and the commanded equilibrium.
    double ref_norm = x.norm();
    if (sc.controller) {
        const double t_final = sc.controller->feedforward.final_tension;
        try {
            Eigen::VectorXd target = Eigen::VectorXd::Zero(2 * n);
            target.head(n) = solve_equilibrium(model, t_final).q;
            ref_norm = std::max(ref_norm, target.norm());
        } catch (const NearSingularStiffness&) {
        }
    }
    const double limit = kDivergenceFactor * ref_norm;

    auto rhs = [&](double t, const Eigen::VectorXd& state) {
        return dynamics_rhs(model, state, detail::evaluate_input(sc, t, state).u);
    };

    SimResult res;
    res.scenario = sc.name;
    res.mode_count = n;
    const long long steps = std::llround(sc.duration / sc.dt);
    res.rows.reserve(static_cast<std::size_t>(steps / sc.decimation + 2));
    res.rows.push_back(detail::make_row(sc, 0.0, x));

    const double h = sc.dt;
    for (long long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * h;
        const Eigen::VectorXd k1 = rhs(t, x);
        const Eigen::VectorXd k2 = rhs(t + 0.5 * h, x + (0.5 * h) * k1);
        const Eigen::VectorXd k3 = rhs(t + 0.5 * h, x + (0.5 * h) * k2);
        const Eigen::VectorXd k4 = rhs(t + h, x + h * k3);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        res.steps_taken = k + 1;

        const double t_next = static_cast<double>(k + 1) * h;
        if (!x.allFinite() || x.norm() > limit) {
            res.status = SimStatus::diverged;
            res.divergence_time = t_next;
            res.rows.push_back(detail::make_row(sc, t_next, x));
            return res;
        }
        if ((k + 1) % sc.decimation == 0 || k + 1 == steps) res.rows.push_back(detail::make_row(sc, t_next, x));
    }
    return res;
}

/// Knobs shared by the shipped constant/time-varying feedforward scenarios.
struct SuiteOptions {
    double kp = 10.0;
    double target_tension = 1.0;       // T_f [N]
    double initial_deflection = 1.0;   // w_init [m]
    double step_scale = 1.0;           // multiplies the commanded step w_f - w_init
    double maneuver_duration = 100.0;  // t_f for the quintic profiles [s]
    double duration = 200.0;
    double dt = 1e-3;
    int decimation = 100;
    double max_initial_tension = 10.0;
};

enum class ScenarioKind { constant_feedforward, quintic_feedforward };

/// Step from the equilibrium at w_init to the equilibrium at target_tension.
inline SimScenario make_step_scenario(std::shared_ptr<const StructuralModel> model, std::string name,
                                      ScenarioKind kind, double kd, bool clamp, const SuiteOptions& opt = {}) {
    const double w_final = solve_equilibrium(*model, opt.target_tension).tip_deflection;
    const double w_init = w_final - opt.step_scale * (w_final - opt.initial_deflection);
    const double t_init = tension_for_deflection(*model, w_init, opt.max_initial_tension);

    ControllerConfig cfg;
    cfg.gains = {opt.kp, kd};
    cfg.clamp_nonnegative = clamp;
    if (kind == ScenarioKind::constant_feedforward) {
        cfg.feedforward = FeedforwardProfile::constant(opt.target_tension);
        cfg.reference = ReferenceTrajectory::constant(w_final);
    } else {
        cfg.feedforward = FeedforwardProfile::quintic(t_init, opt.target_tension, opt.maneuver_duration);
        cfg.reference = ReferenceTrajectory::quintic(w_init, w_final, opt.maneuver_duration);
    }

    SimScenario sc;
    sc.name = std::move(name);
    sc.model = std::move(model);
    sc.controller = cfg;
    sc.initial_deflection = w_init;
    sc.duration = opt.duration;
    sc.dt = opt.dt;
    sc.decimation = opt.decimation;
    sc.max_initial_tension = opt.max_initial_tension;
    return sc;
}

/// fig7a: constant FF, kd = 25; fig7c: constant FF, kd = 50;
/// fig8: quintic FF and reference, kd = 50; fig8-clamped: fig8 with u >= 0.
inline std::vector<SimScenario> scenario_suite(std::shared_ptr<const StructuralModel> model,
                                               const SuiteOptions& opt = {}) {
    return {make_step_scenario(model, "fig7a", ScenarioKind::constant_feedforward, 25.0, false, opt),
            make_step_scenario(model, "fig7c", ScenarioKind::constant_feedforward, 50.0, false, opt),
            make_step_scenario(model, "fig8", ScenarioKind::quintic_feedforward, 50.0, false, opt),
            make_step_scenario(model, "fig8-clamped", ScenarioKind::quintic_feedforward, 50.0, true, opt)};
}

inline std::optional<SimScenario> find_scenario(const std::vector<SimScenario>& suite, const std::string& name) {
    for (const auto& s : suite)
        if (s.name == name) return s;
    return std::nullopt;
}

}  // namespace cablesail
