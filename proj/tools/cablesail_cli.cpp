// cablesail: equilibrium curves, Bode/passivity reports, closed-loop
// simulations and torque-map fits for the cable-actuated sail boom.
//
// Exit status: 0 success, 1 usage/config/numerical error, 2 a requested
// check failed (non-passive response, diverged run).

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "cablesail/cablesail.hpp"
#include "config.hpp"
#include "output.hpp"

namespace cs = cablesail;
namespace cli = cablesail::cli;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCheckFailed = 2;

struct Common {
    std::string config_path;
    std::string out;
    bool gnuplot = false;
};

cli::RunConfig load_config(const Common& c) {
    if (c.config_path.empty()) return cli::RunConfig{};
    std::ifstream in(c.config_path);
    if (!in) throw cli::ConfigError(c.config_path + ": cannot open config file");
    std::stringstream ss;
    ss << in.rdbuf();
    return cli::parse_config(ss.str(), c.config_path);
}

/// Collects written files and the summary document for one command.
class Run {
public:
    Run(std::string command, const cli::RunConfig& cfg, const Common& c)
        : dir_(cli::resolve_output_dir(c.out, cfg.output_dir)), gnuplot_(c.gnuplot || cfg.gnuplot) {
        summary_["command"] = std::move(command);
        summary_["config"] = cfg.source;
        summary_["unit_profile"] = cli::to_string(cfg.unit_profile);
        summary_["modes"] = cfg.modes;
        summary_["spreader_model"] = cfg.spreader_model;
    }

    void write(const std::string& name, const std::string& content) {
        cli::write_atomic(dir_ / name, content);
        summary_["files"].push_back(name);
    }

    bool gnuplot() const { return gnuplot_; }
    json& summary() { return summary_; }

    int finish(int code) {
        summary_["exit_code"] = code;
        cli::write_atomic(dir_ / "summary.json", summary_.dump(2) + "\n");
        std::cout << "wrote " << (dir_ / "summary.json").string() << "\n";
        return code;
    }

private:
    cli::fs::path dir_;
    bool gnuplot_;
    json summary_;
};

json report_json(const cs::PassivityReport& r) {
    return {{"passive", r.passive},
            {"tension_N", r.tension},
            {"modes", r.mode_count},
            {"worst_phase_deg", r.worst_phase_deg},
            {"worst_phase_omega_rad_s", r.worst_phase_omega},
            {"min_real", r.min_real},
            {"min_real_omega_rad_s", r.min_real_omega},
            {"scaling", {{"E", r.scaling.elastic_modulus}, {"rho", r.scaling.linear_density}, {"I", r.scaling.second_moment}}},
            {"nudged_points", r.nudged_points}};
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
    cli::Csv csv(cli::numbered("c", static_cast<int>(m.cols())));
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        std::vector<double> row;
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        csv.row(row);
    }
    return csv.str();
}

void require_si(const cli::RunConfig& cfg, const char* command) {
    if (cfg.unit_profile != cli::UnitProfile::simulation_si)
        throw cli::ConfigError(cfg.source + ": '" + command +
                               "' runs the boom model, which is in SI units; unit_profile must be simulation-SI");
}

// ---------------------------------------------------------------- equilibrium

struct EquilibriumArgs {
    std::optional<double> tension;
    std::optional<int> modes;
    std::optional<double> max_tension;
    std::optional<int> samples;
    bool dump_matrices = false;
};

int cmd_equilibrium(const Common& c, const EquilibriumArgs& a) {
    auto cfg = load_config(c);
    require_si(cfg, "equilibrium");
    if (a.modes) cfg.modes = *a.modes;
    if (a.max_tension) cfg.equilibrium.max_tension = *a.max_tension;
    if (a.samples) cfg.equilibrium.samples = *a.samples;
    const auto model = cfg.build_model();
    const int n = model.mode_count();
    Run run("equilibrium", cfg, c);

    auto header = std::vector<std::string>{"tension_N", "tip_deflection_m"};
    for (auto& q : cli::numbered("q_", n)) header.push_back(q);
    auto row_of = [](const cs::EquilibriumPoint& p) {
        std::vector<double> r{p.tension, p.tip_deflection};
        for (Eigen::Index i = 0; i < p.q.size(); ++i) r.push_back(p.q(i));
        return r;
    };

    if (a.dump_matrices) {
        run.write("mass_matrix.csv", matrix_csv(model.mass_matrix()));
        run.write("stiffness_matrix.csv", matrix_csv(model.stiffness_matrix()));
        run.write("spreader_matrix.csv", matrix_csv(model.spreader_matrix()));
    }

    if (a.tension) {
        const double t = *a.tension;
        if (!(t >= 0.0 && t <= cfg.equilibrium.max_tension))
            throw cs::OutOfRange("tension " + cli::num(t) + " N is outside the verified range [0, " +
                                 cli::num(cfg.equilibrium.max_tension) + "] N (raise equilibrium.max_tension to extend)");
        const auto p = cs::solve_equilibrium(model, t);
        cli::Csv csv(header);
        csv.row(row_of(p));
        run.write("equilibrium_point.csv", csv.str());
        std::cout << "T = " << t << " N: tip deflection " << p.tip_deflection << " m\n";
        run.summary()["equilibrium"] = {{"tension_N", t}, {"tip_deflection_m", p.tip_deflection}};
        return run.finish(kExitOk);
    }

    const auto curve = cs::deflection_curve(model, cfg.equilibrium.max_tension, cfg.equilibrium.samples);
    cli::Csv csv(header);
    for (const auto& p : curve) csv.row(row_of(p));
    run.write("equilibrium.csv", csv.str());
    if (run.gnuplot())
        run.write("equilibrium.gp",
                  "set datafile separator ','\nset xlabel 'tension [N]'\nset ylabel 'tip deflection [m]'\n"
                  "plot 'equilibrium.csv' using 1:2 skip 1 with lines title 'w_eq'\n");
    std::cout << curve.size() << " equilibrium points over [0, " << cfg.equilibrium.max_tension << "] N; w(T_max) = "
              << curve.back().tip_deflection << " m\n";
    run.summary()["equilibrium"] = {{"samples", curve.size()},
                                    {"max_tension_N", cfg.equilibrium.max_tension},
                                    {"max_tip_deflection_m", curve.back().tip_deflection}};
    return run.finish(kExitOk);
}

// ----------------------------------------------------------------------- bode

struct BodeArgs {
    double teq = 0.0;
    std::string sweep;  // "", uncertainty, modes
    std::optional<double> pct;
    std::vector<int> mode_list;
    std::optional<int> samples_per_axis;
};

std::string bode_csv(const cs::FrequencyResponse& fr) {
    cli::Csv csv({"omega_rad_s", "re", "im", "mag_db", "phase_deg"});
    for (std::size_t i = 0; i < fr.size(); ++i)
        csv.row({fr.omega[i], fr.gain[i].real(), fr.gain[i].imag(), fr.magnitude_db[i], fr.phase_deg[i]});
    return csv.str();
}

std::string sweep_csv(const cs::SweepResult& s) {
    cli::Csv csv({"sample", "tension_N", "modes", "E_scale", "rho_scale", "I_scale", "passive", "worst_phase_deg",
                  "worst_phase_omega_rad_s", "min_real", "min_real_omega_rad_s", "nudged_points"});
    for (std::size_t i = 0; i < s.reports.size(); ++i) {
        const auto& r = s.reports[i];
        csv.row({double(i), r.tension, double(r.mode_count), r.scaling.elastic_modulus, r.scaling.linear_density,
                 r.scaling.second_moment, r.passive ? 1.0 : 0.0, r.worst_phase_deg, r.worst_phase_omega, r.min_real,
                 r.min_real_omega, double(r.nudged_points)});
    }
    return csv.str();
}

int cmd_bode(const Common& c, BodeArgs a) {
    auto cfg = load_config(c);
    require_si(cfg, "bode");
    if (a.pct) cfg.bode.perturbation = *a.pct / 100.0;
    if (a.samples_per_axis) cfg.bode.samples_per_axis = *a.samples_per_axis;
    if (!a.mode_list.empty() && a.sweep.empty()) a.sweep = "modes";
    if (a.sweep == "modes" && a.mode_list.empty()) a.mode_list = {3, 4, 5, 6};
    if (!a.mode_list.empty() && a.sweep != "modes")
        throw cli::ConfigError("--modes selects the mode-count sweep and cannot be combined with --sweep " + a.sweep);

    const auto grid = cs::numerics::logspace(cfg.bode.omega_min, cfg.bode.omega_max, cfg.bode.points);
    Run run("bode", cfg, c);
    run.summary()["tension_N"] = a.teq;

    const auto model = cfg.build_model();
    const auto ss = cs::linearize(model, a.teq);
    const auto fr = cs::frequency_response(ss, grid);
    const auto nominal = cs::passivity_check(ss, grid, cfg.bode.real_tolerance);
    run.write("bode.csv", bode_csv(fr));
    if (run.gnuplot())
        run.write("bode.gp",
                  "set datafile separator ','\nset logscale x\nset multiplot layout 2,1\n"
                  "set ylabel 'magnitude [dB]'\nplot 'bode.csv' using 1:4 skip 1 with lines notitle\n"
                  "set ylabel 'phase [deg]'\nset xlabel 'omega [rad/s]'\n"
                  "plot 'bode.csv' using 1:5 skip 1 with lines notitle\nunset multiplot\n");
    run.summary()["nominal"] = report_json(nominal);
    bool all_passive = nominal.passive;
    std::cout << "nominal T_eq = " << a.teq << " N, n = " << cfg.modes << ": "
              << (nominal.passive ? "passive" : "NOT passive") << " (worst phase " << nominal.worst_phase_deg << " deg at "
              << nominal.worst_phase_omega << " rad/s, min Re G " << nominal.min_real << ")\n";

    if (a.sweep == "uncertainty") {
        const auto factory = cs::scaled_model_factory(cfg.boom, cs::BasisSet(cfg.modes), cs::spreader::by_name(cfg.spreader_model));
        const auto sweep = cs::uncertainty_sweep(factory, a.teq, cfg.bode.perturbation, cfg.bode.samples_per_axis, grid,
                                                 cfg.bode.real_tolerance);
        run.write("bode_sweep.csv", sweep_csv(sweep));
        all_passive = all_passive && sweep.all_passive();
        std::size_t n_passive = 0;
        for (const auto& r : sweep.reports) n_passive += r.passive;
        run.summary()["sweep"] = {{"kind", "uncertainty"},
                                  {"perturbation", cfg.bode.perturbation},
                                  {"samples", sweep.reports.size()},
                                  {"passive_samples", n_passive},
                                  {"all_passive", sweep.all_passive()}};
        std::cout << "uncertainty sweep +/-" << 100.0 * cfg.bode.perturbation << "%: " << n_passive << "/"
                  << sweep.reports.size() << " passive\n";
    } else if (a.sweep == "modes") {
        const auto sweep = cs::mode_count_sweep(cfg.boom, a.mode_list, a.teq, cs::spreader::by_name(cfg.spreader_model),
                                                grid, cfg.bode.real_tolerance);
        for (int n : a.mode_list) {
            const auto m = cs::assemble_matrices(cfg.boom, cs::BasisSet(n), cs::spreader::by_name(cfg.spreader_model));
            run.write("bode_n" + std::to_string(n) + ".csv", bode_csv(cs::frequency_response(cs::linearize(m, a.teq), grid)));
        }
        run.write("bode_sweep.csv", sweep_csv(sweep));
        all_passive = all_passive && sweep.all_passive();
        run.summary()["sweep"] = {{"kind", "modes"}, {"mode_counts", a.mode_list}, {"all_passive", sweep.all_passive()}};
        for (const auto& r : sweep.reports)
            std::cout << "n = " << r.mode_count << ": " << (r.passive ? "passive" : "NOT passive") << "\n";
    } else if (!a.sweep.empty()) {
        throw cli::ConfigError("--sweep must be 'uncertainty' or 'modes'");
    }
    run.summary()["all_passive"] = all_passive;
    std::cout << (all_passive ? "all-passive" : "passivity check FAILED") << "\n";
    return run.finish(all_passive ? kExitOk : kExitCheckFailed);
}

// ------------------------------------------------------------------- simulate

struct SimulateArgs {
    std::optional<std::string> scenario;
    std::optional<double> duration;
    std::optional<double> dt;
    std::optional<double> step_scale;
    bool profile_only = false;
};

std::string sim_csv(const cs::SimResult& r) {
    std::vector<std::string> header{"t_s", "w_tip_m", "wdot_tip_m_s", "u_N", "T_des_N", "w_des_m"};
    for (auto& q : cli::numbered("q_", r.mode_count)) header.push_back(q);
    header.push_back("KE_J");
    header.push_back("PE_J");
    cli::Csv csv(header);
    for (const auto& row : r.rows) {
        std::vector<double> v{row.t, row.w_tip, row.w_dot_tip, row.u, row.feedforward, row.w_des};
        for (Eigen::Index i = 0; i < row.q.size(); ++i) v.push_back(row.q(i));
        v.push_back(row.kinetic);
        v.push_back(row.potential);
        csv.row(v);
    }
    return csv.str();
}

std::string control_csv(const std::vector<std::pair<double, cs::ControlSample>>& samples) {
    cli::Csv csv({"t_s", "T_des", "w_des", "wdot_des", "u_preclamp", "u"});
    for (const auto& [t, s] : samples) csv.row({t, s.feedforward, s.w_des, s.w_dot_des, s.u_preclamp, s.u});
    return csv.str();
}

std::string sim_gnuplot(const std::string& name) {
    const std::string f = "sim_" + name + ".csv";
    return "set datafile separator ','\nset multiplot layout 2,1\nset ylabel 'tip deflection [m]'\n"
           "plot '" + f + "' using 1:2 skip 1 with lines title 'w_tip', '" + f +
           "' using 1:6 skip 1 with lines title 'w_des'\n"
           "set ylabel 'tension [N]'\nset xlabel 't [s]'\nplot '" + f +
           "' using 1:4 skip 1 with lines title 'u', '" + f + "' using 1:5 skip 1 with lines title 'T_des'\n"
           "unset multiplot\n";
}

std::vector<cs::SimScenario> select_scenarios(const cli::RunConfig& cfg, const std::string& which,
                                              std::shared_ptr<const cs::StructuralModel> model) {
    const auto& o = cfg.simulation.suite;
    if (which == "custom") {
        if (!cfg.controller) throw cli::ConfigError(cfg.source + ": scenario 'custom' needs a 'controller' section");
        cs::SimScenario sc;
        sc.name = "custom";
        sc.model = model;
        sc.controller = cfg.controller;
        sc.initial_deflection = cfg.simulation.initial_deflection.value_or(o.initial_deflection);
        sc.duration = o.duration;
        sc.dt = o.dt;
        sc.decimation = o.decimation;
        sc.max_initial_tension = o.max_initial_tension;
        return {sc};
    }
    auto suite = cs::scenario_suite(model, o);
    if (which == "all") return suite;
    auto sc = cs::find_scenario(suite, which);
    if (!sc) throw cli::ConfigError("unknown scenario '" + which + "'");
    return {*sc};
}

int cmd_simulate_profile(const cli::RunConfig& cfg, const Common& c) {
    if (!cfg.controller) throw cli::ConfigError(cfg.source + ": --profile-only needs a 'controller' section");
    Run run("simulate", cfg, c);
    const auto& o = cfg.simulation.suite;
    const long long steps = std::llround(o.duration / o.dt);
    std::vector<std::pair<double, cs::ControlSample>> samples;
    for (long long k = 0; k <= steps; k += o.decimation) {
        const double t = static_cast<double>(k) * o.dt;
        const auto des = cs::desired_deflection(cfg.controller->reference, t);
        samples.emplace_back(t, cs::control_input(*cfg.controller, t, des.w, des.w_dot));
    }
    run.write("control_profile.csv", control_csv(samples));
    run.summary()["profile"] = {{"rows", samples.size()},
                                {"T_des_final", samples.back().second.feedforward},
                                {"w_des_final", samples.back().second.w_des}};
    if (cfg.reference_map) {
        const auto& m = *cfg.reference_map;
        run.summary()["profile"]["map_units"] = {m.torque_unit, m.deflection_unit};
    }
    std::cout << "profile: T_des(t_end) = " << samples.back().second.feedforward
              << ", w_des(t_end) = " << samples.back().second.w_des << "\n";
    return run.finish(kExitOk);
}

int cmd_simulate(const Common& c, const SimulateArgs& a) {
    auto cfg = load_config(c);
    auto& o = cfg.simulation.suite;
    if (a.duration) o.duration = *a.duration;
    if (a.dt) o.dt = *a.dt;
    if (a.step_scale) o.step_scale = *a.step_scale;
    if (a.profile_only) return cmd_simulate_profile(cfg, c);
    require_si(cfg, "simulate");

    const std::string which = a.scenario.value_or(cfg.simulation.scenario);
    const auto model = std::make_shared<const cs::StructuralModel>(cfg.build_model());
    const auto scenarios = select_scenarios(cfg, which, model);
    Run run("simulate", cfg, c);
    bool any_diverged = false;
    for (const auto& sc : scenarios) {
        const auto r = cs::run_simulation(sc);
        const double w_target = sc.controller ? sc.controller->reference.final_deflection : 0.0;
        run.write("sim_" + sc.name + ".csv", sim_csv(r));

        std::vector<std::pair<double, cs::ControlSample>> log;
        for (const auto& row : r.rows)
            log.emplace_back(row.t, cs::ControlSample{row.feedforward, row.w_des, row.w_dot_des, row.u_preclamp, row.u});
        run.write("control_" + sc.name + ".csv", control_csv(log));

        const auto& last = r.final_row();
        const double step = std::abs(w_target - sc.initial_deflection);
        std::ostringstream meta;
        meta << "scenario=" << sc.name << "\nstatus=" << cs::to_string(r.status) << "\n";
        if (r.divergence_time) meta << "divergence_time_s=" << cli::num(*r.divergence_time) << "\n";
        meta << "steps=" << r.steps_taken << "\ndt_s=" << cli::num(sc.dt) << "\nduration_s=" << cli::num(sc.duration)
             << "\nmodes=" << r.mode_count << "\ninitial_deflection_m=" << cli::num(sc.initial_deflection)
             << "\ntarget_deflection_m=" << cli::num(w_target) << "\nfinal_deflection_m=" << cli::num(last.w_tip)
             << "\nfinal_error_m=" << cli::num(std::abs(last.w_tip - w_target)) << "\n";
        if (sc.controller)
            meta << "kp=" << cli::num(sc.controller->gains.kp) << "\nkd=" << cli::num(sc.controller->gains.kd)
                 << "\nclamp_nonnegative=" << (sc.controller->clamp_nonnegative ? "true" : "false") << "\n";
        run.write("sim_" + sc.name + ".meta", meta.str());
        if (run.gnuplot()) run.write("sim_" + sc.name + ".gp", sim_gnuplot(sc.name));

        any_diverged = any_diverged || r.status == cs::SimStatus::diverged;
        json s = {{"status", cs::to_string(r.status)},
                  {"final_deflection_m", last.w_tip},
                  {"target_deflection_m", w_target},
                  {"final_error_fraction_of_step", step > 0 ? std::abs(last.w_tip - w_target) / step : 0.0}};
        if (r.divergence_time) s["divergence_time_s"] = *r.divergence_time;
        run.summary()["scenarios"][sc.name] = s;
        std::cout << sc.name << ": " << cs::to_string(r.status) << ", w_tip(" << last.t << " s) = " << last.w_tip
                  << " m, target " << w_target << " m\n";
    }
    return run.finish(any_diverged ? kExitCheckFailed : kExitOk);
}

// ------------------------------------------------------------------------ fit

int cmd_fit(const Common& c, const std::string& data_path, const std::string& degree) {
    auto cfg = load_config(c);
    std::ifstream in(data_path);
    if (!in) throw cli::ConfigError(data_path + ": cannot open data file");
    cs::MeasurementSet data;
    try {
        data = cs::read_measurements(in, data_path);
    } catch (const cs::InvalidArgument& e) {
        throw cli::ConfigError(data_path + ": " + e.what());
    }

    Run run("fit", cfg, c);
    run.summary()["data"] = {{"source", data_path}, {"rows", data.size()}, {"distinct_torques", data.distinct_torques()}};
    cs::TorqueDeflectionMap map;
    if (degree == "auto") {
        const auto sel = cs::select_degree(data);
        map = sel.best();
        run.summary()["rms_residuals"] = sel.rms_residuals;
        for (int d = 1; d <= cs::kMaxMapDegree; ++d)
            std::cout << "degree " << d << ": rms residual " << sel.rms_residuals[static_cast<std::size_t>(d - 1)] << " "
                      << data.deflection_unit << "\n";
        std::cout << "selected degree " << sel.best_degree << "\n";
    } else if (degree == "1" || degree == "2" || degree == "3") {
        map = cs::fit_map(data, std::stoi(degree));
        std::cout << "degree " << degree << ": rms residual " << map.rms_residual << " " << data.deflection_unit << "\n";
    } else {
        throw cli::ConfigError("--degree must be auto, 1, 2 or 3");
    }

    const json fragment = {{"controller",
                            {{"reference",
                              {{"mode", "map"},
                               {"map",
                                {{"coefficients", map.coefficients()},
                                 {"torque_unit", map.torque_unit},
                                 {"deflection_unit", map.deflection_unit},
                                 {"degree", map.degree()},
                                 {"rms_residual", map.rms_residual},
                                 {"standard_errors", map.standard_errors},
                                 {"fit_range", {map.torque_min, map.torque_max}},
                                 {"sample_count", map.sample_count}}}}}}}};
    run.write("map.json", fragment.dump(2) + "\n");
    run.summary()["map"] = fragment["controller"]["reference"]["map"];
    std::cout << "coefficients (descending):";
    for (double v : map.coefficients()) std::cout << " " << v;
    std::cout << "\n";
    return run.finish(kExitOk);
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw cli::ConfigError("--modes expects a comma-separated list of integers, got '" + s + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cable-actuated solar sail boom: equilibrium, passivity, simulation and map fitting"};
    app.require_subcommand(1);
    Common common;
    app.add_option("-c,--config", common.config_path, "YAML/JSON run config");
    app.add_option("-o,--out", common.out, std::string("output directory (overrides $") + cli::kOutputDirEnv + " and the config)");
    app.add_flag("--gnuplot", common.gnuplot, "also write gnuplot scripts next to the CSVs");

    EquilibriumArgs eq;
    auto* eq_cmd = app.add_subcommand("equilibrium", "equilibrium tip deflection versus tension");
    eq_cmd->add_option("--tension", eq.tension, "report a single equilibrium at this tension [N]");
    eq_cmd->add_option("--modes", eq.modes, "number of assumed modes");
    eq_cmd->add_option("--max-tension", eq.max_tension, "upper end of the curve [N]");
    eq_cmd->add_option("--samples", eq.samples, "curve samples");
    eq_cmd->add_flag("--dump-matrices", eq.dump_matrices, "write M, K and Psi* as CSV");

    BodeArgs bode;
    std::string mode_list;
    auto* bode_cmd = app.add_subcommand("bode", "frequency response and passivity of the linearized plant");
    bode_cmd->add_option("--teq", bode.teq, "equilibrium tension [N]");
    bode_cmd->add_option("--sweep", bode.sweep, "uncertainty | modes");
    bode_cmd->add_option("--pct", bode.pct, "uncertainty half-width in percent");
    bode_cmd->add_option("--samples-per-axis", bode.samples_per_axis, "uncertainty samples per parameter axis");
    bode_cmd->add_option("--modes", mode_list, "comma-separated mode counts for the mode sweep");

    SimulateArgs sim;
    auto* sim_cmd = app.add_subcommand("simulate", "closed-loop nonlinear simulation");
    sim_cmd->add_option("--scenario", sim.scenario, "fig7a | fig7c | fig8 | fig8-clamped | all | custom");
    sim_cmd->add_option("--duration", sim.duration, "simulated time [s]");
    sim_cmd->add_option("--dt", sim.dt, "RK4 step [s]");
    sim_cmd->add_option("--step-scale", sim.step_scale, "scale the commanded step of the shipped scenarios");
    sim_cmd->add_flag("--profile-only", sim.profile_only, "write the feedforward/reference profile without the plant");

    std::string data_path;
    std::string degree = "auto";
    auto* fit_cmd = app.add_subcommand("fit", "fit a torque -> tip-deflection map from CSV data");
    fit_cmd->add_option("data", data_path, "CSV with header torque_<unit>,deflection_<unit>")->required();
    fit_cmd->add_option("--degree", degree, "auto | 1 | 2 | 3");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitError;
    }

    try {
        if (*eq_cmd) return cmd_equilibrium(common, eq);
        if (*bode_cmd) {
            if (!mode_list.empty()) bode.mode_list = parse_int_list(mode_list);
            return cmd_bode(common, bode);
        }
        if (*sim_cmd) return cmd_simulate(common, sim);
        if (*fit_cmd) return cmd_fit(common, data_path, degree);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitError;
    } catch (const cs::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
