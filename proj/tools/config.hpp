#pragma once

// Run configuration for the command-line tool. Configs are YAML (JSON is
// accepted as a subset); every key is checked against the schema and errors
// carry file:line:column.

#include <yaml-cpp/yaml.h>

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cablesail/cablesail.hpp"

namespace cablesail::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class UnitProfile { simulation_si, prototype_units };

inline const char* to_string(UnitProfile p) { return p == UnitProfile::simulation_si ? "simulation-SI" : "prototype-units"; }

/// Expected (torque, deflection) unit labels for maps under each profile.
inline std::pair<std::string, std::string> map_units(UnitProfile p) {
    return p == UnitProfile::simulation_si ? std::pair<std::string, std::string>{"N", "m"}
                                           : std::pair<std::string, std::string>{"Nm", "mm"};
}

struct EquilibriumOptions {
    double max_tension = kDefaultMaxTension;
    int samples = 200;
};

struct BodeOptions {
    double omega_min = 1e-3;
    double omega_max = 1e3;
    int points = 2000;
    double real_tolerance = kDefaultRealTolerance;
    double perturbation = 0.2;
    int samples_per_axis = 5;
};

struct MapSpec {
    std::vector<double> coefficients;  // descending degree
    std::string torque_unit;
    std::string deflection_unit;
};

struct SimulationOptions {
    std::string scenario = "fig7a";  // fig7a | fig7c | fig8 | fig8-clamped | all | custom
    SuiteOptions suite;
    std::optional<double> initial_deflection;  // custom scenarios
};

struct RunConfig {
    std::string source = "<defaults>";
    UnitProfile unit_profile = UnitProfile::simulation_si;
    BoomParams boom;
    int modes = 3;
    std::string spreader_model = "cable_path";
    EquilibriumOptions equilibrium;
    BodeOptions bode;
    SimulationOptions simulation;
    std::optional<ControllerConfig> controller;  // required by custom scenarios
    std::optional<MapSpec> reference_map;
    std::optional<std::filesystem::path> output_dir;
    bool gnuplot = false;

    StructuralModel build_model() const { return assemble_matrices(boom, BasisSet(modes), spreader::by_name(spreader_model)); }
};

namespace detail {

inline std::string where(const std::string& file, const YAML::Mark& m) {
    if (m.is_null()) return file;
    return file + ":" + std::to_string(m.line + 1) + ":" + std::to_string(m.column + 1);
}

/// Mapping node with schema tracking: reading a key marks it known, and
/// finish() rejects whatever was never asked for.
class Section {
public:
    Section(YAML::Node node, std::string path, std::string file)
        : node_(std::move(node)), path_(std::move(path)), file_(std::move(file)) {
        if (node_ && !node_.IsNull() && !node_.IsMap())
            throw ConfigError(where(file_, node_.Mark()) + ": '" + path_ + "' must be a mapping");
    }

    bool has(const std::string& key) {
        known_.insert(key);
        return node_ && node_.IsMap() && at(key) && !at(key).IsNull();
    }

    template <class T>
    std::optional<T> get(const std::string& key) {
        if (!has(key)) return std::nullopt;
        const YAML::Node v = at(key);
        if (!v.IsScalar()) throw ConfigError(where(file_, v.Mark()) + ": '" + qualified(key) + "' must be a scalar");
        try {
            return v.as<T>();
        } catch (const YAML::BadConversion&) {
            throw ConfigError(where(file_, v.Mark()) + ": '" + qualified(key) + "' has the wrong type (value '" +
                              v.Scalar() + "')");
        }
    }

    template <class T>
    void read(const std::string& key, T& out) {
        if (auto v = get<T>(key)) out = *v;
    }

    std::vector<double> numbers(const std::string& key) {
        if (!has(key)) return {};
        const YAML::Node v = at(key);
        if (!v.IsSequence()) throw ConfigError(where(file_, v.Mark()) + ": '" + qualified(key) + "' must be a list");
        std::vector<double> out;
        for (const auto& e : v) {
            try {
                out.push_back(e.as<double>());
            } catch (const YAML::BadConversion&) {
                throw ConfigError(where(file_, e.Mark()) + ": '" + qualified(key) + "' entries must be numbers");
            }
        }
        return out;
    }

    Section child(const std::string& key) {
        known_.insert(key);
        return Section(node_ && node_.IsMap() ? at(key) : YAML::Node(), qualified(key), file_);
    }

    std::string mark(const std::string& key) const {
        if (node_ && node_.IsMap() && at(key)) return where(file_, at(key).Mark());
        return where(file_, node_.Mark());
    }

    void finish() const {
        if (!node_ || !node_.IsMap()) return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!known_.count(key))
                throw ConfigError(where(file_, kv.first.Mark()) + ": unknown key '" + qualified(key) + "'");
        }
    }

private:
    YAML::Node at(const std::string& key) const {
        const YAML::Node& n = node_;
        return n[key];
    }

    std::string qualified(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    YAML::Node node_;
    std::string path_;
    std::string file_;
    std::set<std::string> known_;
};

inline FeedforwardProfile read_feedforward(Section s) {
    FeedforwardProfile p;
    const std::string mode = s.get<std::string>("mode").value_or("constant");
    const double final_t = s.get<double>("final").value_or(1.0);
    const double initial_t = s.get<double>("initial").value_or(final_t);
    const double duration = s.get<double>("duration").value_or(100.0);
    if (mode == "constant") p = FeedforwardProfile::constant(final_t);
    else if (mode == "quintic") p = FeedforwardProfile::quintic(initial_t, final_t, duration);
    else throw ConfigError(s.mark("mode") + ": feedforward mode must be 'constant' or 'quintic', got '" + mode + "'");
    s.finish();
    return p;
}

}  // namespace detail

/// Parses a config document. `file` labels error messages.
inline RunConfig parse_config(const std::string& text, const std::string& file) {
    YAML::Node root;
    try {
        root = YAML::Load(text);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(detail::where(file, e.mark) + ": " + e.msg);
    }
    RunConfig cfg;
    cfg.source = file;
    detail::Section top(root, "", file);

    if (auto p = top.get<std::string>("unit_profile")) {
        if (*p == "simulation-SI") cfg.unit_profile = UnitProfile::simulation_si;
        else if (*p == "prototype-units") cfg.unit_profile = UnitProfile::prototype_units;
        else
            throw ConfigError(top.mark("unit_profile") + ": unit_profile must be 'simulation-SI' or 'prototype-units', got '" +
                              *p + "'");
    }
    if (auto out = top.get<std::string>("output_dir")) cfg.output_dir = *out;

    {
        auto b = top.child("boom");
        b.read("length", cfg.boom.length);
        b.read("linear_density", cfg.boom.linear_density);
        b.read("elastic_modulus", cfg.boom.elastic_modulus);
        b.read("second_moment", cfg.boom.second_moment);
        b.read("cable_offset", cfg.boom.cable_offset);
        b.read("spreader_count", cfg.boom.spreader_count);
        b.read("node_spacing", cfg.boom.node_spacing);
        b.finish();
        try {
            cfg.boom.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(top.mark("boom") + ": " + e.what());
        }
    }
    {
        auto m = top.child("model");
        m.read("modes", cfg.modes);
        m.read("spreader_model", cfg.spreader_model);
        m.finish();
        if (cfg.modes < 1 || cfg.modes > 12) throw ConfigError(m.mark("modes") + ": model.modes must be in 1..12");
        try {
            spreader::by_name(cfg.spreader_model);
        } catch (const InvalidArgument& e) {
            throw ConfigError(m.mark("spreader_model") + ": " + e.what());
        }
    }
    {
        auto e = top.child("equilibrium");
        e.read("max_tension", cfg.equilibrium.max_tension);
        e.read("samples", cfg.equilibrium.samples);
        e.finish();
        if (!(cfg.equilibrium.max_tension > 0.0)) throw ConfigError(e.mark("max_tension") + ": max_tension must be > 0");
        if (cfg.equilibrium.samples < 2) throw ConfigError(e.mark("samples") + ": samples must be >= 2");
    }
    {
        auto b = top.child("bode");
        b.read("omega_min", cfg.bode.omega_min);
        b.read("omega_max", cfg.bode.omega_max);
        b.read("points", cfg.bode.points);
        b.read("real_tolerance", cfg.bode.real_tolerance);
        b.read("perturbation", cfg.bode.perturbation);
        b.read("samples_per_axis", cfg.bode.samples_per_axis);
        b.finish();
        if (!(cfg.bode.omega_min > 0.0 && cfg.bode.omega_max > cfg.bode.omega_min))
            throw ConfigError(b.mark("omega_min") + ": need 0 < omega_min < omega_max");
        if (cfg.bode.points < 2) throw ConfigError(b.mark("points") + ": points must be >= 2");
    }
    {
        auto s = top.child("simulation");
        s.read("scenario", cfg.simulation.scenario);
        auto& o = cfg.simulation.suite;
        if (auto w = s.get<double>("initial_deflection")) {
            o.initial_deflection = *w;
            cfg.simulation.initial_deflection = *w;
        }
        s.read("duration", o.duration);
        s.read("dt", o.dt);
        s.read("decimation", o.decimation);
        s.read("max_initial_tension", o.max_initial_tension);
        s.read("step_scale", o.step_scale);
        s.read("target_tension", o.target_tension);
        s.read("maneuver_duration", o.maneuver_duration);
        s.read("kp", o.kp);
        s.finish();
        static const std::set<std::string> names{"fig7a", "fig7c", "fig8", "fig8-clamped", "all", "custom"};
        if (!names.count(cfg.simulation.scenario))
            throw ConfigError(s.mark("scenario") + ": scenario must be one of fig7a, fig7c, fig8, fig8-clamped, all, custom");
    }
    if (top.has("controller")) {
        auto c = top.child("controller");
        ControllerConfig ctl;
        c.read("kp", ctl.gains.kp);
        c.read("kd", ctl.gains.kd);
        c.read("clamp_nonnegative", ctl.clamp_nonnegative);
        ctl.feedforward = detail::read_feedforward(c.child("feedforward"));

        auto r = c.child("reference");
        const std::string mode = r.get<std::string>("mode").value_or("constant");
        const double wf = r.get<double>("final").value_or(0.0);
        const double w0 = r.get<double>("initial").value_or(wf);
        const double dur = r.get<double>("duration").value_or(ctl.feedforward.duration);
        if (mode == "constant") {
            ctl.reference = ReferenceTrajectory::constant(wf);
        } else if (mode == "quintic") {
            ctl.reference = ReferenceTrajectory::quintic(w0, wf, dur);
        } else if (mode == "map") {
            auto m = r.child("map");
            MapSpec spec;
            spec.coefficients = m.numbers("coefficients");
            spec.torque_unit = m.get<std::string>("torque_unit").value_or(map_units(cfg.unit_profile).first);
            spec.deflection_unit = m.get<std::string>("deflection_unit").value_or(map_units(cfg.unit_profile).second);
            // Fit metadata emitted by `fit` is accepted and ignored.
            for (const char* k : {"degree", "rms_residual", "fit_range", "standard_errors", "sample_count"}) m.has(k);
            m.finish();
            if (spec.coefficients.empty())
                throw ConfigError(r.mark("map") + ": controller.reference.map.coefficients is required");
            const auto want = map_units(cfg.unit_profile);
            if (spec.torque_unit != want.first || spec.deflection_unit != want.second)
                throw ConfigError(r.mark("map") + ": map units " + spec.torque_unit + " -> " + spec.deflection_unit +
                                  " do not match unit_profile " + to_string(cfg.unit_profile) + " (" + want.first +
                                  " -> " + want.second + ")");
            ctl.reference = ReferenceTrajectory::composed(Polynomial{spec.coefficients}, ctl.feedforward);
            cfg.reference_map = spec;
        } else {
            throw ConfigError(r.mark("mode") + ": reference mode must be 'constant', 'quintic' or 'map', got '" + mode + "'");
        }
        r.finish();
        c.finish();
        try {
            ctl.validate();
        } catch (const InvalidArgument& e) {
            throw ConfigError(top.mark("controller") + ": " + e.what());
        }
        cfg.controller = ctl;
    }
    {
        auto p = top.child("plot");
        p.read("gnuplot", cfg.gnuplot);
        p.finish();
    }
    top.finish();
    return cfg;
}

}  // namespace cablesail::cli
