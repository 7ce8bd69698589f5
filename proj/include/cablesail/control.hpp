#pragma once

// PD feedback on tip deflection and rate plus a feedforward tension:
//   u = T_des(t) - kp (w - w_des(t)) - kd (w_dot - w_dot_des(t)),
// optionally clamped to non-negative tension. Time-varying profiles use the
// 10-15-6 quintic blend and hold their final value past t_f.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <utility>

#include "cablesail/error.hpp"
#include "cablesail/polynomial.hpp"

namespace cablesail {

struct PDGains {
    double kp = 10.0;  // N/m (N.m/mm in prototype units)
    double kd = 25.0;  // N.s/m

    void validate() const {
        if (!(kp > 0.0) || !std::isfinite(kp)) throw InvalidArgument("proportional gain kp must be > 0");
        if (!(kd > 0.0) || !std::isfinite(kd)) throw InvalidArgument("derivative gain kd must be > 0");
    }
};

/// Value and first two derivatives of a scalar profile.
struct ProfileSample {
    double value = 0.0;
    double rate = 0.0;
    double accel = 0.0;
};

/// 10 s^3 - 15 s^4 + 6 s^5 and its s-derivatives, clamped to s in [0, 1].
inline ProfileSample quintic_blend(double s) {
    if (s <= 0.0) return {0.0, 0.0, 0.0};
    if (s >= 1.0) return {1.0, 0.0, 0.0};
    const double s2 = s * s;
    const double s3 = s2 * s;
    return {s3 * (10.0 + s * (-15.0 + 6.0 * s)),
            30.0 * s2 * (1.0 - s) * (1.0 - s),
            60.0 * s * (1.0 - s) * (1.0 - 2.0 * s)};
}

enum class FeedforwardMode { constant, quintic };

struct FeedforwardProfile {
    FeedforwardMode mode = FeedforwardMode::constant;
    double initial_tension = 0.0;  // T_0
    double final_tension = 1.0;    // T_f
    double duration = 100.0;       // t_f [s]

    static FeedforwardProfile constant(double tension) { return {FeedforwardMode::constant, tension, tension, 0.0}; }
    static FeedforwardProfile quintic(double t0, double tf_tension, double duration) {
        return {FeedforwardMode::quintic, t0, tf_tension, duration};
    }

    void validate() const {
        if (!std::isfinite(initial_tension) || !std::isfinite(final_tension))
            throw InvalidArgument("feedforward tensions must be finite");
        if (mode == FeedforwardMode::quintic && !(duration > 0.0 && std::isfinite(duration)))
            throw InvalidArgument("quintic feedforward needs a maneuver duration t_f > 0");
    }
};

inline void require_nonnegative_time(double t) {
    if (!(t >= 0.0)) throw InvalidArgument("time must be >= 0");
}

inline ProfileSample feedforward_sample(const FeedforwardProfile& p, double t) {
    require_nonnegative_time(t);
    if (p.mode == FeedforwardMode::constant) return {p.final_tension, 0.0, 0.0};
    const auto b = quintic_blend(t / p.duration);
    const double span = p.final_tension - p.initial_tension;
    return {p.initial_tension + b.value * span, b.rate * span / p.duration,
            b.accel * span / (p.duration * p.duration)};
}

/// T_des(t).
inline double feedforward_tension(const FeedforwardProfile& p, double t) { return feedforward_sample(p, t).value; }

enum class ReferenceMode { constant, quintic_deflection, map_composed };

struct ReferenceTrajectory {
    ReferenceMode mode = ReferenceMode::constant;
    double initial_deflection = 0.0;  // w_0
    double final_deflection = 0.0;    // w_f
    double duration = 100.0;          // t_f [s]
    std::optional<Polynomial> deflection_map;     // tension/torque -> deflection
    std::optional<FeedforwardProfile> map_input;  // profile fed through the map

    static ReferenceTrajectory constant(double w) { return {ReferenceMode::constant, w, w, 0.0, {}, {}}; }
    static ReferenceTrajectory quintic(double w0, double wf, double duration) {
        return {ReferenceMode::quintic_deflection, w0, wf, duration, {}, {}};
    }
    /// w_des(t) = map(T_des(t)).
    static ReferenceTrajectory composed(Polynomial map, FeedforwardProfile input) {
        const double tf = input.duration;
        ReferenceTrajectory r{ReferenceMode::map_composed, map(input.initial_tension), map(input.final_tension), tf,
                              std::move(map), input};
        return r;
    }

    void validate() const {
        if (!std::isfinite(initial_deflection) || !std::isfinite(final_deflection))
            throw InvalidArgument("reference deflections must be finite");
        if (mode == ReferenceMode::quintic_deflection && !(duration > 0.0 && std::isfinite(duration)))
            throw InvalidArgument("quintic reference needs a maneuver duration t_f > 0");
        if (mode == ReferenceMode::map_composed) {
            if (!deflection_map || deflection_map->coefficients.empty())
                throw InvalidArgument("map-composed reference requires a deflection map");
            if (!map_input) throw InvalidArgument("map-composed reference requires a feedforward profile");
            map_input->validate();
        }
    }
};

struct DesiredDeflection {
    double w = 0.0;      // w_des [m]
    double w_dot = 0.0;  // w_dot_des [m/s]
};

inline DesiredDeflection desired_deflection(const ReferenceTrajectory& ref, double t) {
    require_nonnegative_time(t);
    switch (ref.mode) {
        case ReferenceMode::constant:
            return {ref.final_deflection, 0.0};
        case ReferenceMode::quintic_deflection: {
            const auto b = quintic_blend(t / ref.duration);
            const double span = ref.final_deflection - ref.initial_deflection;
            return {ref.initial_deflection + b.value * span, b.rate * span / ref.duration};
        }
        case ReferenceMode::map_composed: {
            if (!ref.deflection_map || !ref.map_input)
                throw InvalidArgument("map-composed reference requires a deflection map and a feedforward profile");
            const auto tension = feedforward_sample(*ref.map_input, t);
            const auto& map = *ref.deflection_map;
            return {map(tension.value), map.derivative()(tension.value) * tension.rate};
        }
    }
    throw InvalidArgument("unknown reference mode");
}

struct ControllerConfig {
    PDGains gains;
    FeedforwardProfile feedforward;
    ReferenceTrajectory reference;
    bool clamp_nonnegative = false;

    void validate() const {
        gains.validate();
        feedforward.validate();
        reference.validate();
        const bool ff_tv = feedforward.mode == FeedforwardMode::quintic;
        if (ff_tv && reference.mode == ReferenceMode::quintic_deflection &&
            std::abs(feedforward.duration - reference.duration) > 1e-12 * feedforward.duration)
            throw InvalidArgument("feedforward and reference maneuver durations differ");
        if (reference.mode == ReferenceMode::map_composed) {
            const auto& in = *reference.map_input;
            if (in.mode != feedforward.mode || in.initial_tension != feedforward.initial_tension ||
                in.final_tension != feedforward.final_tension ||
                (ff_tv && in.duration != feedforward.duration))
                throw InvalidArgument("map-composed reference must be driven by the controller's feedforward profile");
        }
    }
};

struct ControlSample {
    double feedforward = 0.0;  // T_des
    double w_des = 0.0;
    double w_dot_des = 0.0;
    double u_preclamp = 0.0;
    double u = 0.0;
};

inline ControlSample control_input(const ControllerConfig& cfg, double t, double w_tip, double w_dot_tip) {
    ControlSample s;
    s.feedforward = feedforward_tension(cfg.feedforward, t);
    const auto des = desired_deflection(cfg.reference, t);
    s.w_des = des.w;
    s.w_dot_des = des.w_dot;
    s.u_preclamp = s.feedforward - cfg.gains.kp * (w_tip - des.w) - cfg.gains.kd * (w_dot_tip - des.w_dot);
    s.u = cfg.clamp_nonnegative ? std::max(0.0, s.u_preclamp) : s.u_preclamp;
    return s;
}

/// Feedback law seen from tip-rate error to tension: kd + kp / (j omega).
inline std::complex<double> feedback_transfer(const PDGains& g, double omega) {
    return {g.kd, -g.kp / omega};
}

}  // namespace cablesail
