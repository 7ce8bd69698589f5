#pragma once

// Frequency response of the linearized plant and its SISO passivity test:
// phase within [-90, +90] deg on the grid, cross-checked against Re G >= -eps.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "cablesail/boom_model.hpp"
#include "cablesail/equilibrium.hpp"
#include "cablesail/error.hpp"
#include "cablesail/linearization.hpp"
#include "cablesail/numerics.hpp"

namespace cablesail {

inline constexpr double kNudgeCondition = 1e12;
inline constexpr double kPoleCondition = 1e14;
inline constexpr double kNudgeFraction = 1e-6;
inline constexpr double kDefaultRealTolerance = 1e-9;

/// 2000 log-spaced points over [1e-3, 1e3] rad/s.
inline std::vector<double> default_frequency_grid() { return numerics::logspace(1e-3, 1e3, 2000); }

struct FrequencyResponse {
    std::vector<double> omega;  // rad/s, after any pole nudges
    std::vector<std::complex<double>> gain;
    std::vector<double> magnitude_db;
    std::vector<double> phase_deg;  // unwrapped
    std::vector<std::size_t> nudged;  // indices moved off a pole

    std::size_t size() const { return omega.size(); }
};

namespace detail {

struct BalancedRealization {
    Eigen::MatrixXcd A;
    Eigen::VectorXcd B;
    Eigen::RowVectorXcd C;
    std::complex<double> D;
};

inline BalancedRealization balance(const StateSpaceModel& ss) {
    const Eigen::VectorXd t = numerics::balancing_scale(ss.A);
    BalancedRealization r;
    r.A = (t.cwiseInverse().asDiagonal() * ss.A * t.asDiagonal()).cast<std::complex<double>>();
    r.B = t.cwiseInverse().cwiseProduct(ss.B).cast<std::complex<double>>();
    r.C = ss.C.cwiseProduct(t.transpose()).cast<std::complex<double>>();
    r.D = ss.D;
    return r;
}

struct PointSolve {
    std::complex<double> gain;
    double condition;
};

inline PointSolve solve_point(const BalancedRealization& r, double omega) {
    Eigen::MatrixXcd m = -r.A;
    m.diagonal().array() += std::complex<double>(0.0, omega);
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(m);
    const double rc = lu.rcond();
    const double cond = rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
    if (!std::isfinite(cond)) return {std::complex<double>(NAN, NAN), cond};
    const Eigen::VectorXcd x = lu.solve(r.B);
    return {(r.C * x)(0) + r.D, cond};
}

/// Unwraps jumps larger than 180 deg; an exact 180 deg jump (undamped pole or
/// zero) is kept as a jump.
inline std::vector<double> unwrap_degrees(const std::vector<double>& principal) {
    std::vector<double> out(principal.size());
    double offset = 0.0;
    for (std::size_t i = 0; i < principal.size(); ++i) {
        if (i > 0) {
            const double jump = principal[i] + offset - out[i - 1];
            if (jump > 180.0 + 1e-6) offset -= 360.0 * std::ceil((jump - 180.0) / 360.0);
            else if (jump < -180.0 - 1e-6) offset += 360.0 * std::ceil((-jump - 180.0) / 360.0);
        }
        out[i] = principal[i] + offset;
    }
    return out;
}

}  // namespace detail

/// G(j omega) = C (j omega I - A)^-1 B + D at a single frequency (no nudging).
inline std::complex<double> transfer_at(const StateSpaceModel& ss, double omega) {
    const auto r = detail::balance(ss);
    return detail::solve_point(r, omega).gain;
}

inline FrequencyResponse frequency_response(const StateSpaceModel& ss, const std::vector<double>& grid) {
    if (grid.empty()) throw InvalidArgument("frequency grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) throw InvalidArgument("frequency grid must be strictly increasing");

    const auto r = detail::balance(ss);
    FrequencyResponse fr;
    fr.omega.reserve(grid.size());
    fr.gain.reserve(grid.size());
    std::vector<double> principal;
    principal.reserve(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double w = grid[i];
        auto p = detail::solve_point(r, w);
        if (!(p.condition <= kNudgeCondition)) {
            w = w != 0.0 ? w * (1.0 + kNudgeFraction) : kNudgeFraction;
            p = detail::solve_point(r, w);
            fr.nudged.push_back(i);
            if (!(p.condition <= kPoleCondition)) throw PoleOnGrid(grid[i], p.condition);
        }
        fr.omega.push_back(w);
        fr.gain.push_back(p.gain);
        fr.magnitude_db.push_back(20.0 * std::log10(std::abs(p.gain)));
        principal.push_back(std::arg(p.gain) * 180.0 / std::numbers::pi);
    }
    fr.phase_deg = detail::unwrap_degrees(principal);
    return fr;
}

/// Multiplicative perturbation of (E, rho, I) about nominal values.
struct ParameterScaling {
    double elastic_modulus = 1.0;
    double linear_density = 1.0;
    double second_moment = 1.0;

    BoomParams apply(BoomParams p) const {
        p.elastic_modulus *= elastic_modulus;
        p.linear_density *= linear_density;
        p.second_moment *= second_moment;
        return p;
    }
};

struct PassivityReport {
    bool passive = false;
    double worst_phase_deg = 0.0;  // phase with the largest magnitude on the grid
    double worst_phase_omega = 0.0;
    double min_real = 0.0;
    double min_real_omega = 0.0;
    // sweep metadata
    double tension = 0.0;
    int mode_count = 0;
    ParameterScaling scaling;
    std::size_t nudged_points = 0;
};

inline PassivityReport passivity_check(const StateSpaceModel& ss, const std::vector<double>& grid,
                                       double real_tolerance = kDefaultRealTolerance) {
    if (!(real_tolerance >= 0.0)) throw InvalidArgument("real-part tolerance must be >= 0");
    const auto fr = frequency_response(ss, grid);

    PassivityReport rep;
    rep.tension = ss.anchor_tension;
    rep.mode_count = ss.state_dim() / 2;
    rep.nudged_points = fr.nudged.size();
    rep.min_real = std::numeric_limits<double>::infinity();

    bool phase_ok = true;
    bool real_ok = true;
    double worst_abs = -1.0;
    for (std::size_t i = 0; i < fr.size(); ++i) {
        const auto g = fr.gain[i];
        const double mag = std::abs(g);
        // Angular slack equivalent to the real-part tolerance at this magnitude.
        const double slack = mag > 0.0 ? std::asin(std::min(1.0, real_tolerance / mag)) * 180.0 / std::numbers::pi : 90.0;
        const double ph = fr.phase_deg[i];
        if (!std::isfinite(ph) || std::abs(ph) > 90.0 + slack) phase_ok = false;
        if (!(g.real() >= -real_tolerance)) real_ok = false;
        if (std::abs(ph) > worst_abs) {
            worst_abs = std::abs(ph);
            rep.worst_phase_deg = ph;
            rep.worst_phase_omega = fr.omega[i];
        }
        if (g.real() < rep.min_real) {
            rep.min_real = g.real();
            rep.min_real_omega = fr.omega[i];
        }
    }
    if (phase_ok != real_ok)
        throw InconsistentTests(std::string("phase-band test says ") + (phase_ok ? "passive" : "not passive") +
                                " but real-part test says " + (real_ok ? "passive" : "not passive"));
    rep.passive = phase_ok;
    return rep;
}

using ModelFactory = std::function<StructuralModel(const ParameterScaling&)>;

/// Factory that perturbs nominal parameters and reassembles the model.
inline ModelFactory scaled_model_factory(BoomParams nominal, BasisSet basis,
                                         SpreaderMatrixFn spreader_model = spreader::cable_path) {
    return [=](const ParameterScaling& s) { return assemble_matrices(s.apply(nominal), basis, spreader_model); };
}

struct SweepResult {
    std::vector<PassivityReport> reports;

    bool all_passive() const {
        for (const auto& r : reports)
            if (!r.passive) return false;
        return !reports.empty();
    }
};

/// Cartesian sweep of the (E, rho, I) box [1 - p, 1 + p]^3 with
/// `samples_per_axis` points per axis (1 means nominal only).
inline SweepResult uncertainty_sweep(const ModelFactory& factory, double tension, double perturbation,
                                     int samples_per_axis, const std::vector<double>& grid = default_frequency_grid(),
                                     double real_tolerance = kDefaultRealTolerance) {
    if (!(perturbation >= 0.0 && perturbation < 1.0)) throw InvalidArgument("perturbation must lie in [0, 1)");
    if (samples_per_axis < 1) throw InvalidArgument("samples_per_axis must be >= 1");
    const auto axis = samples_per_axis == 1 ? std::vector<double>{1.0}
                                            : numerics::linspace(1.0 - perturbation, 1.0 + perturbation, samples_per_axis);
    SweepResult out;
    for (double e : axis)
        for (double rho : axis)
            for (double i : axis) {
                const ParameterScaling s{e, rho, i};
                PassivityReport rep;
                try {
                    const auto model = factory(s);
                    rep = passivity_check(linearize(model, tension), grid, real_tolerance);
                } catch (const Error& err) {
                    throw Error("uncertainty sample (E x" + std::to_string(e) + ", rho x" + std::to_string(rho) +
                                ", I x" + std::to_string(i) + "): " + err.what());
                }
                rep.scaling = s;
                out.reports.push_back(rep);
            }
    return out;
}

/// Nominal-parameter sweep over basis sizes.
inline SweepResult mode_count_sweep(const BoomParams& params, const std::vector<int>& mode_counts, double tension,
                                    const SpreaderMatrixFn& spreader_model = spreader::cable_path,
                                    const std::vector<double>& grid = default_frequency_grid(),
                                    double real_tolerance = kDefaultRealTolerance) {
    SweepResult out;
    for (int n : mode_counts) {
        const auto model = assemble_matrices(params, BasisSet(n), spreader_model);
        out.reports.push_back(passivity_check(linearize(model, tension), grid, real_tolerance));
    }
    return out;
}

}  // namespace cablesail
