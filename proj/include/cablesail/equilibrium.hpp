#pragma once

// Forced equilibria q_eq(T) = (K - Psi* T/dx)^-1 h (dPsi/dx)^T|_L T and the
// tension <-> tip-deflection map built on them.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cablesail/boom_model.hpp"
#include "cablesail/error.hpp"
#include "cablesail/numerics.hpp"

namespace cablesail {

struct EquilibriumPoint {
    double tension = 0.0;        // T_eq [N]
    Eigen::VectorXd q;           // q_eq
    double tip_deflection = 0.0; // w_eq(L) [m]
};

/// Range over which the effective stiffness is known to stay invertible.
inline constexpr double kDefaultMaxTension = 2.0;
inline constexpr double kSingularConditionLimit = 1e12;

inline EquilibriumPoint solve_equilibrium(const StructuralModel& model, double tension) {
    if (!std::isfinite(tension)) throw InvalidArgument("equilibrium tension must be finite");
    const Eigen::MatrixXd keff = model.effective_stiffness(tension);
    const double cond = numerics::equilibrated_condition(keff);
    if (!(cond <= kSingularConditionLimit)) throw NearSingularStiffness(tension, cond);

    const Eigen::VectorXd rhs = model.moment_column() * tension;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(keff);
    Eigen::VectorXd q = lu.solve(rhs);
    q += lu.solve(Eigen::VectorXd(rhs - keff * q));  // one refinement step

    // Residual of the force balance f(q, T) - K q.
    const Eigen::VectorXd kq = model.stiffness_matrix() * q;
    const double residual = (actuation_force(model, q, tension) - kq).norm();
    if (residual > std::max(1e-9 * kq.norm(), 1e-12))
        throw NumericalError("equilibrium residual " + std::to_string(residual) + " exceeds tolerance");
    return {tension, q, tip_deflection(model, q)};
}

/// Equilibria at `samples` evenly spaced tensions over [0, max_tension].
/// A sign change of det(K - Psi* T/dx) between samples means the stiffness
/// passed through singularity; it is reported as NearSingularStiffness.
inline std::vector<EquilibriumPoint> deflection_curve(const StructuralModel& model,
                                                      double max_tension = kDefaultMaxTension, int samples = 200) {
    if (!(max_tension > 0.0)) throw InvalidArgument("deflection curve needs max_tension > 0");
    if (samples < 2) throw InvalidArgument("deflection curve needs at least two samples");
    std::vector<EquilibriumPoint> curve;
    curve.reserve(static_cast<std::size_t>(samples));
    double prev_det_sign = 0.0;
    for (double t : numerics::linspace(0.0, max_tension, samples)) {
        const Eigen::MatrixXd keff = model.effective_stiffness(t);
        const Eigen::VectorXd d = numerics::equilibration_scale(keff);
        const double det = Eigen::MatrixXd(d.asDiagonal() * keff * d.asDiagonal()).determinant();
        const double sign = det > 0.0 ? 1.0 : (det < 0.0 ? -1.0 : 0.0);
        if (prev_det_sign != 0.0 && sign != prev_det_sign)
            throw NearSingularStiffness(t, std::numeric_limits<double>::infinity());
        prev_det_sign = sign;
        curve.push_back(solve_equilibrium(model, t));
    }
    return curve;
}

/// Tension whose equilibrium tip deflection equals `target` (bisection on the
/// monotone curve over [0, max_tension]).
inline double tension_for_deflection(const StructuralModel& model, double target,
                                     double max_tension = kDefaultMaxTension) {
    if (!std::isfinite(target)) throw InvalidArgument("target deflection must be finite");
    if (target == 0.0) return 0.0;
    if (target < 0.0) throw OutOfRange("target deflection is negative; tension cannot be negative");

    // Coarse scan: locates the bracket and confirms monotonicity on it.
    const auto coarse = deflection_curve(model, max_tension, 65);
    if (coarse.back().tip_deflection < target)
        throw OutOfRange("target deflection " + std::to_string(target) + " m exceeds the reachable " +
                         std::to_string(coarse.back().tip_deflection) + " m at " + std::to_string(max_tension) + " N");
    std::size_t hi_idx = 1;
    for (; hi_idx < coarse.size(); ++hi_idx) {
        if (coarse[hi_idx].tip_deflection <= coarse[hi_idx - 1].tip_deflection)
            throw NumericalError("deflection curve is not increasing near " + std::to_string(coarse[hi_idx].tension) +
                                 " N");
        if (coarse[hi_idx].tip_deflection >= target) break;
    }
    double lo = coarse[hi_idx - 1].tension;
    double hi = coarse[hi_idx].tension;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (solve_equilibrium(model, mid).tip_deflection < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace cablesail
