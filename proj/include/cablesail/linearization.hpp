#pragma once

// LTI model about a forced equilibrium:
//   d(dx)/dt = A dx + B du,   dy = C dx + D du,   y = tip deflection rate.

#include <Eigen/Dense>

#include <complex>

#include "cablesail/boom_model.hpp"
#include "cablesail/equilibrium.hpp"
#include "cablesail/numerics.hpp"

namespace cablesail {

struct StateSpaceModel {
    Eigen::MatrixXd A;         // 2n x 2n
    Eigen::VectorXd B;         // 2n
    Eigen::RowVectorXd C;      // 2n
    double D = 0.0;
    double anchor_tension = 0.0;
    Eigen::VectorXd anchor_state;  // [q_eq; 0]

    int state_dim() const { return static_cast<int>(A.rows()); }

    /// Eigenvalues of A, computed on the balanced matrix.
    Eigen::VectorXcd eigenvalues() const {
        const Eigen::VectorXd t = numerics::balancing_scale(A);
        const Eigen::MatrixXd balanced = t.cwiseInverse().asDiagonal() * A * t.asDiagonal();
        return Eigen::EigenSolver<Eigen::MatrixXd>(balanced, false).eigenvalues();
    }
};

inline StateSpaceModel linearize(const StructuralModel& model, const EquilibriumPoint& eq) {
    const int n = model.mode_count();
    const double dx = model.params().node_spacing;
    const double t_eq = eq.tension;

    // q_eq recomputed from the closed form so that B follows the composite expression exactly.
    const EquilibriumPoint anchor = solve_equilibrium(model, t_eq);
    if (eq.q.size() != n) throw InvalidArgument("equilibrium point does not match the model's mode count");
    if ((anchor.q - eq.q).norm() > 1e-8 * std::max(anchor.q.norm(), 1e-300))
        throw InvalidArgument("equilibrium point is inconsistent with the model at its tension");

    StateSpaceModel ss;
    ss.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    ss.A.topRightCorner(n, n).setIdentity();
    ss.A.bottomLeftCorner(n, n) = model.solve_mass(Eigen::MatrixXd(model.spreader_matrix() * (t_eq / dx) - model.stiffness_matrix()));

    ss.B = Eigen::VectorXd::Zero(2 * n);
    ss.B.tail(n) = model.solve_mass(Eigen::VectorXd(model.spreader_matrix() * anchor.q / dx + model.moment_column()));

    ss.C = Eigen::RowVectorXd::Zero(2 * n);
    ss.C.tail(n) = model.tip_row();
    ss.D = 0.0;

    ss.anchor_tension = t_eq;
    ss.anchor_state = Eigen::VectorXd::Zero(2 * n);
    ss.anchor_state.head(n) = anchor.q;
    return ss;
}

inline StateSpaceModel linearize(const StructuralModel& model, double tension) {
    return linearize(model, solve_equilibrium(model, tension));
}

}  // namespace cablesail
