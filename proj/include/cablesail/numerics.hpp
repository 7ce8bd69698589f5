#pragma once

// Small dense-matrix helpers shared by the analysis modules.

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

#include "cablesail/error.hpp"

namespace cablesail::numerics {

inline std::vector<double> linspace(double first, double last, int count) {
    if (count < 1) throw InvalidArgument("linspace needs at least one sample");
    std::vector<double> out(static_cast<std::size_t>(count));
    if (count == 1) {
        out[0] = first;
        return out;
    }
    const double step = (last - first) / (count - 1);
    for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = first + step * i;
    out.back() = last;
    return out;
}

inline std::vector<double> logspace(double first, double last, int count) {
    if (!(first > 0.0) || !(last > first)) throw InvalidArgument("logspace needs 0 < first < last");
    auto exps = linspace(std::log10(first), std::log10(last), count);
    for (auto& e : exps) e = std::pow(10.0, e);
    exps.front() = first;
    exps.back() = last;
    return exps;
}

/// Symmetric diagonal scaling that brings every diagonal entry of `a` to unit magnitude.
/// Rows with a zero diagonal fall back to their largest entry.
inline Eigen::VectorXd equilibration_scale(const Eigen::MatrixXd& a) {
    Eigen::VectorXd d(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double m = std::abs(a(i, i));
        if (m == 0.0) m = a.row(i).cwiseAbs().maxCoeff();
        d(i) = m > 0.0 ? 1.0 / std::sqrt(m) : 1.0;
    }
    return d;
}

/// 1-norm condition estimate of the diagonally equilibrated matrix.
/// Returns +inf for an exactly singular matrix.
inline double equilibrated_condition(const Eigen::MatrixXd& a) {
    const Eigen::VectorXd d = equilibration_scale(a);
    const Eigen::MatrixXd scaled = d.asDiagonal() * a * d.asDiagonal();
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(scaled);
    const double rc = lu.rcond();
    return rc > 0.0 ? 1.0 / rc : std::numeric_limits<double>::infinity();
}

/// Parlett-Reinsch balancing: returns diagonal `t` (powers of two) such that
/// diag(t)^-1 * a * diag(t) has comparable row and column norms.
inline Eigen::VectorXd balancing_scale(const Eigen::MatrixXd& a) {
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd m = a;
    Eigen::VectorXd t = Eigen::VectorXd::Ones(n);
    constexpr double radix = 2.0;
    bool converged = false;
    for (int sweep = 0; sweep < 200 && !converged; ++sweep) {
        converged = true;
        for (Eigen::Index i = 0; i < n; ++i) {
            double c = 0.0;
            double r = 0.0;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (j == i) continue;
                c += std::abs(m(j, i));
                r += std::abs(m(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            const double s = c + r;
            double f = 1.0;
            double g = r / radix;
            while (c < g) {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while (c >= g) {
                f /= radix;
                c /= radix * radix;
            }
            if ((c + r) / f < 0.95 * s) {
                converged = false;
                t(i) *= f;
                m.col(i) *= f;
                m.row(i) /= f;
            }
        }
    }
    return t;
}

}  // namespace cablesail::numerics
