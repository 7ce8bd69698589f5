#pragma once

// Assumed-modes model of a single cable-actuated boom: clamped-root monomial
// basis, closed-form mass/stiffness matrices, the cable reaction matrix Psi*,
// and the undamped nonlinear dynamics  M q'' + K q = f(q, u).

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "cablesail/error.hpp"

namespace cablesail {

/// Physical constants of the boom and its cable rigging (SI units).
struct BoomParams {
    double length = 29.4;             // L [m]
    double linear_density = 0.1;      // rho [kg/m]
    double elastic_modulus = 228e9;   // E [Pa]
    double second_moment = 4.99e-10;  // I [m^4]
    double cable_offset = 0.1;        // h [m]
    int spreader_count = 10;          // n_s
    double node_spacing = 2.94;       // dx [m]

    /// Solar Cruiser TRAC boom values used by the simulation studies.
    static BoomParams solar_cruiser() { return BoomParams{}; }

    double flexural_rigidity() const { return elastic_modulus * second_moment; }

    void validate() const {
        auto positive = [](double v, const char* name) {
            if (!(v > 0.0) || !std::isfinite(v))
                throw InvalidArgument(std::string("boom parameter '") + name + "' must be finite and > 0");
        };
        positive(length, "length");
        positive(linear_density, "linear_density");
        positive(second_moment, "second_moment");
        positive(cable_offset, "cable_offset");
        positive(node_spacing, "node_spacing");
        // E = 0 is admitted so that the stiffness-scaling identity can be exercised.
        if (!(elastic_modulus >= 0.0) || !std::isfinite(elastic_modulus))
            throw InvalidArgument("boom parameter 'elastic_modulus' must be finite and >= 0");
        if (spreader_count < 0) throw InvalidArgument("spreader_count must be >= 0");
        if (node_spacing * spreader_count > length * (1.0 + 1e-12))
            throw InvalidArgument("spreader nodes extend past the boom tip (node_spacing * spreader_count > length)");
    }
};

/// Monomial assumed-mode basis x^p with strictly increasing exponents p >= 2,
/// so every function satisfies phi(0) = phi'(0) = 0.
class BasisSet {
public:
    /// Consecutive exponents 2, 3, ..., mode_count + 1.
    explicit BasisSet(int mode_count = 3) {
        if (mode_count < 1) throw InvalidArgument("basis needs at least one mode");
        for (int k = 0; k < mode_count; ++k) exponents_.push_back(k + 2);
    }

    static BasisSet from_exponents(std::vector<int> exponents) {
        if (exponents.empty()) throw InvalidArgument("basis needs at least one exponent");
        if (exponents.front() < 2) throw InvalidArgument("basis exponents must be >= 2 (clamped root)");
        for (std::size_t i = 1; i < exponents.size(); ++i)
            if (exponents[i] <= exponents[i - 1]) throw InvalidArgument("basis exponents must be strictly increasing");
        BasisSet b(1);
        b.exponents_ = std::move(exponents);
        return b;
    }

    int mode_count() const { return static_cast<int>(exponents_.size()); }
    const std::vector<int>& exponents() const { return exponents_; }

    Eigen::RowVectorXd value(double x) const {
        Eigen::RowVectorXd r(mode_count());
        for (int k = 0; k < mode_count(); ++k) r(k) = std::pow(x, exponents_[k]);
        return r;
    }

    Eigen::RowVectorXd slope(double x) const {
        Eigen::RowVectorXd r(mode_count());
        for (int k = 0; k < mode_count(); ++k) {
            const int p = exponents_[k];
            r(k) = p * std::pow(x, p - 1);
        }
        return r;
    }

    Eigen::RowVectorXd curvature(double x) const {
        Eigen::RowVectorXd r(mode_count());
        for (int k = 0; k < mode_count(); ++k) {
            const int p = exponents_[k];
            r(k) = p * (p - 1) * std::pow(x, p - 2);
        }
        return r;
    }

private:
    std::vector<int> exponents_;
};

struct BasisRows {
    Eigen::RowVectorXd value;      // Psi(x)
    Eigen::RowVectorXd slope;      // Psi'(x)
    Eigen::RowVectorXd curvature;  // Psi''(x)
};

/// Basis rows at a position on the boom; rejects x outside [0, length].
inline BasisRows evaluate_basis(const BasisSet& basis, double x, double length) {
    if (!(x >= 0.0 && x <= length)) throw InvalidArgument("basis evaluation point lies outside [0, L]");
    return {basis.value(x), basis.slope(x), basis.curvature(x)};
}

/// Integral over [0, L] of Psi'^T Psi' (closed form).
inline Eigen::MatrixXd slope_gram(const BasisSet& basis, double length) {
    const int n = basis.mode_count();
    const auto& p = basis.exponents();
    Eigen::MatrixXd g(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
            const int e = p[a] + p[b] - 1;
            g(a, b) = g(b, a) = double(p[a]) * p[b] * std::pow(length, e) / e;
        }
    return g;
}

/// Attachment stations of the cable: root, spreaders at i*dx, then the tip if
/// the last spreader does not already sit there.
inline std::vector<double> cable_stations(const BoomParams& params) {
    std::vector<double> x{0.0};
    for (int i = 1; i <= params.spreader_count; ++i) x.push_back(std::min(i * params.node_spacing, params.length));
    if (params.length - x.back() > 1e-12 * params.length) x.push_back(params.length);
    return x;
}

/// Builds Psi* from boom parameters and basis. Psi* enters the dynamics as
/// (Psi*/dx) q u; a positive semidefinite Psi* softens the boom under tension.
using SpreaderMatrixFn = std::function<Eigen::MatrixXd(const BoomParams&, const BasisSet&)>;

namespace spreader {

/// Cable-length potential of a cable anchored at the tip and guided by the
/// spreaders: tip compression dx*int(Psi'^T Psi') minus the chord reaction of
/// each straight cable segment between stations.
inline Eigen::MatrixXd cable_path(const BoomParams& params, const BasisSet& basis) {
    Eigen::MatrixXd s = params.node_spacing * slope_gram(basis, params.length);
    const auto x = cable_stations(params);
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double seg = x[i] - x[i - 1];
        if (seg <= 0.0) continue;
        const Eigen::RowVectorXd d = basis.value(x[i]) - basis.value(x[i - 1]);
        s.noalias() -= (params.node_spacing / seg) * d.transpose() * d;
    }
    return 0.5 * (s + s.transpose());
}

/// Sum over spreaders of Psi(x_i)^T [Psi(x_{i-1}) - 2 Psi(x_i) + Psi(x_{i+1})],
/// with x_{n_s+1} at the tip. Negative semidefinite: tension stiffens the boom.
inline Eigen::MatrixXd spreader_curvature(const BoomParams& params, const BasisSet& basis) {
    const int n = basis.mode_count();
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    const int ns = params.spreader_count;
    auto node = [&](int i) { return i > ns ? params.length : std::min(i * params.node_spacing, params.length); };
    for (int i = 1; i <= ns; ++i) {
        const Eigen::RowVectorXd curv = basis.value(node(i - 1)) - 2.0 * basis.value(node(i)) + basis.value(node(i + 1));
        s.noalias() += basis.value(node(i)).transpose() * curv;
    }
    return s;
}

inline Eigen::MatrixXd none(const BoomParams&, const BasisSet& basis) {
    return Eigen::MatrixXd::Zero(basis.mode_count(), basis.mode_count());
}

inline SpreaderMatrixFn by_name(const std::string& name) {
    if (name == "cable_path") return cable_path;
    if (name == "spreader_curvature") return spreader_curvature;
    if (name == "none") return none;
    throw InvalidArgument("unknown spreader model '" + name + "' (expected cable_path | spreader_curvature | none)");
}

}  // namespace spreader

/// Modal coordinates and rates; x = [q; q_dot].
struct State {
    Eigen::VectorXd q;
    Eigen::VectorXd q_dot;

    static State zero(int n) { return {Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n)}; }

    Eigen::VectorXd stacked() const {
        Eigen::VectorXd x(q.size() + q_dot.size());
        x << q, q_dot;
        return x;
    }

    static State from_stacked(const Eigen::VectorXd& x) {
        const Eigen::Index n = x.size() / 2;
        return {x.head(n), x.tail(n)};
    }

    bool finite() const { return q.allFinite() && q_dot.allFinite(); }
};

/// Assembled, immutable discretization of the boom.
class StructuralModel {
public:
    StructuralModel(BoomParams params, BasisSet basis, Eigen::MatrixXd mass, Eigen::MatrixXd stiffness,
                    Eigen::MatrixXd spreader)
        : params_(params),
          basis_(std::move(basis)),
          mass_(std::move(mass)),
          stiffness_(std::move(stiffness)),
          spreader_(std::move(spreader)),
          tip_row_(basis_.value(params_.length)),
          tip_slope_(basis_.slope(params_.length).transpose()),
          mass_factor_(mass_) {
        const int n = basis_.mode_count();
        if (mass_.rows() != n || stiffness_.rows() != n || spreader_.rows() != n || spreader_.cols() != n)
            throw ModelConstructionError("matrix dimensions do not match the basis");
        if (mass_factor_.info() != Eigen::Success)
            throw ModelConstructionError("mass matrix is not positive definite");
    }

    const BoomParams& params() const { return params_; }
    const BasisSet& basis() const { return basis_; }
    int mode_count() const { return basis_.mode_count(); }

    const Eigen::MatrixXd& mass_matrix() const { return mass_; }
    const Eigen::MatrixXd& stiffness_matrix() const { return stiffness_; }
    /// Psi*.
    const Eigen::MatrixXd& spreader_matrix() const { return spreader_; }
    /// Psi(L).
    const Eigen::RowVectorXd& tip_row() const { return tip_row_; }
    /// (dPsi/dx)^T at x = L.
    const Eigen::VectorXd& tip_slope_column() const { return tip_slope_; }

    /// Tension-free actuation column h (dPsi/dx)^T|_L.
    Eigen::VectorXd moment_column() const { return params_.cable_offset * tip_slope_; }

    /// K - Psi* T / dx.
    Eigen::MatrixXd effective_stiffness(double tension) const {
        return stiffness_ - spreader_ * (tension / params_.node_spacing);
    }

    /// M^-1 v via the cached Cholesky factor.
    Eigen::VectorXd solve_mass(const Eigen::VectorXd& v) const { return mass_factor_.solve(v); }
    Eigen::MatrixXd solve_mass(const Eigen::MatrixXd& v) const { return mass_factor_.solve(v); }

    /// Same model with Psi* replaced.
    StructuralModel with_spreader_matrix(Eigen::MatrixXd spreader) const {
        return StructuralModel(params_, basis_, mass_, stiffness_, std::move(spreader));
    }

private:
    BoomParams params_;
    BasisSet basis_;
    Eigen::MatrixXd mass_;
    Eigen::MatrixXd stiffness_;
    Eigen::MatrixXd spreader_;
    Eigen::RowVectorXd tip_row_;
    Eigen::VectorXd tip_slope_;
    Eigen::LLT<Eigen::MatrixXd> mass_factor_;
};

/// M = rho int Psi^T Psi dx and K = EI int Psi''^T Psi'' dx by exact monomial
/// integration; Psi* from the chosen cable model.
inline StructuralModel assemble_matrices(const BoomParams& params, const BasisSet& basis,
                                         const SpreaderMatrixFn& spreader_model = spreader::cable_path) {
    params.validate();
    const int n = basis.mode_count();
    const auto& p = basis.exponents();
    const double L = params.length;
    const double ei = params.flexural_rigidity();
    Eigen::MatrixXd m(n, n);
    Eigen::MatrixXd k(n, n);
    for (int a = 0; a < n; ++a) {
        for (int b = a; b < n; ++b) {
            const int em = p[a] + p[b] + 1;
            m(a, b) = m(b, a) = params.linear_density * std::pow(L, em) / em;
            const int ek = p[a] + p[b] - 3;
            const double c = double(p[a]) * (p[a] - 1) * p[b] * (p[b] - 1);
            k(a, b) = k(b, a) = ei * c * std::pow(L, ek) / ek;
        }
    }
    Eigen::MatrixXd s = spreader_model(params, basis);
    if (!s.allFinite()) throw ModelConstructionError("spreader matrix has non-finite entries");
    return StructuralModel(params, basis, std::move(m), std::move(k), std::move(s));
}

/// f(q, u) = (Psi*/dx) q u + h (dPsi/dx)^T|_L u.
inline Eigen::VectorXd actuation_force(const StructuralModel& model, const Eigen::VectorXd& q, double u) {
    return (model.spreader_matrix() * q) * (u / model.params().node_spacing) + model.moment_column() * u;
}

/// d/dt [q; q_dot] = [q_dot; M^-1 (f(q, u) - K q)].
inline State dynamics_rhs(const StructuralModel& model, const State& state, double u) {
    return {state.q_dot, model.solve_mass(Eigen::VectorXd(actuation_force(model, state.q, u) - model.stiffness_matrix() * state.q))};
}

/// Stacked-vector form used by the integrator.
inline Eigen::VectorXd dynamics_rhs(const StructuralModel& model, const Eigen::VectorXd& x, double u) {
    const Eigen::Index n = model.mode_count();
    Eigen::VectorXd dx(2 * n);
    const auto q = x.head(n);
    dx.head(n) = x.tail(n);
    dx.tail(n) = model.solve_mass(
        Eigen::VectorXd((model.spreader_matrix() * q) * (u / model.params().node_spacing) + model.moment_column() * u -
                        model.stiffness_matrix() * q));
    return dx;
}

inline double tip_deflection(const StructuralModel& model, const Eigen::VectorXd& q) { return model.tip_row().dot(q); }
inline double tip_rate(const StructuralModel& model, const Eigen::VectorXd& q_dot) { return model.tip_row().dot(q_dot); }

struct Energy {
    double kinetic = 0.0;
    double potential = 0.0;
    double total() const { return kinetic + potential; }
};

/// T = q_dot^T M q_dot / 2, V = q^T K q / 2.
inline Energy total_energy(const StructuralModel& model, const State& state) {
    return {0.5 * state.q_dot.dot(model.mass_matrix() * state.q_dot), 0.5 * state.q.dot(model.stiffness_matrix() * state.q)};
}

}  // namespace cablesail
