#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace cablesail;

namespace {

double column_relative_error(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want) {
    double worst = 0.0;
    for (Eigen::Index c = 0; c < want.cols(); ++c) {
        const double den = want.col(c).norm();
        worst = std::max(worst, den > 0.0 ? (got.col(c) - want.col(c)).norm() / den : got.col(c).norm());
    }
    return worst;
}

}  // namespace

TEST(Linearize, StructureOfTheRealization) {
    const auto model = assemble_matrices(BoomParams{}, BasisSet(3));
    const auto ss = linearize(model, 1.0);
    EXPECT_EQ(ss.state_dim(), 6);
    EXPECT_EQ(ss.A.topLeftCorner(3, 3).norm(), 0.0);
    EXPECT_EQ((ss.A.topRightCorner(3, 3) - Eigen::MatrixXd::Identity(3, 3)).norm(), 0.0);
    EXPECT_EQ(ss.A.bottomRightCorner(3, 3).norm(), 0.0);
    EXPECT_EQ(ss.B.head(3).norm(), 0.0);
    EXPECT_EQ(ss.C.head(3).norm(), 0.0);
    EXPECT_EQ(ss.D, 0.0);
    EXPECT_DOUBLE_EQ(ss.anchor_tension, 1.0);
}

TEST(Linearize, MatchesFiniteDifferenceJacobian) {
    for (int n : {3, 4}) {
        const auto model = assemble_matrices(BoomParams{}, BasisSet(n));
        for (double t : {0.0, 0.5, 1.0}) {
            const auto ss = linearize(model, t);
            const auto fd = cablesail::testing::finite_difference_jacobian(model, t);
            EXPECT_LT(column_relative_error(ss.A, fd.A), 1e-6) << "n=" << n << " T=" << t;
            EXPECT_LT((ss.B - fd.B).norm() / fd.B.norm(), 1e-6) << "n=" << n << " T=" << t;
        }
    }
}

TEST(Linearize, ZeroTensionInputIsTheMomentColumn) {
    const auto model = assemble_matrices(BoomParams{}, BasisSet(3));
    const auto ss = linearize(model, 0.0);
    const Eigen::VectorXd want = model.solve_mass(model.moment_column());
    EXPECT_LT((ss.B.tail(3) - want).norm(), 1e-14 * want.norm());
}

TEST(Linearize, EigenvaluesAreNaturalFrequencies) {
    const auto model = assemble_matrices(BoomParams{}, BasisSet(3));
    const auto ss = linearize(model, 0.0);
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(model.stiffness_matrix(), model.mass_matrix());
    std::vector<double> want;
    for (Eigen::Index i = 0; i < 3; ++i) want.push_back(std::sqrt(ges.eigenvalues()(i)));
    std::vector<double> got;
    const auto ev = ss.eigenvalues();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        EXPECT_LT(std::abs(ev(i).real()), 1e-8 * std::abs(ev(i)));
        if (ev(i).imag() > 0.0) got.push_back(ev(i).imag());
    }
    std::sort(got.begin(), got.end());
    ASSERT_EQ(got.size(), 3u);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], want[i], 1e-8 * want[i]);
}

TEST(Linearize, TensionLowersTheFundamental) {
    const auto model = assemble_matrices(BoomParams{}, BasisSet(3));
    auto fundamental = [&](double t) {
        const auto ev = linearize(model, t).eigenvalues();
        double w = 1e300;
        for (Eigen::Index i = 0; i < ev.size(); ++i) w = std::min(w, std::abs(ev(i)));
        return w;
    };
    EXPECT_LT(fundamental(1.0), fundamental(0.0));
}

TEST(Linearize, RejectsInconsistentEquilibrium) {
    const auto model = assemble_matrices(BoomParams{}, BasisSet(3));
    auto eq = solve_equilibrium(model, 1.0);
    eq.q *= 1.01;
    EXPECT_THROW(linearize(model, eq), InvalidArgument);
    eq.q = Eigen::VectorXd::Zero(2);
    EXPECT_THROW(linearize(model, eq), InvalidArgument);
}
