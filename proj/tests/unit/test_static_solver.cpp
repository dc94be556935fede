#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rodsim/errors.hpp"
#include "rodsim/linear_oracles.hpp"
#include "rodsim/static_solver.hpp"
#include "test_support.hpp"

using namespace rodsim;
using namespace rodsim::statics;
using rodsim::testing::Rng;

namespace {

double max_state_difference(const fem::DofVector& a, const fem::DofVector& b) {
    double m = 0.0;
    for (int i = 0; i < a.nodes(); ++i) {
        m = std::max(m, (a.r[i] - b.r[i]).cwiseAbs().maxCoeff());
        m = std::max(m, std::abs(a.psi[i] - b.psi[i]));
    }
    return m;
}

}  // namespace

TEST(StaticSolver, UniformTorsionIsExact) {
    for (int ne : {1, 3, 8}) {
        const fem::Grid g = fem::Grid::uniform(1.0, ne);
        LoadCase lc;
        lc.tip_tangent_moment = 1.0;
        const auto law = rod::MaterialLaw::transversely_isotropic(1e3, 1.0, 2.0);
        const SolveReport r = solve_ti_static(fem::DofVector::straight(g), g, law, lc);
        ASSERT_TRUE(r.converged) << r.message;
        EXPECT_NEAR(r.tip_psi, 0.5, 1e-10);
        for (int i = 0; i < g.nodes(); ++i) EXPECT_NEAR(r.state.psi[i], 0.5 * g.s(i), 1e-10);
    }
}

TEST(StaticSolver, SmallLoadCantileverMatchesBeamTheory) {
    const fem::Grid g = fem::Grid::uniform(1.0, 16);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e6, 1.0, 1.0);
    LoadCase lc;
    lc.tip_force = Vec3(1e-3, 0.0, 0.0);
    const SolveReport r = solve_ti_static(fem::DofVector::straight(g), g, law, lc);
    ASSERT_TRUE(r.converged);
    const double ref = oracle::cantilever_statics(oracle::CantileverLoad::tip_force, 1e-3, 1.0, 1.0, 1.0);
    EXPECT_LT(std::abs(r.tip[0] / ref - 1.0), 5e-3);
    EXPECT_EQ(r.tangent_negative, 0);
    // Energy decreases monotonically along the Newton iterates.
    for (std::size_t k = 1; k < r.energy_history.size(); ++k) {
        EXPECT_LE(r.energy_history[k], r.energy_history[k - 1] + 1e-15);
    }
}

TEST(StaticSolver, EndMomentBendsIntoCircularArc) {
    const fem::Grid g = fem::Grid::uniform(1.0, 16);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e4, 1.0, 1.0);
    LoadCase lc;
    lc.tip_moment = Vec3(0.0, 1.0, 0.0);
    SolverOptions opt;
    opt.load_steps = 4;
    opt.tol = 1e-11;
    const SolveReport r = solve_general_static(fem::DofVector::straight(g), g, law, lc, {}, opt);
    ASSERT_TRUE(r.converged) << r.message;
    // Curvature M/EI = 1 with axial force zero, so the arc has unit radius.
    const Vec3 exact(1.0 - std::cos(1.0), 0.0, std::sin(1.0));
    EXPECT_LT((r.tip - exact).norm() / exact.norm(), 1e-5);
    for (const FieldSample& f : r.fields) EXPECT_NEAR(f.curvature, 1.0, 1e-3);
}

TEST(StaticSolver, TiMomentRequestIsRejected) {
    const fem::Grid g = fem::Grid::uniform(1.0, 2);
    LoadCase lc;
    lc.tip_moment = Vec3(0.0, 1.0, 0.0);
    EXPECT_THROW(solve_ti_static(fem::DofVector::straight(g), g, rod::MaterialLaw{}, lc), ValidationError);
    EXPECT_THROW(solve_ti_static(fem::DofVector::straight(g), g, rod::MaterialLaw{1, 1, 2, 1}, {}),
                 ValidationError);
}

TEST(StaticSolver, ConstrainedAndUnconstrainedPathsAgree) {
    const fem::Grid g = fem::Grid::uniform(1.0, 8);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e4, 1.0, 1.5);
    LoadCase lc;
    lc.tip_force = Vec3(1.0, 0.5, 0.0);
    lc.tip_tangent_moment = 0.3;
    lc.distributed_force = Vec3(0.0, 0.2, 0.0);
    SolverOptions opt;
    opt.load_steps = 2;
    opt.tol = 1e-12;
    const SolveReport ti = solve_ti_static(fem::DofVector::straight(g), g, law, lc, {}, opt);
    const SolveReport ge = solve_general_static(fem::DofVector::straight(g), g, law, lc, {}, opt);
    ASSERT_TRUE(ti.converged && ge.converged);
    EXPECT_LT(max_state_difference(ti.state, ge.state), 1e-8);
    EXPECT_NEAR(ti.energy, ge.energy, 1e-9 * (1.0 + std::abs(ti.energy)));
    EXPECT_LT(fem::assemble_constraints(g, ge.state).max_abs(), 1e-10);
}

TEST(StaticSolver, GeneralGradientMatchesChartDifferences) {
    Rng rng;
    const fem::Grid g = fem::Grid::uniform(1.0, 5);
    const rod::MaterialLaw law{30.0, 2.0, 0.7, 1.2};
    LoadCase lc;
    lc.tip_force = Vec3(0.2, -0.3, 0.1);
    lc.distributed_force = Vec3(0.1, 0.0, -0.2);
    lc.tip_tangent_moment = 0.4;
    for (int trial = 0; trial < 20; ++trial) {
        fem::DofVector d = fem::DofVector::straight(g);
        for (int i = 0; i < g.nodes(); ++i) {
            d.r[i] += 0.1 * rng.vec3();
            d.t[i] += 0.1 * rng.vec3();
        }
        d = lift_bishop_composite(d, g);
        for (auto& R : d.rotations) R = so3::exp_rodrigues(0.05 * rng.vec3()).matrix() * R;
        const VecX grad = general_gradient(d, g, law, lc);
        VecX fd(grad.size());
        const double h = 1e-6;
        for (int i = 0; i < grad.size(); ++i) {
            VecX e = VecX::Zero(grad.size());
            e[i] = h;
            fd[i] = (general_energy(general_chart_step(d, e), g, law, lc) -
                     general_energy(general_chart_step(d, -e), g, law, lc)) / (2.0 * h);
        }
        EXPECT_LT((fd - grad).norm() / grad.norm(), 1e-6) << "trial " << trial;
    }
    LoadCase moment;
    moment.tip_moment = Vec3(1.0, 0.0, 0.0);
    const fem::DofVector lifted = lift_bishop_composite(fem::DofVector::straight(g), g);
    EXPECT_THROW(general_energy(lifted, g, law, moment), ValidationError);
    EXPECT_THROW(general_gradient(fem::DofVector::straight(g), g, law, {}), ValidationError);
}

TEST(StaticSolver, WeakAxisCantileverUsesSmallerStiffness) {
    const fem::Grid g = fem::Grid::uniform(1.0, 16);
    const rod::MaterialLaw law{1e6, 4.0, 0.5, 1.0};
    for (int axis : {0, 1}) {
        LoadCase lc;
        lc.tip_force[axis] = 5e-4;
        const SolveReport r = solve_general_static(fem::DofVector::straight(g), g, law, lc);
        ASSERT_TRUE(r.converged) << r.message;
        // A force along E1 bends about E2 and engages EI2.
        const double EI = axis == 0 ? law.EI2 : law.EI1;
        EXPECT_LT(std::abs(r.tip[axis] / (5e-4 / (3.0 * EI)) - 1.0), 5e-3);
    }
}

TEST(StaticSolver, BucklingLoadApproachesEuler) {
    const auto law = rod::MaterialLaw::transversely_isotropic(1e8, 1.0, 1.0);
    const double euler = std::numbers::pi * std::numbers::pi / 4.0;
    double prev = 0.0;
    for (int ne : {2, 4, 8}) {
        const BucklingResult b = continuation_buckling(fem::Grid::uniform(1.0, ne), law, 0.0, 4.0);
        EXPECT_LT(b.lowest_eigenvalue_above, 0.0);
        EXPECT_GT(b.lowest_eigenvalue_below, 0.0);
        const double err = std::abs(b.critical_load / euler - 1.0);
        if (prev > 0.0) EXPECT_GT(prev / err, 4.0);
        prev = err;
    }
    EXPECT_LT(prev, 1e-3);
    EXPECT_THROW(continuation_buckling(fem::Grid::uniform(1.0, 4), law, 0.0, 2.0), NotDetected);
}

TEST(StaticSolver, StraightStateIsStableBelowCriticalLoad) {
    const fem::Grid g = fem::Grid::uniform(1.0, 4);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e6, 1.0, 1.0);
    EXPECT_GT(lowest_tangent_eigenvalue(fem::DofVector::straight(g), g, law), 0.0);
}

TEST(StaticSolver, MixedResidualsVanishOnLiftedSolution) {
    const fem::Grid g = fem::Grid::uniform(1.0, 16);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e4, 1.0, 1.0);
    LoadCase lc;
    lc.tip_force = Vec3(0.1, 0.0, 0.0);
    lc.tip_tangent_moment = 0.5;
    SolverOptions opt;
    opt.tol = 1e-12;
    const SolveReport r = solve_ti_static(fem::DofVector::straight(g), g, law, lc, {}, opt);
    ASSERT_TRUE(r.converged);
    const fem::DofVector lifted = lift_bishop_composite(r.state, g);
    const LagrangeFields mu = torsion_multiplier_from_twist(lifted, g, law);
    const MixedResidualReport rep = mixed_residual_check(lifted, mu, g, law, lc);
    EXPECT_LT(rep.difference, 1e-8);
    EXPECT_LT(rep.constraint, 1e-10);
    EXPECT_LT(rep.torsion_general, 1e-8);
    EXPECT_LT(rep.force_general, 1e-3);

    // A perturbed multiplier shows up linearly in the mixed torsion balance.
    double prev = 0.0;
    for (double amp : {1e-4, 2e-4, 4e-4}) {
        LagrangeFields p = mu;
        for (double& m : p.mu) m += amp;
        const double t = mixed_residual_check(lifted, p, g, law, lc).torsion_mixed;
        if (prev > 0.0) EXPECT_NEAR(t / prev, 2.0, 0.05);
        prev = t;
    }
}

TEST(StaticSolver, MixedResidualRejectsConstraintViolation) {
    const fem::Grid g = fem::Grid::uniform(1.0, 4);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e4, 1.0, 1.0);
    fem::DofVector lifted = lift_bishop_composite(fem::DofVector::straight(g), g);
    lifted.rotations[2] = so3::exp_rodrigues(Vec3(0.1, 0.0, 0.0)).matrix() * lifted.rotations[2];
    const LagrangeFields mu = torsion_multiplier_from_twist(lifted, g, law);
    EXPECT_THROW(mixed_residual_check(lifted, mu, g, law, {}), ValidationError);
}

TEST(StaticSolver, ReportsNonConvergence) {
    const fem::Grid g = fem::Grid::uniform(1.0, 8);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e4, 1.0, 1.0);
    LoadCase lc;
    lc.tip_force = Vec3(5.0, 0.0, 0.0);
    SolverOptions opt;
    opt.max_iter = 1;
    opt.max_cutbacks = 0;
    const SolveReport r = solve_ti_static(fem::DofVector::straight(g), g, law, lc, {}, opt);
    EXPECT_FALSE(r.converged);
    EXPECT_FALSE(r.message.empty());
    EXPECT_GT(r.residual, opt.tol);
}

TEST(StaticSolver, SolutionsTransformWithRigidMotions) {
    const fem::Grid g = fem::Grid::uniform(1.0, 8);
    const auto law = rod::MaterialLaw::transversely_isotropic(1e4, 1.0, 1.0);
    LoadCase lc;
    lc.tip_force = Vec3(1.0, 0.4, 0.0);
    lc.tip_tangent_moment = 0.2;
    SolverOptions opt;
    opt.tol = 1e-12;
    const SolveReport a = solve_ti_static(fem::DofVector::straight(g), g, law, lc, {}, opt);
    fem::Clamp c;
    c.orientation = so3::exp_rodrigues(Vec3(0.4, -0.9, 0.3)).matrix();
    c.position = Vec3(1.0, -2.0, 0.5);
    const SolveReport b =
        solve_ti_static(fem::DofVector::straight(g, c), g, law, lc.rotated(c.orientation), c, opt);
    ASSERT_TRUE(a.converged && b.converged);
    for (int i = 0; i < g.nodes(); ++i) {
        EXPECT_LT((c.orientation * a.state.r[i] + c.position - b.state.r[i]).norm(), 1e-9);
        EXPECT_NEAR(a.state.psi[i], b.state.psi[i], 1e-9);
    }
}
