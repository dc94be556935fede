#include <gtest/gtest.h>

#include <cmath>

#include "rodsim/discretization.hpp"
#include "rodsim/errors.hpp"
#include "rodsim/static_solver.hpp"
#include "test_support.hpp"

using namespace rodsim;
using namespace rodsim::fem;
using rodsim::testing::Rng;

namespace {

// Smoothly bent, stretched and twisted state near the straight rod.
DofVector random_state(const Grid& g, Rng& rng, double amp) {
    DofVector d = DofVector::straight(g);
    for (int i = 0; i < g.nodes(); ++i) {
        d.r[i] += amp * rng.vec3();
        d.t[i] += amp * rng.vec3();
        d.psi[i] = amp * rng.uniform();
    }
    return d;
}

LoadCase sample_loads() {
    LoadCase lc;
    lc.distributed_force = Vec3(0.3, -0.2, 0.1);
    lc.distributed_tangent_moment = 0.25;
    lc.tip_force = Vec3(-0.4, 0.5, 0.2);
    lc.tip_tangent_moment = 0.6;
    return lc;
}

const rod::MaterialLaw kLaw = rod::MaterialLaw::transversely_isotropic(40.0, 1.5, 0.8);

}  // namespace

TEST(Quadrature, GaussIsExactToDegreeTwoNMinusOne) {
    for (int n = 1; n <= 6; ++n) {
        const QuadRule q = gauss_legendre(n);
        ASSERT_EQ(q.xi.size(), static_cast<std::size_t>(n));
        for (int p = 0; p <= 2 * n - 1; ++p) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += q.w[k] * std::pow(q.xi[k], p);
            EXPECT_NEAR(s, 1.0 / (p + 1), 1e-14) << "n " << n << " p " << p;
        }
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += q.w[k] * std::pow(q.xi[k], 2 * n);
        EXPECT_GT(std::abs(s - 1.0 / (2 * n + 1)), 1e-8);
    }
    EXPECT_THROW(gauss_legendre(0), ValidationError);
}

TEST(Grid, UniformAndLocate) {
    const Grid g = Grid::uniform(2.0, 4);
    EXPECT_EQ(g.nodes(), 5);
    EXPECT_DOUBLE_EQ(g.h(2), 0.5);
    EXPECT_EQ(g.locate(0.0), 0);
    EXPECT_EQ(g.locate(0.75), 1);
    EXPECT_EQ(g.locate(2.0), 3);
    EXPECT_THROW(Grid({0.0, 0.5, 0.5, 1.0}), ValidationError);
    EXPECT_THROW(Grid::uniform(1.0, 0), ValidationError);
}

TEST(Interpolation, ReproducesNodalValuesAndCubics) {
    const Grid g = Grid::uniform(1.0, 3);
    DofVector d = DofVector::straight(g);
    // r(s) = (s^3, s^2, s) is reproduced exactly by Hermite cubics.
    for (int i = 0; i < g.nodes(); ++i) {
        const double s = g.s(i);
        d.r[i] = Vec3(s * s * s, s * s, s);
        d.t[i] = Vec3(3 * s * s, 2 * s, 1.0);
        d.psi[i] = 2.0 * s;
    }
    for (double s : {0.0, 0.1, 0.37, 0.5, 0.9, 1.0}) {
        const FieldPoint p = interpolate(g, d, s);
        EXPECT_LT((p.r - Vec3(s * s * s, s * s, s)).norm(), 1e-14);
        EXPECT_LT((p.rp - Vec3(3 * s * s, 2 * s, 1.0)).norm(), 1e-13);
        EXPECT_LT((p.rpp - Vec3(6 * s, 2.0, 0.0)).norm(), 1e-12);
        EXPECT_LT((p.rppp - Vec3(6.0, 0.0, 0.0)).norm(), 1e-10);
        EXPECT_NEAR(p.psi, 2.0 * s, 1e-14);
        EXPECT_NEAR(p.psi_p, 2.0, 1e-13);
    }
}

TEST(DofVector, PackRoundTripAndChecks) {
    Rng rng;
    const Grid g = Grid::uniform(1.0, 5);
    const DofVector d = random_state(g, rng, 0.1);
    const VecX x = d.pack();
    ASSERT_EQ(x.size(), kNodeDofs * g.nodes());
    EXPECT_EQ(DofVector::from_packed(x).pack(), x);
    DofVector bad = d;
    bad.psi.pop_back();
    EXPECT_THROW(bad.check(g), ValidationError);
}

TEST(Assembly, StraightRestStateIsStressFree) {
    const Grid g = Grid::uniform(1.0, 8);
    const DofVector d = DofVector::straight(g);
    EXPECT_NEAR(assemble_energy(g, d, kLaw, {}), 0.0, 1e-15);
    EXPECT_LT(assemble_gradient(g, d, kLaw, {}).norm(), 1e-13);
}

TEST(Assembly, GradientMatchesCentralDifferences) {
    Rng rng;
    const Grid g = Grid::uniform(1.3, 6);
    const LoadCase lc = sample_loads();
    for (int trial = 0; trial < 20; ++trial) {
        const DofVector d = random_state(g, rng, 0.2);
        const VecX x = d.pack();
        const VecX grad = assemble_gradient(g, d, kLaw, lc);
        VecX fd(x.size());
        const double h = 1e-6;
        for (int i = 0; i < x.size(); ++i) {
            VecX xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            fd[i] = (assemble_energy(g, DofVector::from_packed(xp), kLaw, lc) -
                     assemble_energy(g, DofVector::from_packed(xm), kLaw, lc)) / (2.0 * h);
        }
        EXPECT_LT((fd - grad).norm() / grad.norm(), 1e-6) << "trial " << trial;
    }
}

TEST(Assembly, HessianMatchesDifferencedGradient) {
    Rng rng;
    const Grid g = Grid::uniform(1.0, 4);
    for (int trial = 0; trial < 5; ++trial) {
        const DofVector d = random_state(g, rng, 0.2);
        const VecX x = d.pack();
        const MatX H = MatX(assemble_hessian(g, d, kLaw));
        EXPECT_LT((H - H.transpose()).norm(), 1e-10 * H.norm());
        MatX fd(x.size(), x.size());
        const double h = 1e-6;
        for (int i = 0; i < x.size(); ++i) {
            VecX xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            fd.col(i) = (assemble_gradient(g, DofVector::from_packed(xp), kLaw, {}) -
                         assemble_gradient(g, DofVector::from_packed(xm), kLaw, {})) / (2.0 * h);
        }
        EXPECT_LT((fd - H).norm() / H.norm(), 1e-6);
    }
}

TEST(Assembly, LoadVectorIsMinusLoadGradient) {
    Rng rng;
    const Grid g = Grid::uniform(1.0, 5);
    const LoadCase lc = sample_loads();
    const DofVector d = random_state(g, rng, 0.1);
    const VecX diff = assemble_gradient(g, d, kLaw, lc) - assemble_gradient(g, d, kLaw, {});
    EXPECT_LT((diff + assemble_load_vector(g, lc)).norm(), 1e-12);
    // Total applied force along x: distributed over the length plus the tip.
    const VecX f = assemble_load_vector(g, lc);
    double fx = 0.0;
    for (int i = 0; i < g.nodes(); ++i) fx += f[kNodeDofs * i];
    EXPECT_NEAR(fx, 0.3 - 0.4, 1e-14);
}

TEST(Assembly, InternalEnergyIsRigidMotionInvariant) {
    Rng rng;
    const Grid g = Grid::uniform(1.0, 6);
    for (int trial = 0; trial < 20; ++trial) {
        const DofVector d = random_state(g, rng, 0.3);
        const Mat3 Q = so3::exp_rodrigues(rng.vec3(3.0)).matrix();
        const Vec3 c = rng.vec3(5.0);
        DofVector m = d;
        for (int i = 0; i < g.nodes(); ++i) {
            m.r[i] = Q * d.r[i] + c;
            m.t[i] = Q * d.t[i];
        }
        const double E = assemble_energy(g, d, kLaw, {});
        EXPECT_NEAR(assemble_energy(g, m, kLaw, {}), E, 1e-12 * (1.0 + E));
    }
}

TEST(Assembly, ThreadCountDoesNotChangeResults) {
    Rng rng;
    const Grid g = Grid::uniform(1.0, 17);
    const DofVector d = random_state(g, rng, 0.2);
    const LoadCase lc = sample_loads();
    const AssemblyOptions one{1}, four{4};
    EXPECT_EQ(assemble_energy(g, d, kLaw, lc, one), assemble_energy(g, d, kLaw, lc, four));
    EXPECT_EQ(assemble_gradient(g, d, kLaw, lc, one), assemble_gradient(g, d, kLaw, lc, four));
    EXPECT_EQ(MatX(assemble_hessian(g, d, kLaw, one)), MatX(assemble_hessian(g, d, kLaw, four)));
}

TEST(DofMapTest, ClampFixesPositionDirectionAndTwist) {
    const Grid g = Grid::uniform(1.0, 3);
    Clamp c;
    c.position = Vec3(1.0, 2.0, 3.0);
    c.orientation = so3::exp_rodrigues(Vec3(0.3, -0.5, 0.2)).matrix();
    const DofMap m = DofMap::clamped(g, c);
    EXPECT_EQ(m.full_size(), kNodeDofs * g.nodes());
    EXPECT_EQ(m.free_size(), m.full_size() - kNodeDofs + 1);
    Rng rng;
    VecX z(m.free_size());
    for (int i = 0; i < z.size(); ++i) z[i] = rng.uniform();
    const DofVector d = DofVector::from_packed(m.expand(z));
    EXPECT_LT((d.r[0] - c.position).norm(), 1e-15);
    EXPECT_LT(d.t[0].cross(c.direction()).norm(), 1e-15);
    EXPECT_EQ(d.psi[0], 0.0);
    EXPECT_LT((m.restrict_to_free(m.expand(z)) - z).norm(), 1e-14);
    EXPECT_EQ(DofMap::clamped(g, Clamp::none()).free_size(), m.full_size());
}

TEST(Constraints, LiftedStateSatisfiesConstraints) {
    Rng rng;
    const Grid g = Grid::uniform(1.0, 8);
    const DofVector d = random_state(g, rng, 0.2);
    EXPECT_THROW(assemble_constraints(g, d), ValidationError);
    const DofVector lifted = statics::lift_bishop_composite(d, g);
    EXPECT_LT(assemble_constraints(g, lifted).max_abs(), 1e-12);
    DofVector bad = lifted;
    bad.rotations[3] = so3::exp_rodrigues(Vec3(0.2, 0.0, 0.0)).matrix() * bad.rotations[3];
    EXPECT_GT(assemble_constraints(g, bad).max_abs(), 1e-3);
}
