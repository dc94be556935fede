#include <gtest/gtest.h>

#include "rodsim/errors.hpp"
#include "rodsim/rod_model.hpp"
#include "test_support.hpp"

using namespace rodsim;
using namespace rodsim::rod;
using rodsim::testing::Rng;

namespace {

// Frame Lambda(s) = exp(s theta_p) Lambda0 sampled at s = 0 with its derivative.
struct FrameSample {
    so3::Rotation L;
    Mat3 Lp;
};

FrameSample frame_with_rate(const Vec3& th, const Vec3& w) {
    const Mat3 L = so3::exp_rodrigues(th).matrix();
    return {so3::Rotation(L), so3::hat(w) * L};
}

}  // namespace

TEST(RodModel, StraightUnstretchedRodHasZeroStrain) {
    const StrainState e = strains_general(E3, so3::Rotation(), Mat3::Zero());
    EXPECT_EQ(e.eps, 0.0);
    EXPECT_EQ(e.K.norm(), 0.0);
    EXPECT_EQ(e.tau, 0.0);
    EXPECT_EQ(stored_energy_density(e, MaterialLaw{}), 0.0);
}

TEST(RodModel, PureTwistAndBendingStrains) {
    const Vec3 w(0.3, -0.2, 0.7);
    const FrameSample f = frame_with_rate(Vec3::Zero(), w);
    const StrainState e = strains_general(1.1 * E3, f.L, f.Lp);
    EXPECT_NEAR(e.eps, 0.1, 1e-15);
    EXPECT_LT((e.omega - w).norm(), 1e-15);
    EXPECT_LT((e.K - Vec3(0.3, -0.2, 0.0)).norm(), 1e-15);
    EXPECT_NEAR(e.tau, 0.7, 1e-15);
    EXPECT_LT((e.kappa - Vec3(0.3, -0.2, 0.0)).norm(), 1e-15);
}

TEST(RodModel, ConvectedStrainsAreFrameInvariant) {
    Rng rng;
    for (int k = 0; k < 100; ++k) {
        const FrameSample f = frame_with_rate(rng.vec3(2.0), rng.vec3());
        const Vec3 rp = f.L.matrix().col(2) * 1.05 + 0.01 * rng.vec3();
        const Mat3 Q = so3::exp_rodrigues(rng.vec3(2.0)).matrix();
        const StrainState a = strains_general(rp, f.L, f.Lp);
        const StrainState b = strains_general(Q * rp, so3::Rotation(Q * f.L.matrix()), Q * f.Lp);
        EXPECT_NEAR(a.eps, b.eps, 1e-13);
        EXPECT_LT((a.K - b.K).norm(), 1e-13);
        EXPECT_NEAR(a.tau, b.tau, 1e-13);
        EXPECT_LT((a.Sigma - b.Sigma).norm(), 1e-13);
        EXPECT_LT((Q * a.omega - b.omega).norm(), 1e-13);
    }
}

TEST(RodModel, StrainsRejectNonSkewRate) {
    EXPECT_THROW(strains_general(E3, so3::Rotation(), Mat3::Identity()), ValidationError);
}

TEST(RodModel, TiStrainsOfHelix) {
    // Unit-speed helix of curvature a, stretched by 2: |K| = 2a per reference length.
    const double a = 0.6, b = 0.8, s = 0.4;
    const Vec3 rp(-a * std::sin(s), a * std::cos(s), b), rpp(-a * std::cos(s), -a * std::sin(s), 0.0);
    const TIStrains e = strains_ti(2.0 * rp, 4.0 * rpp, 0.3);
    EXPECT_NEAR(e.eps, 1.0, 1e-15);
    EXPECT_NEAR(e.absK, 2.0 * a, 1e-14);
    EXPECT_NEAR(e.tau, 0.3, 0.0);
    EXPECT_THROW(strains_ti(Vec3::Zero(), rpp, 0.0), RegularityError);
}

TEST(RodModel, StoredEnergyIsQuadraticInStrain) {
    const MaterialLaw law{10.0, 2.0, 3.0, 4.0};
    StrainState e;
    e.eps = 0.1;
    e.K = Vec3(0.2, 0.3, 0.0);
    e.tau = 0.4;
    const double W = 0.5 * 10.0 * 0.01 + 0.5 * 2.0 * 0.04 + 0.5 * 3.0 * 0.09 + 0.5 * 4.0 * 0.16;
    EXPECT_NEAR(stored_energy_density(e, law), W, 1e-15);
    StrainState e2 = e;
    e2.eps *= 2.0;
    e2.K *= 2.0;
    e2.tau *= 2.0;
    EXPECT_NEAR(stored_energy_density(e2, law), 4.0 * W, 1e-14);
}

TEST(RodModel, TiEnergyMatchesGeneralForIsotropicLaw) {
    Rng rng;
    const MaterialLaw law = MaterialLaw::transversely_isotropic(50.0, 2.0, 3.0);
    for (int k = 0; k < 50; ++k) {
        const FrameSample f = frame_with_rate(rng.vec3(2.0), rng.vec3());
        const StrainState g = strains_general(f.L.matrix().col(2) * 1.2, f.L, f.Lp);
        const TIStrains t{g.eps, g.K.norm(), g.tau};
        EXPECT_NEAR(stored_energy_density(g, law), stored_energy_density(t, law), 1e-12);
    }
}

TEST(RodModel, StressResultantsAreEnergyConjugates) {
    const MaterialLaw law{10.0, 2.0, 3.0, 4.0};
    const FrameSample f = frame_with_rate(Vec3(0.2, 0.1, -0.3), Vec3(0.3, -0.2, 0.5));
    const StrainState e = strains_general(f.L.matrix().col(2) * 1.1, f.L, f.Lp);
    const StressResultants s = stress_resultants(e, law, f.L);
    const Mat3& L = f.L.matrix();
    EXPECT_LT((s.n_par - 10.0 * e.eps * L.col(2)).norm(), 1e-14);
    EXPECT_LT((L.transpose() * s.m_perp - Vec3(2.0 * e.K[0], 3.0 * e.K[1], 0.0)).norm(), 1e-14);
    EXPECT_NEAR(s.m_par, 4.0 * e.tau, 1e-15);
    EXPECT_EQ(s.n_perp.norm(), 0.0);
}

TEST(RodModel, TiStressResultants) {
    const MaterialLaw law = MaterialLaw::transversely_isotropic(5.0, 2.0, 3.0);
    const StressResultants s = stress_resultants_ti(Vec3(0, 0, 1.2), Vec3(0.6, 0, 0), 0.25, law);
    EXPECT_LT((s.n_par - Vec3(0, 0, 1.0)).norm(), 1e-14);
    EXPECT_LT((s.m_perp - Vec3(0, 1.0, 0)).norm(), 1e-14);
    EXPECT_NEAR(s.m_par, 0.75, 1e-15);
}

TEST(RodModel, RotationalEnergyFormsCoincide) {
    Rng rng;
    SectionInertia in;
    in.I_perp << 2.0, 0.3, 0.3, 1.0;
    in.I_par = 2.5;
    for (int k = 0; k < 200; ++k) {
        const std::array<double, 4> f = rotational_energy_forms(rng.vec3(3.0), so3::exp_rodrigues(rng.vec3(2.0)), in);
        for (int j = 1; j < 4; ++j) EXPECT_NEAR(f[j], f[0], 1e-12 * (1.0 + f[0]));
    }
}

TEST(RodModel, KineticModesAgreeWithoutDrill) {
    // For w orthogonal to d, |d_dot| = |w| and the two forms differ only in
    // how the twist rate enters.
    const SectionInertia in = SectionInertia::transversely_isotropic(2.0, 0.5, 1.5);
    PointRates x;
    x.v = Vec3(1.0, 0.0, -1.0);
    x.Lambda = so3::exp_rodrigues(Vec3(0.3, 0.2, 0.1));
    const Vec3 d = x.Lambda.matrix().col(2);
    const Vec3 w_perp = d.unitOrthogonal() * 0.7;
    x.w = w_perp + 0.4 * d;
    x.d_dot = w_perp.cross(d);
    x.psi_dot = 0.4;
    EXPECT_NEAR(kinetic_energy_density(x, in, KineticMode::full),
                kinetic_energy_density(x, in, KineticMode::regularized), 1e-14);
    EXPECT_NEAR(kinetic_energy_density(x, in, KineticMode::regularized),
                0.5 * 2.0 * 2.0 + 0.5 * 0.5 * 0.49 + 0.5 * 1.5 * 0.16, 1e-14);
}

TEST(RodModel, MomentaContractToTwiceKineticEnergy) {
    const SectionInertia in = SectionInertia::transversely_isotropic(2.0, 0.5, 1.5);
    const so3::Rotation L = so3::exp_rodrigues(Vec3(0.1, -0.4, 0.2));
    const Vec3 v(0.2, 0.3, -0.1), w = L.matrix().col(2).unitOrthogonal() * 0.9;
    const Momenta m = momenta(v, w, 0.6, in, L);
    EXPECT_NEAR(m.p.dot(v) + m.pi_perp.dot(w) + m.pi_par * 0.6,
                2.0 * 2.0 * 0.5 * v.squaredNorm() + 0.5 * 0.81 + 1.5 * 0.36, 1e-14);
    EXPECT_THROW(momenta(v, L.matrix().col(2), 0.0, in, L), ValidationError);
}

TEST(RodModel, Validation) {
    EXPECT_THROW((MaterialLaw{1.0, -1.0, 1.0, 1.0}.validate()), ValidationError);
    EXPECT_THROW((MaterialLaw{std::nan(""), 1.0, 1.0, 1.0}.validate()), ValidationError);
    EXPECT_NO_THROW(MaterialLaw{}.validate());
    SectionInertia in;
    in.I_perp << 1.0, 0.0, 0.0, 2.0;
    EXPECT_FALSE(in.isotropic());
    EXPECT_THROW(in.i_perp(), ValidationError);
    in.A_rho = 0.0;
    EXPECT_THROW(in.validate(), ValidationError);
    EXPECT_TRUE(MaterialLaw::transversely_isotropic(1, 2, 3).transversely_isotropic());
}
