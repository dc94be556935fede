#include <gtest/gtest.h>

#include <numbers>

#include "rodsim/errors.hpp"
#include "rodsim/frames.hpp"
#include "test_support.hpp"

using namespace rodsim;
using namespace rodsim::frames;

namespace {

constexpr double kPi = std::numbers::pi;

// Unit-speed helix whose tangent runs once around the circle of colatitude a.
SampledCurve tangent_circle(double a, int n) {
    SampledCurve c;
    const double w = 2.0 * kPi, rho = std::sin(a) / w;
    for (int i = 0; i <= n; ++i) {
        const double s = static_cast<double>(i) / n, p = w * s;
        c.s.push_back(s);
        c.r.push_back(Vec3(rho * std::sin(p), -rho * std::cos(p), s * std::cos(a)));
        c.rp.push_back(Vec3(std::sin(a) * std::cos(p), std::sin(a) * std::sin(p), std::cos(a)));
        c.rpp.push_back(w * std::sin(a) * Vec3(-std::sin(p), std::cos(p), 0.0));
    }
    return c;
}

so3::Director start_normal(double a) { return so3::Director(Vec3(std::cos(a), 0.0, -std::sin(a))); }

RotationField smooth_rotation_field(int ns, int nt) {
    const double ds = 1.0 / (ns - 1), dt = 1.0 / (nt - 1);
    RotationField L(ns, nt, ds, dt);
    for (int i = 0; i < ns; ++i) {
        for (int j = 0; j < nt; ++j) {
            const double s = i * ds, t = j * dt;
            const Vec3 th(0.3 * std::sin(2.0 * s) * std::cos(t), 0.4 * s * t + 0.2, 0.5 * std::cos(s + 2.0 * t));
            L(i, j) = so3::exp_rodrigues(th).matrix();
        }
    }
    return L;
}

template <typename F>
double max_abs(const F& f) {
    double m = 0.0;
    for (const auto& v : f.data) {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, double>) m = std::max(m, std::abs(v));
        else m = std::max(m, v.norm());
    }
    return m;
}

}  // namespace

class Holonomy : public ::testing::TestWithParam<double> {};

TEST_P(Holonomy, EqualsEnclosedArea) {
    const double a = GetParam() * kPi / 180.0;
    const SampledCurve c = tangent_circle(a, 10000);
    const FrameField f = bishop_transport(c, start_normal(a));
    const double area = 2.0 * kPi * (1.0 - std::cos(a));
    EXPECT_LT(std::abs(std::remainder(holonomy(f) - area, 2.0 * kPi)), 1e-4);
    const double drill = accumulated_correction_angle(c, so3::Director(E3), 1.0);
    EXPECT_NEAR(std::abs(drill), area, 1e-4);
}

INSTANTIATE_TEST_SUITE_P(Colatitudes, Holonomy, ::testing::Values(30.0, 60.0, 90.0, 135.0));

TEST(Frames, HolonomyIsPositiveForCounterclockwiseLoop) {
    const double a = kPi / 6.0;
    const FrameField f = bishop_transport(tangent_circle(a, 4000), start_normal(a));
    EXPECT_NEAR(holonomy(f), 2.0 * kPi * (1.0 - std::cos(a)), 1e-4);
}

TEST(Frames, HolonomyErrorIsSecondOrderInSamples) {
    const double a = kPi / 4.0, area = 2.0 * kPi * (1.0 - std::cos(a));
    double prev = 0.0;
    for (int n : {100, 200, 400}) {
        const double e = std::abs(holonomy(bishop_transport(tangent_circle(a, n), start_normal(a))) - area);
        if (prev > 0.0) EXPECT_GT(prev / e, 3.5);
        prev = e;
    }
}

TEST(Frames, BishopFramesAreOrthonormalAndTwistFree) {
    const double a = 1.0;
    const SampledCurve c = tangent_circle(a, 2000);
    const FrameField f = bishop_transport(c, start_normal(a));
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Mat3 m = f[i].matrix();
        EXPECT_LT((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_NEAR(m.determinant(), 1.0, 1e-12);
        EXPECT_LT((f[i].d - c.tangent(i)).norm(), 1e-14);
        if (i > 0) {
            // Rotation-minimizing: u' has no component along v.
            const double du_v = (f[i].u - f[i - 1].u).dot(0.5 * (f[i].v + f[i - 1].v));
            EXPECT_LT(std::abs(du_v), 1e-9);
        }
    }
}

TEST(Frames, BishopRejectsNonNormalStart) {
    const SampledCurve c = tangent_circle(0.5, 10);
    EXPECT_THROW(bishop_transport(c, so3::Director(c.tangent(0))), ValidationError);
}

TEST(Frames, HolonomyRejectsOpenLoop) {
    SampledCurve c = tangent_circle(0.5, 100);
    c.s.resize(60);
    c.r.resize(60);
    c.rp.resize(60);
    c.rpp.resize(60);
    EXPECT_THROW(holonomy(bishop_transport(c, start_normal(0.5))), ValidationError);
}

TEST(Frames, TwistedRotatesAboutTangent) {
    const SampledCurve c = tangent_circle(0.7, 50);
    const FrameField f = bishop_transport(c, start_normal(0.7));
    std::vector<double> psi(f.size());
    for (std::size_t i = 0; i < psi.size(); ++i) psi[i] = 0.1 * static_cast<double>(i);
    const FrameField g = twisted(f, psi);
    for (std::size_t i = 0; i < f.size(); ++i) {
        EXPECT_NEAR(so3::signed_angle(f[i].u, g[i].u, f[i].d), so3::wrap_angle(psi[i]), 1e-12);
        EXPECT_LT((g[i].d - f[i].d).norm(), 0.0 + 1e-15);
    }
    EXPECT_THROW(twisted(f, std::vector<double>(3)), ValidationError);
}

TEST(Frames, DarbouxOfTwistedStraightLine) {
    SampledCurve c;
    std::vector<double> psi;
    for (int i = 0; i <= 20; ++i) {
        const double s = 0.05 * i;
        c.s.push_back(s);
        c.r.push_back(s * E3);
        c.rp.push_back(E3);
        c.rpp.push_back(Vec3::Zero());
        psi.push_back(0.7 * s);
    }
    for (const Vec3& w : darboux(c, psi)) EXPECT_LT((w - 0.7 * E3).norm(), 1e-12);
}

TEST(Frames, DarbouxBendingPartOfHelix) {
    const double a = 0.8;
    const SampledCurve c = tangent_circle(a, 200);
    const std::vector<Vec3> w = darboux(c, std::vector<double>(c.size(), 0.0));
    for (const Vec3& x : w) EXPECT_NEAR(x.norm(), 2.0 * kPi * std::sin(a), 1e-10);
}

TEST(Frames, DrillFreeDensityIntegratesToProfile) {
    const double a = 0.9;
    const SampledCurve c = tangent_circle(a, 4000);
    const so3::Director d0(E3);
    const std::vector<double> dens = drill_free_torsion_density(c, d0);
    const std::vector<double> prof = correction_angle_profile(c, d0);
    ASSERT_EQ(prof.size(), c.size());
    EXPECT_EQ(prof.front(), 0.0);
    // Constant density on the tangent circle, so the profile is linear.
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(prof[i], -dens[0] * c.s[i], 1e-10);
    EXPECT_NEAR(accumulated_correction_angle(c, d0, 0.5), prof[2000], 1e-12);
}

TEST(Frames, DrillFreeDensityThrowsAtAntipode) {
    const SampledCurve c = tangent_circle(0.5, 20);
    EXPECT_THROW(drill_free_torsion_density(c, so3::Director(-c.tangent(3))), SingularDrillFreeMap);
}

TEST(Frames, SplineReconstructionOfCircle) {
    std::vector<double> s;
    std::vector<Vec3> r;
    const int n = 400;
    for (int i = 0; i <= n; ++i) {
        const double x = 2.0 * i / n;
        s.push_back(x);
        r.push_back(Vec3(std::cos(x), std::sin(x), 0.0));
    }
    const SampledCurve c = SampledCurve::from_positions(s, r, Vec3(0, 1, 0), Vec3(-std::sin(2.0), std::cos(2.0), 0));
    for (std::size_t i = 0; i < c.size(); ++i) {
        EXPECT_LT((c.rp[i] - Vec3(-std::sin(s[i]), std::cos(s[i]), 0.0)).norm(), 1e-7);
        EXPECT_LT((c.rpp[i] + r[i]).norm(), 1e-4);
    }
}

TEST(Frames, CurveValidation) {
    SampledCurve c = tangent_circle(0.5, 10);
    c.s[3] = c.s[2];
    EXPECT_THROW(c.validate(), ValidationError);
    SampledCurve d = tangent_circle(0.5, 10);
    d.rp[4] = Vec3::Zero();
    EXPECT_THROW(d.validate(), RegularityError);
    SampledCurve e = tangent_circle(0.5, 10);
    e.r.pop_back();
    EXPECT_THROW(e.validate(), ValidationError);
}

TEST(Frames, CompatibilityResidualConvergesAtSecondOrder) {
    double prev_c = 0.0, prev_t = 0.0;
    for (int n : {21, 41, 81}) {
        const RotationField L = smooth_rotation_field(n, n);
        const StrainAndSpin sw = convected_strain_and_spin(L);
        const double rc = max_abs(compatibility_residual(sw.Omega, sw.W));
        const double rt = max_abs(torsion_spin_identity_residual(L));
        if (prev_c > 0.0) {
            EXPECT_GT(prev_c / rc, 3.0);
            EXPECT_GT(prev_t / rt, 3.0);
        }
        prev_c = rc;
        prev_t = rt;
    }
    EXPECT_LT(prev_c, 1e-3);
    EXPECT_LT(prev_t, 1e-3);
}

TEST(Frames, CompatibilityDetectsInconsistentFields) {
    const RotationField L = smooth_rotation_field(41, 41);
    StrainAndSpin sw = convected_strain_and_spin(L);
    for (auto& w : sw.W.data) w += Vec3(0.0, 0.0, 0.1) * w.norm();
    EXPECT_GT(max_abs(compatibility_residual(sw.Omega, sw.W)), 1e-2);
}
