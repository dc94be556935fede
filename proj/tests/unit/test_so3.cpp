#include <gtest/gtest.h>

#include <numbers>

#include "rodsim/errors.hpp"
#include "rodsim/so3.hpp"
#include "test_support.hpp"

using namespace rodsim;
using namespace rodsim::so3;
using rodsim::testing::Rng;

namespace {

Mat3 fd_exp_derivative(const Vec3& th, const Vec3& dir, double h) {
    return (exp_rodrigues(th + h * dir).matrix() - exp_rodrigues(th - h * dir).matrix()) / (2.0 * h);
}

}  // namespace

TEST(So3, HatAxialRoundTrip) {
    Rng rng;
    for (int k = 0; k < 100; ++k) {
        const Vec3 w = rng.vec3(3.0), v = rng.vec3();
        EXPECT_LT((axial(hat(w)) - w).norm(), 1e-15);
        EXPECT_LT((hat(w) * v - w.cross(v)).norm(), 1e-14);
    }
    EXPECT_THROW(axial(Mat3::Identity()), ValidationError);
}

TEST(So3, ExpIsProperOrthogonalAcrossRegimes) {
    Rng rng;
    for (double scale : {1e-9, 1e-5, 1e-4, 1e-3, 1.0, 3.0, std::numbers::pi - 1e-9}) {
        for (int k = 0; k < 50; ++k) {
            const Vec3 th = scale * rng.unit();
            const Rotation R = exp_rodrigues(th);
            EXPECT_LT(R.orthonormality_error(), 1e-13) << "scale " << scale;
            EXPECT_LT((R * th - th).norm(), 1e-13 * (1.0 + th.norm()));
        }
    }
    EXPECT_EQ(exp_rodrigues(Vec3::Zero()).matrix(), Mat3::Identity());
}

TEST(So3, ExpMatchesQuarterTurn) {
    const Mat3 R = exp_rodrigues(0.5 * std::numbers::pi * E3).matrix();
    EXPECT_LT((R * E1 - E2).norm(), 1e-15);
    EXPECT_LT((R * E2 + E1).norm(), 1e-15);
}

TEST(So3, ExpSeriesBranchIsContinuous) {
    const Vec3 n = Vec3(1.0, 2.0, -0.5).normalized();
    const double t = kSeriesThreshold;
    const Mat3 a = exp_rodrigues((t * (1.0 - 1e-12)) * n).matrix();
    const Mat3 b = exp_rodrigues((t * (1.0 + 1e-12)) * n).matrix();
    EXPECT_LT((a - b).cwiseAbs().maxCoeff(), 1e-14);
    const Mat3 da = dexp((t * (1.0 - 1e-12)) * n), db = dexp((t * (1.0 + 1e-12)) * n);
    EXPECT_LT((da - db).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(So3, DexpAgreesWithFiniteDifferences) {
    Rng rng;
    for (int k = 0; k < 200; ++k) {
        const Vec3 th = rng.vec3(2.5), dir = rng.unit();
        const Mat3 fd = fd_exp_derivative(th, dir, 1e-6);
        const Mat3 an = hat(Vec3(dexp(th) * dir)) * exp_rodrigues(th).matrix();
        EXPECT_LT((fd - an).norm() / an.norm(), 1e-6);
    }
}

TEST(So3, DexpAtZeroIsIdentity) { EXPECT_LT((dexp(Vec3::Zero()) - Mat3::Identity()).norm(), 1e-15); }

TEST(So3, RotationRejectsNonOrthogonal) {
    Mat3 m = Mat3::Identity();
    m(0, 1) = 1e-6;
    EXPECT_THROW(Rotation{m}, ValidationError);
    EXPECT_THROW(Rotation{Mat3(-Mat3::Identity())}, ValidationError);
    EXPECT_NO_THROW(Rotation{exp_rodrigues(Vec3(0.1, 0.2, 0.3)).matrix()});
}

TEST(So3, DirectorNormalizesAndRejectsZero) {
    EXPECT_NEAR(Director(Vec3(3, 0, 4)).vec().norm(), 1.0, 1e-15);
    EXPECT_THROW(Director(Vec3::Zero()), ValidationError);
}

TEST(So3, ChiCarriesSourceToTargetWithoutDrill) {
    Rng rng;
    for (int k = 0; k < 500; ++k) {
        const Director d0(rng.unit()), d(rng.unit());
        if (d0.vec().dot(d.vec()) < -0.999) continue;
        const Rotation C = chi_no_drill(d0, d);
        EXPECT_LT(C.orthonormality_error(), 1e-12);
        EXPECT_LT((C * d0.vec() - d.vec()).norm(), 1e-12);
        // The rotation axis is d0 x d, so that vector is fixed.
        const Vec3 k0 = d0.vec().cross(d.vec());
        EXPECT_LT((C * k0 - k0).norm(), 1e-12);
    }
}

TEST(So3, ChiOfEqualDirectorsIsIdentity) {
    const Director d(Vec3(0.3, -0.2, 0.9));
    EXPECT_LT((chi_no_drill(d, d).matrix() - Mat3::Identity()).norm(), 1e-15);
}

TEST(So3, ChiThrowsNearAntipodal) {
    const Director d(Vec3(0.0, 0.6, 0.8));
    EXPECT_THROW(chi_no_drill(d, -d), SingularDrillFreeMap);
    EXPECT_THROW(composite_rotation(0.3, d, -d), SingularDrillFreeMap);
}

TEST(So3, CompositeAddsTwistAboutTarget) {
    Rng rng;
    for (int k = 0; k < 200; ++k) {
        const Director d0(rng.unit()), d(rng.unit());
        if (d0.vec().dot(d.vec()) < -0.99) continue;
        const double psi = rng.uniform(-3.0, 3.0);
        const Rotation T = composite_rotation(psi, d0, d);
        EXPECT_LT((T * d0.vec() - d.vec()).norm(), 1e-12);
        const Vec3 u = (chi_no_drill(d0, d) * d0.vec().unitOrthogonal());
        EXPECT_NEAR(signed_angle(u, T * d0.vec().unitOrthogonal(), d.vec()), wrap_angle(psi), 1e-12);
    }
}

TEST(So3, SplitRecomposes) {
    Rng rng;
    for (int k = 0; k < 300; ++k) {
        const Director d0(rng.unit()), d(rng.unit());
        if (d0.vec().dot(d.vec()) < -0.99) continue;
        const Rotation T = composite_rotation(rng.uniform(-3, 3), d0, d);
        const RotationSplit sp = split(T, d0, d);
        EXPECT_LT((sp.tangential + sp.directorial - T.matrix()).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((sp.tangential * d0.vec()).norm(), 1e-12);
        const Vec3 v = d0.vec().unitOrthogonal();
        EXPECT_LT(std::abs(d.vec().dot(sp.tangential * v)), 1e-12);
    }
}

TEST(So3, SplitRejectsNonSplittingMap) {
    const Director d0(E3), d(E1);
    EXPECT_THROW(split(Rotation(), d0, d), NotASplittingMap);
}

TEST(So3, WrapAndSignedAngle) {
    EXPECT_NEAR(wrap_angle(3.0 * std::numbers::pi), std::numbers::pi, 1e-12);
    EXPECT_NEAR(wrap_angle(-std::numbers::pi), std::numbers::pi, 1e-12);
    EXPECT_NEAR(wrap_angle(0.25), 0.25, 0.0);
    EXPECT_NEAR(signed_angle(E1, E2, E3), 0.5 * std::numbers::pi, 1e-15);
    EXPECT_NEAR(signed_angle(E2, E1, E3), -0.5 * std::numbers::pi, 1e-15);
}
