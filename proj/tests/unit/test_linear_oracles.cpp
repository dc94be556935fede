#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rodsim/errors.hpp"
#include "rodsim/linear_oracles.hpp"

using namespace rodsim;
using namespace rodsim::oracle;

namespace {

// Independent bracketed bisection on cos(x) cosh(x) + 1.
double bisect_root(double lo, double hi) {
    auto f = [](double x) { return std::cos(x) * std::cosh(x) + 1.0; };
    for (int i = 0; i < 200; ++i) {
        const double m = 0.5 * (lo + hi);
        (f(lo) * f(m) <= 0.0 ? hi : lo) = m;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST(Oracles, FrequencyRoots) {
    const std::vector<double> x = frequency_roots(5);
    ASSERT_EQ(x.size(), 5u);
    EXPECT_NEAR(x[0], 1.8751040687, 1e-9);
    EXPECT_NEAR(x[1], 4.6940911330, 1e-9);
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double pi = std::numbers::pi;
        EXPECT_NEAR(x[k], bisect_root((k + 0.5) * pi - 1.0, (k + 0.5) * pi + 0.5), 1e-10);
        EXPECT_LT(std::abs(std::cos(x[k]) * std::cosh(x[k]) + 1.0), 1e-10);
    }
    // Asymptotically (2k - 1) pi / 2.
    EXPECT_NEAR(x[4], 4.5 * std::numbers::pi, 1e-5);
    EXPECT_THROW(frequency_roots(0), ValidationError);
}

TEST(Oracles, EulerBernoulliClosedForm) {
    LinearBeamParams p;
    p.E = 2.0;
    p.I11 = 0.5;
    p.rho = 3.0;
    p.A = 0.25;
    p.L = 2.0;
    const double b1 = frequency_roots(1)[0];
    EXPECT_NEAR(euler_bernoulli_omega(p, 1), b1 * b1 / (p.L * p.L) * std::sqrt(p.E * p.I11 / (p.rho * p.A)), 1e-12);
}

TEST(Oracles, RayleighWithoutRotaryInertiaMatchesEulerBernoulli) {
    LinearBeamParams p;
    const ModalResult m = rayleigh_operator(p, 3, 64, false);
    ASSERT_EQ(m.omega.size(), 3u);
    for (int k = 1; k <= 3; ++k) EXPECT_LT(std::abs(m.omega[k - 1] / euler_bernoulli_omega(p, k) - 1.0), 1e-3);
    EXPECT_EQ(m.shapes.cols(), 3);
    EXPECT_EQ(m.shapes.rows(), 2 * 64);
}

TEST(Oracles, RayleighConvergesUnderRefinement) {
    LinearBeamParams p;
    double prev = 0.0;
    for (int ne : {2, 4, 8}) {
        const double err = std::abs(rayleigh_operator(p, 2, ne, false).omega[1] / euler_bernoulli_omega(p, 2) - 1.0);
        if (prev > 0.0) EXPECT_GT(prev / err, 4.0);
        prev = err;
    }
}

TEST(Oracles, RotaryInertiaLowersFrequencies) {
    LinearBeamParams p;
    p.I11 = 1e-2;
    const ModalResult with = rayleigh_operator(p, 4, 32, true);
    const ModalResult without = rayleigh_operator(p, 4, 32, false);
    for (int k = 0; k < 4; ++k) EXPECT_LT(with.omega[k], without.omega[k]);
    // The correction vanishes with slenderness.
    p.I11 = 1e-8;
    const double a = rayleigh_operator(p, 1, 32, true).omega[0], b = rayleigh_operator(p, 1, 32, false).omega[0];
    EXPECT_LT(std::abs(a / b - 1.0), 1e-6);
}

TEST(Oracles, WaveFrequencies) {
    LinearBeamParams p;
    p.E = 4.0;
    p.G = 9.0;
    p.rho = 1.0;
    p.L = 0.5;
    // Quarter-wave modes: omega_k = (2k - 1) pi c / (2 L).
    EXPECT_NEAR(axial_omega(p, 1), std::numbers::pi * 2.0 / 1.0, 1e-12);
    EXPECT_NEAR(torsion_omega(p, 2), 3.0 * std::numbers::pi * 3.0 / 1.0, 1e-12);
}

TEST(Oracles, CantileverStatics) {
    EXPECT_NEAR(cantilever_statics(CantileverLoad::tip_force, 1.0, 1.0, 1.0, 1.0), 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(cantilever_statics(CantileverLoad::tip_torque, 1.0, 1.0, 2.0, 1.0), 0.5, 1e-15);
    EXPECT_NEAR(cantilever_statics(CantileverLoad::buckling, 0.0, 1.0, 1.0, 1.0),
                std::numbers::pi * std::numbers::pi / 4.0, 1e-15);
    EXPECT_NEAR(cantilever_statics(CantileverLoad::end_moment, 3.0, 2.0, 1.0, 1.0), 1.5, 1e-15);
}

TEST(Oracles, ParameterValidation) {
    LinearBeamParams p;
    p.rho = 0.0;
    EXPECT_THROW(p.validate(), ValidationError);
    EXPECT_THROW(rayleigh_operator(p, 1), ValidationError);
    EXPECT_THROW(rayleigh_operator(LinearBeamParams{}, 0), ValidationError);
}
