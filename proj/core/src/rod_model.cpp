#include "rodsim/rod_model.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "rodsim/errors.hpp"

namespace rodsim::rod {

namespace {

bool positive(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

void MaterialLaw::validate() const {
    if (!positive(EA)) throw ValidationError("material.EA must be positive");
    if (!positive(EI1)) throw ValidationError("material.EI1 must be positive");
    if (!positive(EI2)) throw ValidationError("material.EI2 must be positive");
    if (!positive(GJ)) throw ValidationError("material.GJ must be positive");
}

bool SectionInertia::isotropic() const {
    return I_perp(0, 1) == 0.0 && I_perp(1, 0) == 0.0 && I_perp(0, 0) == I_perp(1, 1);
}

double SectionInertia::i_perp() const {
    if (!isotropic()) throw ValidationError("section inertia is not transversely isotropic");
    return I_perp(0, 0);
}

Mat3 SectionInertia::convected() const {
    Mat3 I = Mat3::Zero();
    I.topLeftCorner<2, 2>() = I_perp;
    I(2, 2) = I_par;
    return I;
}

void SectionInertia::validate() const {
    if (!positive(A_rho)) throw ValidationError("inertia.A_rho must be positive");
    if (!positive(I_par)) throw ValidationError("inertia.I_par must be positive");
    if (std::abs(I_perp(0, 1) - I_perp(1, 0)) > 1e-14 * I_perp.norm()) {
        throw ValidationError("inertia.I_perp must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Mat2> es(I_perp);
    if (!(es.eigenvalues().minCoeff() > 0.0)) {
        throw ValidationError("inertia.I_perp must be positive definite");
    }
}

StrainState strains_general(const Vec3& rp, const so3::Rotation& Lambda, const Mat3& Lambda_p) {
    const Mat3& L = Lambda.matrix();
    const Mat3 W = Lambda_p * L.transpose();
    if ((W + W.transpose()).cwiseAbs().maxCoeff() > 1e-8) {
        throw ValidationError("strains_general: Lambda' Lambda^T is not skew-symmetric");
    }
    const Vec3 e3 = L.col(2);
    StrainState e;
    e.eps = rp.dot(e3) - 1.0;
    e.gamma = rp - e3;
    e.omega = so3::axial_of_skew_part<double>(W);
    e.Omega = L.transpose() * e.omega;
    e.K = e.Omega - e.Omega[2] * E3;
    e.tau = L.col(1).dot(Lambda_p.col(0));
    e.kappa = e.omega - e.omega.dot(e3) * e3;
    e.Sigma = L.transpose() * (e.gamma - e.eps * e3);
    return e;
}

TIStrains strains_ti(const Vec3& rp, const Vec3& rpp, double psi_p) {
    const double l = rp.norm();
    if (!(l > 0.0)) throw RegularityError("strains_ti: zero tangent");
    const Vec3 d = rp / l;
    const Vec3 dp = (rpp - d.dot(rpp) * d) / l;
    return TIStrains{l - 1.0, dp.norm(), psi_p};
}

double stored_energy_density(const StrainState& e, const MaterialLaw& law) {
    return 0.5 * law.EA * e.eps * e.eps + 0.5 * law.EI1 * e.K[0] * e.K[0] +
           0.5 * law.EI2 * e.K[1] * e.K[1] + 0.5 * law.GJ * e.tau * e.tau;
}

double stored_energy_density(const TIStrains& e, const MaterialLaw& law) {
    return 0.5 * law.EA * e.eps * e.eps + 0.5 * law.EI1 * e.absK * e.absK +
           0.5 * law.GJ * e.tau * e.tau;
}

StressResultants stress_resultants(const StrainState& e, const MaterialLaw& law,
                                   const so3::Rotation& Lambda) {
    const Mat3& L = Lambda.matrix();
    StressResultants s;
    s.n_par = law.EA * e.eps * L.col(2);
    s.m_perp = L * Vec3(law.EI1 * e.K[0], law.EI2 * e.K[1], 0.0);
    s.m_par = law.GJ * e.tau;
    return s;
}

StressResultants stress_resultants_ti(const Vec3& rp, const Vec3& rpp, double psi_p,
                                      const MaterialLaw& law) {
    const double l = rp.norm();
    if (!(l > 0.0)) throw RegularityError("stress_resultants_ti: zero tangent");
    const Vec3 d = rp / l;
    const Vec3 dp = (rpp - d.dot(rpp) * d) / l;
    StressResultants s;
    s.n_par = law.EA * (l - 1.0) * d;
    s.m_perp = law.EI1 * d.cross(dp);
    s.m_par = law.GJ * psi_p;
    return s;
}

double kinetic_energy_density(const PointRates& x, const SectionInertia& inertia,
                              KineticMode mode) {
    const double translational = 0.5 * inertia.A_rho * x.v.squaredNorm();
    if (mode == KineticMode::regularized) {
        const double ip = inertia.i_perp();
        return translational + 0.5 * ip * x.d_dot.squaredNorm() +
               0.5 * inertia.I_par * x.psi_dot * x.psi_dot;
    }
    const Mat3& L = x.Lambda.matrix();
    const Mat3 i_rho = L * inertia.convected() * L.transpose();
    return translational + 0.5 * x.w.dot(i_rho * x.w);
}

std::array<double, 4> rotational_energy_forms(const Vec3& w, const so3::Rotation& Lambda,
                                              const SectionInertia& inertia) {
    const Mat3& L = Lambda.matrix();
    const Mat3 I = inertia.convected();
    const Mat3 i_rho = L * I * L.transpose();
    const Vec3 W = L.transpose() * w;
    const Vec3 e3 = L.col(2);

    Mat3 I_perp3 = Mat3::Zero();
    I_perp3.topLeftCorner<2, 2>() = inertia.I_perp;
    const Mat3 i_perp = L * I_perp3 * L.transpose();
    const double w_par = w.dot(e3);
    const Vec3 w_perp = w - w_par * e3;
    const Vec3 W_perp(W[0], W[1], 0.0);

    return {0.5 * w.dot(i_rho * w), 0.5 * W.dot(I * W),
            0.5 * w_perp.dot(i_perp * w_perp) + 0.5 * inertia.I_par * w_par * w_par,
            0.5 * W_perp.dot(I_perp3 * W_perp) + 0.5 * inertia.I_par * W[2] * W[2]};
}

Momenta momenta(const Vec3& v, const Vec3& w_perp, double psi_dot, const SectionInertia& inertia,
                const so3::Rotation& Lambda) {
    const Mat3& L = Lambda.matrix();
    if (std::abs(w_perp.dot(L.col(2))) > 1e-10 * (1.0 + w_perp.norm())) {
        throw ValidationError("momenta: w_perp is not orthogonal to e3");
    }
    Mat3 I_perp3 = Mat3::Zero();
    I_perp3.topLeftCorner<2, 2>() = inertia.I_perp;
    Momenta m;
    m.p = inertia.A_rho * v;
    m.pi_perp = L * I_perp3 * L.transpose() * w_perp;
    m.pi_par = inertia.I_par * psi_dot;
    return m;
}

}  // namespace rodsim::rod
