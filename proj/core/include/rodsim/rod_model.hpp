#pragma once

#include <array>

#include "rodsim/so3.hpp"
#include "rodsim/types.hpp"

namespace rodsim::rod {

struct MaterialLaw {
    double EA = 1.0;   // N
    double EI1 = 1.0;  // N m^2
    double EI2 = 1.0;  // N m^2
    double GJ = 1.0;   // N m^2

    static MaterialLaw transversely_isotropic(double EA, double EI, double GJ) {
        return MaterialLaw{EA, EI, EI, GJ};
    }
    bool transversely_isotropic() const { return EI1 == EI2; }
    // Throws ValidationError unless every stiffness is finite and positive.
    void validate() const;
};

struct SectionInertia {
    double A_rho = 1.0;                    // kg/m
    Mat2 I_perp = Mat2::Identity();        // kg m
    double I_par = 2.0;                    // kg m

    static SectionInertia transversely_isotropic(double A_rho, double i_perp, double i_par) {
        return SectionInertia{A_rho, i_perp * Mat2::Identity(), i_par};
    }
    bool isotropic() const;
    // Scalar in-plane inertia; throws ValidationError for anisotropic sections.
    double i_perp() const;
    // Convected inertia tensor diag(I_perp, I_par).
    Mat3 convected() const;
    void validate() const;
};

struct StrainState {
    double eps = 0.0;
    Vec3 Sigma = Vec3::Zero();
    Vec3 K = Vec3::Zero();
    double tau = 0.0;
    Vec3 kappa = Vec3::Zero();
    Vec3 omega = Vec3::Zero();
    Vec3 Omega = Vec3::Zero();
    Vec3 gamma = Vec3::Zero();
};

struct TIStrains {
    double eps = 0.0;
    double absK = 0.0;
    double tau = 0.0;
};

struct StressResultants {
    Vec3 n_par = Vec3::Zero();
    Vec3 n_perp = Vec3::Zero();
    Vec3 m_perp = Vec3::Zero();
    double m_par = 0.0;
};

struct Momenta {
    Vec3 p = Vec3::Zero();
    Vec3 pi_perp = Vec3::Zero();
    double pi_par = 0.0;
};

enum class KineticMode { full, regularized };

// Velocity data at a material point. `w` and `Lambda` feed the full form;
// `d_dot` and `psi_dot` feed the regularized one.
struct PointRates {
    Vec3 v = Vec3::Zero();
    Vec3 w = Vec3::Zero();
    so3::Rotation Lambda;
    Vec3 d_dot = Vec3::Zero();
    double psi_dot = 0.0;
};

StrainState strains_general(const Vec3& rp, const so3::Rotation& Lambda, const Mat3& Lambda_p);

// d' = (I - d d) r'' / |r'|; throws RegularityError for r' = 0.
TIStrains strains_ti(const Vec3& rp, const Vec3& rpp, double psi_p);

double stored_energy_density(const StrainState& e, const MaterialLaw& law);
double stored_energy_density(const TIStrains& e, const MaterialLaw& law);

// n_perp is a reaction and is left at zero.
StressResultants stress_resultants(const StrainState& e, const MaterialLaw& law,
                                   const so3::Rotation& Lambda);
// m_perp = EI d x d', zero where d' vanishes.
StressResultants stress_resultants_ti(const Vec3& rp, const Vec3& rpp, double psi_p,
                                      const MaterialLaw& law);

double kinetic_energy_density(const PointRates& x, const SectionInertia& inertia,
                              KineticMode mode);

// Rotational energy written as spatial, convected, spatial split and
// convected split forms; all four coincide.
std::array<double, 4> rotational_energy_forms(const Vec3& w, const so3::Rotation& Lambda,
                                              const SectionInertia& inertia);

// w_perp must be orthogonal to e3 = Lambda E3.
Momenta momenta(const Vec3& v, const Vec3& w_perp, double psi_dot, const SectionInertia& inertia,
                const so3::Rotation& Lambda = so3::Rotation());

}  // namespace rodsim::rod
