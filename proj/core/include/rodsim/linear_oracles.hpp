#pragma once

#include <vector>

#include "rodsim/types.hpp"

namespace rodsim::oracle {

// Roots x_k of cos(x) cosh(x) + 1 = 0 (clamped-free beam), k = 1..n.
std::vector<double> frequency_roots(int n);

struct LinearBeamParams {
    double E = 1.0, G = 1.0;          // Pa
    double A = 1.0;                   // m^2
    double I11 = 1.0, I22 = 1.0, I33 = 2.0;  // m^4
    double rho = 1.0;                 // kg/m^3
    double L = 1.0;                   // m

    void validate() const;
};

struct ModalResult {
    std::vector<double> omega;  // rad/s, ascending
    MatX shapes;                // nodal [w, w'] columns, clamped node removed
};

// Hermite beam elements for rho A u_tt - rho I u_tt'' + E I u'''' = 0,
// clamped at s = 0 and free at s = L, bending about the I11 axis.
ModalResult rayleigh_operator(const LinearBeamParams& p, int n_modes, int elements = 64,
                              bool rotary_inertia = true);

// Euler-Bernoulli clamped-free angular frequency of mode k (1-based).
double euler_bernoulli_omega(const LinearBeamParams& p, int k);

// Clamped-free axial and torsional angular frequencies of mode k, from
// rho A w_tt - E A w'' = 0 and rho I33 phi_tt - G I33 phi'' = 0.
double axial_omega(const LinearBeamParams& p, int k);
double torsion_omega(const LinearBeamParams& p, int k);

enum class CantileverLoad { tip_force, tip_torque, buckling, end_moment };

// F L^3 / (3 EI), T L / GJ, pi^2 EI / (4 L^2) and M / EI respectively.
double cantilever_statics(CantileverLoad kind, double magnitude, double EI, double GJ, double L);

}  // namespace rodsim::oracle
