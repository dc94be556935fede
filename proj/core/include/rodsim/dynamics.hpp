#pragma once

#include <vector>

#include "rodsim/discretization.hpp"
#include "rodsim/loads.hpp"
#include "rodsim/rod_model.hpp"

namespace rodsim::dyn {

// Configuration and packed dof rates (same layout as DofVector::pack).
struct DynamicState {
    fem::DofVector dofs;
    VecX rates;
    double t = 0.0;

    static DynamicState at_rest(const fem::DofVector& dofs, double t = 0.0);
    void check(const fem::Grid& grid) const;
};

struct IntegratorConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    double newton_tol = 1e-10;
    int max_newton = 25;
    int output_stride = 1;
    int threads = 1;

    void validate() const;
};

// Problem data shared by every step.
struct RodProblem {
    const fem::Grid* grid = nullptr;
    rod::MaterialLaw law;
    rod::SectionInertia inertia;
    LoadCase loads;
    fem::Clamp clamp;

    // Throws ValidationError for anisotropic stiffness or inertia.
    void validate() const;
};

// Regularized kinetic energy 1/2 A_rho |r_dot|^2 + 1/2 i_perp |d_dot|^2 +
// 1/2 i_par psi_dot^2 integrated over the rod.
double kinetic_energy(const RodProblem& pb, const fem::DofVector& dofs, const VecX& rates);

// Discrete momenta dT/d(rates), full layout.
VecX momenta(const RodProblem& pb, const fem::DofVector& dofs, const VecX& rates);

// dT/dq at fixed rates, full layout.
VecX kinetic_configuration_force(const RodProblem& pb, const fem::DofVector& dofs,
                                 const VecX& rates);

// Configuration-dependent mass matrix: momenta = M(q) rates.
fem::SparseMatrix mass_matrix(const RodProblem& pb, const fem::DofVector& dofs);

// d/dt(dT/d rates) - dT/dq + dV/dq on the free dofs of the clamp.
VecX semidiscrete_residual(const RodProblem& pb, const DynamicState& state,
                           const VecX& accelerations);

// One implicit midpoint step; throws StepNonConvergence if Newton fails.
DynamicState step_midpoint(const RodProblem& pb, const DynamicState& state,
                           const IntegratorConfig& cfg);

// States at t = 0, every output_stride steps, and t_end.
std::vector<DynamicState> integrate(const RodProblem& pb, const DynamicState& initial,
                                    const IntegratorConfig& cfg);

struct EnergySample {
    double t = 0.0;
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
};

std::vector<EnergySample> energy_audit(const RodProblem& pb,
                                       const std::vector<DynamicState>& trajectory);

// max_k |E_k - E_0| / |E_0|.
double relative_energy_drift(const std::vector<EnergySample>& samples);

// Frequency (Hz) maximizing the Hann-windowed discrete Fourier amplitude of
// y(t) over [f_lo, f_hi], scanned on `grid` points and refined by golden
// section. Samples must be equally spaced.
double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y, double f_lo,
                          double f_hi, int grid = 2000);

}  // namespace rodsim::dyn
