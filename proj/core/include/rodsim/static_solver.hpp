#pragma once

#include <string>
#include <vector>

#include "rodsim/discretization.hpp"
#include "rodsim/loads.hpp"
#include "rodsim/rod_model.hpp"

namespace rodsim::statics {

struct SolverOptions {
    double tol = 1e-10;        // on |residual| / (1 + |external forces|)
    int max_iter = 50;         // per load step
    int load_steps = 1;        // uniform continuation in the load factor
    int max_cutbacks = 8;      // consecutive halvings of a failed load increment
    double armijo = 1e-4;
    int threads = 1;
};

// Nodal sample of the converged fields.
struct FieldSample {
    double s = 0.0;
    Vec3 r = Vec3::Zero();
    double psi = 0.0;
    double eps = 0.0;
    double curvature = 0.0;
    double tau = 0.0;
    Vec3 n_par = Vec3::Zero();
    Vec3 m_perp = Vec3::Zero();
    double m_par = 0.0;
};

// Multipliers of the constrained path: shear multipliers per node (node 0
// is clamped and carries none) and torsion multipliers per quadrature point.
struct LagrangeFields {
    std::vector<Vec2> eta;
    std::vector<double> mu;
};

struct SolveReport {
    bool converged = false;
    int iterations = 0;
    double residual = 0.0;
    double energy = 0.0;
    Vec3 tip = Vec3::Zero();
    double tip_psi = 0.0;
    // Number of negative pivots of the reduced tangent at the final iterate.
    int tangent_negative = 0;
    std::vector<double> energy_history;
    fem::DofVector state;
    LagrangeFields multipliers;
    std::vector<FieldSample> fields;
    std::string message;
};

// Unconstrained Newton minimization with backtracking line search.
// Requires EI1 == EI2 and no applied tip bending moment.
SolveReport solve_ti_static(const fem::DofVector& x0, const fem::Grid& grid,
                            const rod::MaterialLaw& law, const LoadCase& loads,
                            const fem::Clamp& clamp = {}, const SolverOptions& opt = {});

// Newton on the KKT system with nodal rotations updated multiplicatively.
// Rotations missing from x0 are seeded with the twisted Bishop frame of the
// initial centerline.
SolveReport solve_general_static(const fem::DofVector& x0, const fem::Grid& grid,
                                 const rod::MaterialLaw& law, const LoadCase& loads,
                                 const fem::Clamp& clamp = {}, const SolverOptions& opt = {});

// Potential energy of the constrained path. The state needs rotations; a dead
// tip moment has no potential and is rejected.
double general_energy(const fem::DofVector& dofs, const fem::Grid& grid, const rod::MaterialLaw& law,
                      const LoadCase& loads);
// Gradient of general_energy in the chart [dr, dt, theta] per node, where
// theta moves Lambda to exp(hat(theta)) Lambda.
VecX general_gradient(const fem::DofVector& dofs, const fem::Grid& grid, const rod::MaterialLaw& law,
                      const LoadCase& loads);
fem::DofVector general_chart_step(const fem::DofVector& dofs, const VecX& increments);

// Nodal rotations exp(psi_i hat(d_i)) B_i with B the discrete Bishop frame
// started at the clamp orientation.
fem::DofVector lift_bishop_composite(const fem::DofVector& dofs, const fem::Grid& grid,
                                     const fem::Clamp& clamp = {});

// Stress resultants at the nodes.
std::vector<FieldSample> sample_fields(const fem::DofVector& dofs, const fem::Grid& grid,
                                       const rod::MaterialLaw& law);

struct BucklingOptions {
    int steps = 16;          // load samples on the trivial branch
    double rel_tol = 1e-10;  // bisection width relative to the load
};

struct BucklingResult {
    double critical_load = 0.0;
    double lowest_eigenvalue_below = 0.0;
    double lowest_eigenvalue_above = 0.0;
    int bisections = 0;
};

// Compressive dead tip force P (along minus the clamp direction) on the
// trivial branch; the critical load is where the smallest eigenvalue of the
// reduced tangent changes sign. Throws NotDetected if it stays positive.
BucklingResult continuation_buckling(const fem::Grid& grid, const rod::MaterialLaw& law,
                                     double load_min, double load_max,
                                     const fem::Clamp& clamp = {},
                                     const BucklingOptions& opt = {});

// Smallest eigenvalue of the reduced TI tangent at a state.
double lowest_tangent_eigenvalue(const fem::DofVector& dofs, const fem::Grid& grid,
                                 const rod::MaterialLaw& law, const fem::Clamp& clamp = {});

struct MixedResidualReport {
    // Integrated force balance over [s, L], torsion balance and end
    // conditions in the constrained (general) form.
    double force_general = 0.0;
    double torsion_general = 0.0;
    double boundary_general = 0.0;
    // Same balances written with the torsion multiplier mu.
    double force_mixed = 0.0;
    double torsion_mixed = 0.0;
    double boundary_mixed = 0.0;
    // Largest pointwise difference between the two sets.
    double difference = 0.0;
    double constraint = 0.0;
};

// mu is sampled at the quadrature points, element by element. Throws
// ValidationError if the state violates the constraints by more than
// constraint_tol.
MixedResidualReport mixed_residual_check(const fem::DofVector& dofs, const LagrangeFields& fields,
                                         const fem::Grid& grid, const rod::MaterialLaw& law,
                                         const LoadCase& loads, double constraint_tol = 1e-8);

// mu = GJ tau at every quadrature point.
LagrangeFields torsion_multiplier_from_twist(const fem::DofVector& dofs, const fem::Grid& grid,
                                             const rod::MaterialLaw& law);

}  // namespace rodsim::statics
