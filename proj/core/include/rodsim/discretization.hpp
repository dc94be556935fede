#pragma once

#include <vector>

#include <Eigen/SparseCore>

#include "rodsim/loads.hpp"
#include "rodsim/rod_model.hpp"
#include "rodsim/types.hpp"

namespace rodsim::fem {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Gauss-Legendre rule on [0, 1]; weights sum to 1.
struct QuadRule {
    std::vector<double> xi;
    std::vector<double> w;
};

QuadRule gauss_legendre(int n);

class Grid {
public:
    explicit Grid(std::vector<double> nodes, int gauss_points = 3);
    static Grid uniform(double length, int elements, int gauss_points = 3);

    int elements() const { return static_cast<int>(nodes_.size()) - 1; }
    int nodes() const { return static_cast<int>(nodes_.size()); }
    double length() const { return nodes_.back() - nodes_.front(); }
    double s(int i) const { return nodes_[i]; }
    double h(int e) const { return nodes_[e + 1] - nodes_[e]; }
    const std::vector<double>& breakpoints() const { return nodes_; }
    const QuadRule& rule() const { return rule_; }
    // Element containing s; the right end belongs to the last element.
    int locate(double s) const;

private:
    std::vector<double> nodes_;
    QuadRule rule_;
};

// Clamped end at s = 0: position, orientation Lambda(0) = Q, and the tangent
// direction Q E3. A free rod leaves every dof unconstrained.
struct Clamp {
    Vec3 position = Vec3::Zero();
    Mat3 orientation = Mat3::Identity();
    bool free = false;

    Vec3 direction() const { return orientation.col(2); }
    static Clamp none() {
        Clamp c;
        c.free = true;
        return c;
    }
};

inline constexpr int kNodeDofs = 7;

// Nodal unknowns: position r, Hermite tangent t = r', twist psi. The
// constrained path adds nodal rotations and shear multipliers.
struct DofVector {
    std::vector<Vec3> r;
    std::vector<Vec3> t;
    std::vector<double> psi;
    std::vector<Mat3> rotations;
    std::vector<Vec2> eta;

    int nodes() const { return static_cast<int>(r.size()); }
    bool has_rotations() const { return !rotations.empty(); }

    // Layout [r, t, psi] per node.
    VecX pack() const;
    void unpack(const VecX& x);
    static DofVector from_packed(const VecX& x);

    // Straight rod along the clamp direction.
    static DofVector straight(const Grid& grid, const Clamp& clamp = {});
    void check(const Grid& grid) const;
};

struct FieldPoint {
    Vec3 r, rp, rpp, rppp;
    double psi = 0.0;
    double psi_p = 0.0;
};

FieldPoint interpolate(const Grid& grid, const DofVector& dofs, double s);

// threads > 1 evaluates elements concurrently; the element sums are always
// reduced in element order, so results do not depend on the thread count.
struct AssemblyOptions {
    int threads = 1;
};

double assemble_energy(const Grid& grid, const DofVector& dofs, const rod::MaterialLaw& law,
                       const LoadCase& loads, const AssemblyOptions& opt = {});
VecX assemble_gradient(const Grid& grid, const DofVector& dofs, const rod::MaterialLaw& law,
                       const LoadCase& loads, const AssemblyOptions& opt = {});
SparseMatrix assemble_hessian(const Grid& grid, const DofVector& dofs,
                              const rod::MaterialLaw& law, const AssemblyOptions& opt = {});
// Generalized external forces, minus the gradient of the load potential.
VecX assemble_load_vector(const Grid& grid, const LoadCase& loads);

struct ConstraintResiduals {
    std::vector<Vec2> shear;     // per node: (Lambda^T t) x E3, first two components
    std::vector<double> twist;   // per element: (psi_b - psi_a) - phi_e
    double max_abs() const;
};

// Requires rotation dofs; phi_e is the twist of Lambda_b relative to the
// drill-free transport of Lambda_a.
ConstraintResiduals assemble_constraints(const Grid& grid, const DofVector& dofs);

// Affine map x = offset + B z from free coordinates z to the packed layout.
class DofMap {
public:
    static DofMap clamped(const Grid& grid, const Clamp& clamp);

    int free_size() const { return static_cast<int>(B_.cols()); }
    int full_size() const { return static_cast<int>(B_.rows()); }
    VecX expand(const VecX& z) const { return offset_ + B_ * z; }
    VecX restrict_to_free(const VecX& x) const { return B_.transpose() * (x - offset_); }
    VecX reduce(const VecX& g) const { return B_.transpose() * g; }
    SparseMatrix reduce(const SparseMatrix& H) const;
    const SparseMatrix& B() const { return B_; }

private:
    SparseMatrix B_;
    VecX offset_;
};

}  // namespace rodsim::fem
