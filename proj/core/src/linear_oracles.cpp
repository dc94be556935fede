#include "rodsim/linear_oracles.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "rodsim/errors.hpp"
#include "rodsim/discretization.hpp"

namespace rodsim::oracle {

namespace {

double char_fn(double x) { return std::cos(x) * std::cosh(x) + 1.0; }

// cos x cosh x + 1 = 0 rewritten as cos x + 1/cosh x = 0, bounded for large x.
double scaled_fn(double x) { return std::cos(x) + 1.0 / std::cosh(x); }

}  // namespace

std::vector<double> frequency_roots(int n) {
    if (n < 1) throw ValidationError("frequency_roots: n must be at least 1");
    std::vector<double> roots;
    const double pi = std::numbers::pi;
    for (int k = 1; k <= n; ++k) {
        // Exactly one sign change of cos x + sech x in ((k - 1) pi, k pi).
        double a = (k - 1) * pi, b = k * pi;
        double fa = scaled_fn(a);
        for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
            const double m = 0.5 * (a + b);
            const double fm = scaled_fn(m);
            if ((fm < 0.0) == (fa < 0.0)) {
                a = m;
                fa = fm;
            } else {
                b = m;
            }
        }
        double x = 0.5 * (a + b);
        // Newton polish on the defining function.
        for (int it = 0; it < 3; ++it) {
            const double df = -std::sin(x) * std::cosh(x) + std::cos(x) * std::sinh(x);
            if (df == 0.0) break;
            const double nx = x - char_fn(x) / df;
            if (std::abs(char_fn(nx)) < std::abs(char_fn(x))) x = nx;
        }
        roots.push_back(x);
    }
    return roots;
}

void LinearBeamParams::validate() const {
    for (double v : {E, G, A, I11, I22, I33, rho, L}) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ValidationError("LinearBeamParams: all parameters must be positive");
        }
    }
}

ModalResult rayleigh_operator(const LinearBeamParams& p, int n_modes, int elements,
                              bool rotary_inertia) {
    p.validate();
    if (elements < 1) throw ValidationError("rayleigh_operator: elements must be positive");
    const int dofs = 2 * elements;
    if (n_modes < 1 || n_modes > dofs) throw ValidationError("rayleigh_operator: bad n_modes");
    MatX K = MatX::Zero(dofs + 2, dofs + 2), M = MatX::Zero(dofs + 2, dofs + 2);
    const double h = p.L / elements;
    const double EI = p.E * p.I11, rA = p.rho * p.A, rI = rotary_inertia ? p.rho * p.I11 : 0.0;
    const fem::QuadRule q = fem::gauss_legendre(4);
    for (int e = 0; e < elements; ++e) {
        Eigen::Matrix4d ke = Eigen::Matrix4d::Zero(), me = Eigen::Matrix4d::Zero();
        for (std::size_t k = 0; k < q.xi.size(); ++k) {
            const double x = q.xi[k], x2 = x * x, x3 = x2 * x;
            Eigen::Vector4d N(1 - 3 * x2 + 2 * x3, h * (x - 2 * x2 + x3), 3 * x2 - 2 * x3, h * (-x2 + x3));
            Eigen::Vector4d dN((-6 * x + 6 * x2) / h, 1 - 4 * x + 3 * x2, (6 * x - 6 * x2) / h,
                               -2 * x + 3 * x2);
            Eigen::Vector4d ddN((-6 + 12 * x) / (h * h), (-4 + 6 * x) / h, (6 - 12 * x) / (h * h),
                                (-2 + 6 * x) / h);
            const double w = q.w[k] * h;
            ke += w * EI * ddN * ddN.transpose();
            me += w * (rA * N * N.transpose() + rI * dN * dN.transpose());
        }
        K.block<4, 4>(2 * e, 2 * e) += ke;
        M.block<4, 4>(2 * e, 2 * e) += me;
    }
    const MatX Kr = K.bottomRightCorner(dofs, dofs), Mr = M.bottomRightCorner(dofs, dofs);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatX> es(Kr, Mr);
    if (es.info() != Eigen::Success) throw Error("rayleigh_operator: eigensolver failed");
    ModalResult out;
    for (int k = 0; k < n_modes; ++k) out.omega.push_back(std::sqrt(std::max(0.0, es.eigenvalues()[k])));
    out.shapes = es.eigenvectors().leftCols(n_modes);
    return out;
}

double euler_bernoulli_omega(const LinearBeamParams& p, int k) {
    p.validate();
    const double bl = frequency_roots(k).back();
    return bl * bl / (p.L * p.L) * std::sqrt(p.E * p.I11 / (p.rho * p.A));
}

double axial_omega(const LinearBeamParams& p, int k) {
    p.validate();
    if (k < 1) throw ValidationError("axial_omega: k must be at least 1");
    return (k - 0.5) * std::numbers::pi / p.L * std::sqrt(p.E / p.rho);
}

double torsion_omega(const LinearBeamParams& p, int k) {
    p.validate();
    if (k < 1) throw ValidationError("torsion_omega: k must be at least 1");
    return (k - 0.5) * std::numbers::pi / p.L * std::sqrt(p.G / p.rho);
}

double cantilever_statics(CantileverLoad kind, double magnitude, double EI, double GJ, double L) {
    if (!(EI > 0.0) || !(GJ > 0.0) || !(L > 0.0)) {
        throw ValidationError("cantilever_statics: EI, GJ and L must be positive");
    }
    switch (kind) {
        case CantileverLoad::tip_force: return magnitude * L * L * L / (3.0 * EI);
        case CantileverLoad::tip_torque: return magnitude * L / GJ;
        case CantileverLoad::buckling: return std::numbers::pi * std::numbers::pi * EI / (4.0 * L * L);
        case CantileverLoad::end_moment: return magnitude / EI;
    }
    return 0.0;
}

}  // namespace rodsim::oracle
