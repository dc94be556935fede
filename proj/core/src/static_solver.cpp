#include "rodsim/static_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "continuation.hpp"
#include "general_element.hpp"
#include "rodsim/errors.hpp"
#include "rodsim/so3.hpp"

namespace rodsim::statics {

using fem::DofMap;
using fem::DofVector;
using fem::SparseMatrix;

namespace {

int count_negative_pivots(const Eigen::SimplicialLDLT<SparseMatrix>& ldlt) {
    const VecX D = ldlt.vectorD();
    return static_cast<int>((D.array() < 0.0).count());
}

// Newton direction for the reduced Hessian; shifts the spectrum until the
// factorization is positive definite.
VecX descent_direction(const SparseMatrix& H, const VecX& g, int& negative) {
    Eigen::SimplicialLDLT<SparseMatrix> ldlt(H);
    negative = ldlt.info() == Eigen::Success ? count_negative_pivots(ldlt) : -1;
    if (ldlt.info() == Eigen::Success && negative == 0) {
        VecX p = -ldlt.solve(g);
        if (p.allFinite() && p.dot(g) < 0.0) return p;
    }
    double diag = 0.0;
    for (int k = 0; k < H.outerSize(); ++k) diag = std::max(diag, std::abs(H.coeff(k, k)));
    double beta = 1e-8 * std::max(diag, 1.0);
    SparseMatrix I(H.rows(), H.cols());
    I.setIdentity();
    for (int attempt = 0; attempt < 40; ++attempt, beta *= 10.0) {
        const SparseMatrix Hs = H + beta * I;
        Eigen::SimplicialLDLT<SparseMatrix> shifted(Hs);
        if (shifted.info() != Eigen::Success || count_negative_pivots(shifted) > 0) continue;
        VecX p = -shifted.solve(g);
        if (p.allFinite() && p.dot(g) < 0.0) return p;
    }
    return -g;
}

}  // namespace

std::vector<FieldSample> sample_fields(const DofVector& dofs, const fem::Grid& grid,
                                       const rod::MaterialLaw& law) {
    std::vector<FieldSample> out(grid.nodes());
    for (int i = 0; i < grid.nodes(); ++i) {
        const fem::FieldPoint p = fem::interpolate(grid, dofs, grid.s(i));
        const double l = p.rp.norm();
        const Vec3 d = p.rp / l;
        const Vec3 dp = (p.rpp - d.dot(p.rpp) * d) / l;
        FieldSample f;
        f.s = grid.s(i);
        f.r = dofs.r[i];
        f.psi = dofs.psi[i];
        f.eps = l - 1.0;
        f.curvature = dp.norm();
        f.tau = p.psi_p;
        f.n_par = law.EA * f.eps * d;
        f.m_par = law.GJ * f.tau;
        if (dofs.has_rotations()) {
            const Mat3& L = dofs.rotations[i];
            const Vec3 K = L.transpose() * d.cross(dp);
            f.m_perp = L * Vec3(law.EI1 * K[0], law.EI2 * K[1], 0.0);
        } else {
            f.m_perp = law.EI1 * d.cross(dp);
        }
        out[i] = f;
    }
    return out;
}

SolveReport solve_ti_static(const DofVector& x0, const fem::Grid& grid, const rod::MaterialLaw& law,
                            const LoadCase& loads, const fem::Clamp& clamp,
                            const SolverOptions& opt) {
    law.validate();
    loads.validate();
    x0.check(grid);
    if (!law.transversely_isotropic()) {
        throw ValidationError("solve_ti_static: material is not transversely isotropic (EI1 != EI2)");
    }
    if (loads.has_tip_moment()) {
        throw ValidationError("solve_ti_static: tip bending moments need the constrained solver");
    }
    if (opt.load_steps < 1) throw ValidationError("solver.load_steps must be at least 1");

    const DofMap map = DofMap::clamped(grid, clamp);
    const fem::AssemblyOptions aopt{opt.threads};
    VecX z = map.restrict_to_free(x0.pack());
    SolveReport rep;
    constexpr double eps = std::numeric_limits<double>::epsilon();

    auto energy_at = [&](const VecX& zz, const LoadCase& lc) {
        return fem::assemble_energy(grid, DofVector::from_packed(map.expand(zz)), law, lc, aopt);
    };

    auto newton = [&](const LoadCase& lc, double lambda) {
        const VecX f_full = fem::assemble_load_vector(grid, lc);
        const double scale = 1.0 + map.reduce(f_full).norm();
        const std::string where = " at load factor " + std::to_string(lambda);
        for (int it = 0;; ++it) {
            const VecX x = map.expand(z);
            const DofVector dofs = DofVector::from_packed(x);
            const double E = fem::assemble_energy(grid, dofs, law, lc, aopt);
            const VecX g = map.reduce(fem::assemble_gradient(grid, dofs, law, lc, aopt));
            rep.energy = E;
            rep.residual = g.norm() / scale;
            rep.energy_history.push_back(E);
            if (rep.residual <= opt.tol) return true;
            if (it >= opt.max_iter) {
                rep.message = "no convergence in " + std::to_string(opt.max_iter) + " iterations" + where;
                return false;
            }
            const SparseMatrix H = map.reduce(fem::assemble_hessian(grid, dofs, law, aopt));
            int negative = 0;
            const VecX p = descent_direction(H, g, negative);
            ++rep.iterations;
            // Stiff axial terms put a roundoff floor under the residual; a
            // negligible Newton step counts as convergence.
            if (negative == 0 && p.lpNorm<Eigen::Infinity>() <= opt.tol * (1.0 + z.lpNorm<Eigen::Infinity>())) {
                z += p;
                const DofVector dz = DofVector::from_packed(map.expand(z));
                rep.energy = fem::assemble_energy(grid, dz, law, lc, aopt);
                rep.residual = map.reduce(fem::assemble_gradient(grid, dz, law, lc, aopt)).norm() / scale;
                rep.energy_history.push_back(rep.energy);
                return true;
            }
            const double slope = g.dot(p);
            const double slack = 64.0 * eps * (std::abs(E) + f_full.norm() * x.norm() + 1.0);
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
                const VecX zt = z + alpha * p;
                const double Et = energy_at(zt, lc);
                if (std::isfinite(Et) && Et <= E + opt.armijo * alpha * slope + slack) {
                    z = zt;
                    accepted = true;
                    break;
                }
            }
            if (!accepted) {
                rep.message = "line search failed" + where;
                return false;
            }
        }
    };

    const bool ok = detail::run_continuation(opt.load_steps, opt.max_cutbacks, [&](double lambda) {
        const VecX saved = z;
        const std::size_t hist = rep.energy_history.size();
        if (newton(loads.scaled(lambda), lambda)) return true;
        z = saved;
        rep.energy_history.resize(hist);
        return false;
    });
    if (ok) rep.message.clear();

    rep.converged = ok;
    rep.state = DofVector::from_packed(map.expand(z));
    const int n = grid.nodes() - 1;
    rep.tip = rep.state.r[n];
    rep.tip_psi = rep.state.psi[n];
    {
        const SparseMatrix H = map.reduce(fem::assemble_hessian(grid, rep.state, law, aopt));
        Eigen::SimplicialLDLT<SparseMatrix> ldlt(H);
        rep.tangent_negative = ldlt.info() == Eigen::Success ? count_negative_pivots(ldlt) : -1;
    }
    rep.fields = sample_fields(rep.state, grid, law);
    return rep;
}

DofVector lift_bishop_composite(const DofVector& dofs, const fem::Grid& grid,
                                const fem::Clamp& clamp) {
    dofs.check(grid);
    DofVector out = dofs;
    const int n = grid.nodes();
    out.rotations.resize(n);
    Vec3 d = dofs.t[0].normalized();
    Mat3 B = so3::chi_no_drill(so3::Director(clamp.direction()), so3::Director(d)).matrix() *
             clamp.orientation;
    for (int i = 0; i < n; ++i) {
        if (i > 0) {
            const Vec3 dn = dofs.t[i].normalized();
            B = so3::chi_no_drill(so3::Director(d), so3::Director(dn)).matrix() * B;
            d = dn;
        }
        out.rotations[i] = so3::exp_rodrigues(dofs.psi[i] * d).matrix() * B;
    }
    return out;
}

double lowest_tangent_eigenvalue(const DofVector& dofs, const fem::Grid& grid,
                                 const rod::MaterialLaw& law, const fem::Clamp& clamp) {
    const DofMap map = DofMap::clamped(grid, clamp);
    const MatX H = MatX(map.reduce(fem::assemble_hessian(grid, dofs, law)));
    Eigen::SelfAdjointEigenSolver<MatX> es(H, Eigen::EigenvaluesOnly);
    return es.eigenvalues()[0];
}

BucklingResult continuation_buckling(const fem::Grid& grid, const rod::MaterialLaw& law,
                                     double load_min, double load_max, const fem::Clamp& clamp,
                                     const BucklingOptions& opt) {
    if (!(load_min >= 0.0) || !(load_max > load_min)) {
        throw ValidationError("continuation_buckling: need 0 <= load_min < load_max");
    }
    if (opt.steps < 1) throw ValidationError("continuation_buckling: steps must be positive");
    if (!(load_max < law.EA)) throw ValidationError("continuation_buckling: load_max must be below EA");
    // Trivial branch: uniform compression l = 1 - P / EA, exact for the discrete model.
    auto eigen_at = [&](double P) {
        const double stretch = 1.0 - P / law.EA;
        DofVector s = DofVector::straight(grid, clamp);
        for (int i = 0; i < grid.nodes(); ++i) {
            s.r[i] = clamp.position + stretch * (s.r[i] - clamp.position);
            s.t[i] *= stretch;
        }
        return lowest_tangent_eigenvalue(s, grid, law, clamp);
    };
    double P_prev = load_min;
    double lam_prev = eigen_at(P_prev);
    if (lam_prev <= 0.0) {
        throw NotDetected("continuation_buckling: tangent already indefinite at load_min");
    }
    for (int k = 1; k <= opt.steps; ++k) {
        const double P = load_min + (load_max - load_min) * k / opt.steps;
        const double lam = eigen_at(P);
        if (lam <= 0.0) {
            double lo = P_prev, hi = P;
            double lam_lo = lam_prev, lam_hi = lam;
            BucklingResult res;
            while (hi - lo > opt.rel_tol * hi && res.bisections < 200) {
                const double mid = 0.5 * (lo + hi);
                const double lm = eigen_at(mid);
                if (lm > 0.0) {
                    lo = mid;
                    lam_lo = lm;
                } else {
                    hi = mid;
                    lam_hi = lm;
                }
                ++res.bisections;
            }
            res.critical_load = 0.5 * (lo + hi);
            res.lowest_eigenvalue_below = lam_lo;
            res.lowest_eigenvalue_above = lam_hi;
            return res;
        }
        P_prev = P;
        lam_prev = lam;
    }
    throw NotDetected("continuation_buckling: no stability loss in the requested load range");
}

}  // namespace rodsim::statics
