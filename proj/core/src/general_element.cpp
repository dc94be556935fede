#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>

#include "continuation.hpp"
#include "general_element.hpp"
#include "parallel.hpp"
#include "rodsim/errors.hpp"
#include "rodsim/static_solver.hpp"

namespace rodsim::statics {

using fem::DofVector;
using fem::SparseMatrix;
using fem::detail::GeneralElementData;
using fem::detail::kGeneralNodeDofs;
using fem::detail::Vec18;
using Triplet = Eigen::Triplet<double>;

namespace {

// Unknowns: lambda_0 (tangent length at the clamp), [dr, dt, theta] for the
// nodes 1..N, then the shear multipliers of the nodes 1..N.
struct KktLayout {
    int nodes = 0;
    int primal = 0;
    int total = 0;
    Vec3 dir = Vec3::UnitZ();

    explicit KktLayout(const fem::Grid& grid, const fem::Clamp& clamp) {
        nodes = grid.nodes();
        primal = 1 + kGeneralNodeDofs * (nodes - 1);
        total = primal + 2 * (nodes - 1);
        dir = clamp.direction();
    }
    int node_base(int i) const { return 1 + kGeneralNodeDofs * (i - 1); }
    int eta_base(int i) const { return primal + 2 * (i - 1); }

    // Global entries touched by local dof j of node i, with coefficients.
    template <typename F>
    void for_local(int i, int j, F&& f) const {
        if (i > 0) {
            f(node_base(i) + j, 1.0);
        } else if (j >= 3 && j < 6 && dir[j - 3] != 0.0) {
            f(0, dir[j - 3]);
        }
    }
};

struct Linearization {
    VecX residual;
    std::vector<Triplet> triplets;
    double energy = 0.0;
    std::vector<double> phi;
};

GeneralElementData element_data(const fem::Grid& grid, const DofVector& s,
                                const rod::MaterialLaw& law, const LoadCase& lc, int e) {
    GeneralElementData d;
    d.h = grid.h(e);
    d.rule = &grid.rule();
    d.EA = law.EA;
    d.EI1 = law.EI1;
    d.EI2 = law.EI2;
    d.GJ = law.GJ;
    d.nbar = lc.distributed_force;
    const double s_mid = 0.5 * (grid.s(e) + grid.s(e + 1));
    d.twist_load = lc.distributed_tangent_moment * (grid.s(grid.nodes() - 1) - s_mid) +
                   lc.tip_tangent_moment;
    d.ra = s.r[e];
    d.ta = s.t[e];
    d.rb = s.r[e + 1];
    d.tb = s.t[e + 1];
    d.La = s.rotations[e];
    d.Lb = s.rotations[e + 1];
    return d;
}

// Residual of the stationarity conditions at the current state (increments
// zero) and, optionally, its Jacobian.
Linearization linearize(const fem::Grid& grid, const DofVector& s, const rod::MaterialLaw& law,
                        const LoadCase& lc, const KktLayout& lay, bool with_jacobian,
                        int threads) {
    const int ne = grid.elements();
    std::vector<Vec18<double>> grads(ne);
    std::vector<Eigen::Matrix<double, 18, 18>> hess(with_jacobian ? ne : 0);
    std::vector<double> energy(ne), phi(ne);
    rodsim::detail::parallel_for(ne, threads, [&](int e) {
        const GeneralElementData d = element_data(grid, s, law, lc, e);
        const Vec18<double> z0 = Vec18<double>::Zero();
        phi[e] = fem::detail::relative_twist<double>(d.La, d.Lb);
        if (with_jacobian) {
            energy[e] = ad::gradient_hessian<18>(
                [&](const auto& z) { return fem::detail::general_element_energy(z, d); }, z0,
                grads[e], hess[e]);
        } else {
            Eigen::Matrix<double, 1, 18> jac;
            const auto val = ad::jacobian<18, 1>(
                [&](const auto& z) {
                    using S = typename std::decay_t<decltype(z)>::Scalar;
                    Eigen::Matrix<S, 1, 1> out;
                    out[0] = fem::detail::general_element_energy(z, d);
                    return out;
                },
                z0, jac);
            energy[e] = val[0];
            grads[e] = jac.transpose();
        }
    });

    Linearization lin;
    lin.residual = VecX::Zero(lay.total);
    lin.phi = phi;
    for (int e = 0; e < ne; ++e) {
        lin.energy += energy[e];
        for (int a = 0; a < 2; ++a) {
            for (int j = 0; j < kGeneralNodeDofs; ++j) {
                const int lj = a * kGeneralNodeDofs + j;
                lay.for_local(e + a, j, [&](int gj, double cj) {
                    lin.residual[gj] += cj * grads[e][lj];
                    if (!with_jacobian) return;
                    for (int b = 0; b < 2; ++b) {
                        for (int k = 0; k < kGeneralNodeDofs; ++k) {
                            const int lk = b * kGeneralNodeDofs + k;
                            const double v = hess[e](lj, lk);
                            if (v == 0.0) continue;
                            lay.for_local(e + b, k, [&](int gk, double ck) {
                                lin.triplets.emplace_back(gj, gk, cj * ck * v);
                            });
                        }
                    }
                });
            }
        }
    }

    const int n = lay.nodes - 1;
    const int tip = lay.node_base(n);
    lin.residual.segment<3>(tip) -= lc.tip_force;
    lin.energy -= lc.tip_force.dot(s.r[n]);
    // Dead moment: chart force dexp(theta)^T M with derivative hat(M)/2 at zero.
    lin.residual.segment<3>(tip + 6) -= lc.tip_moment;
    if (with_jacobian && !lc.tip_moment.isZero(0.0)) {
        const Mat3 Mh = so3::hat(lc.tip_moment);
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                if (Mh(a, b) != 0.0) lin.triplets.emplace_back(tip + 6 + a, tip + 6 + b, -0.5 * Mh(a, b));
            }
        }
    }

    for (int i = 1; i < lay.nodes; ++i) {
        const int base = lay.node_base(i) + 3;
        const int eb = lay.eta_base(i);
        const Vec2& eta = s.eta[i];
        Eigen::Matrix<double, 2, 6> J;
        const Eigen::Matrix<double, 6, 1> z0 = Eigen::Matrix<double, 6, 1>::Zero();
        const Vec3 t0 = s.t[i];
        const Mat3 L0 = s.rotations[i];
        const Eigen::Matrix<double, 2, 1> c = ad::jacobian<6, 2>(
            [&](const auto& z) {
                using S = typename std::decay_t<decltype(z)>::Scalar;
                return fem::detail::shear_constraint<S>(z, t0, L0);
            },
            z0, J);
        lin.residual.segment<2>(eb) = c;
        lin.residual.segment<6>(base) += J.transpose() * eta;
        if (!with_jacobian) continue;
        Eigen::Matrix<double, 6, 1> gc;
        Eigen::Matrix<double, 6, 6> Hc;
        ad::gradient_hessian<6>(
            [&](const auto& z) {
                using S = typename std::decay_t<decltype(z)>::Scalar;
                const auto cc = fem::detail::shear_constraint<S>(z, t0, L0);
                return eta[0] * cc[0] + eta[1] * cc[1];
            },
            z0, gc, Hc);
        for (int a = 0; a < 6; ++a) {
            for (int b = 0; b < 6; ++b) {
                if (Hc(a, b) != 0.0) lin.triplets.emplace_back(base + a, base + b, Hc(a, b));
            }
            for (int k = 0; k < 2; ++k) {
                if (J(k, a) == 0.0) continue;
                lin.triplets.emplace_back(base + a, eb + k, J(k, a));
                lin.triplets.emplace_back(eb + k, base + a, J(k, a));
            }
        }
    }
    return lin;
}

DofVector apply_increment(const DofVector& s, const VecX& du, double alpha, const KktLayout& lay) {
    DofVector out = s;
    out.t[0] += (alpha * du[0]) * lay.dir;
    for (int i = 1; i < lay.nodes; ++i) {
        const int b = lay.node_base(i);
        const Vec3 th = alpha * du.segment<3>(b + 6);
        const Mat3 R = so3::exp_matrix<double>(th);
        out.r[i] += alpha * du.segment<3>(b);
        // Tangents follow the nodal rotation; agrees with t + dt to first order.
        out.t[i] = R * s.t[i] + (alpha * du.segment<3>(b + 3) - th.cross(s.t[i]));
        out.rotations[i] = R * s.rotations[i];
        out.eta[i] += alpha * du.segment<2>(lay.eta_base(i));
    }
    return out;
}

void count_inertia(const SparseMatrix& K, int& pos, int& neg, int& zero) {
    pos = neg = zero = -1;
    if (K.rows() > 2000) return;
    const MatX D = MatX(K);
    const MatX S = 0.5 * (D + D.transpose());
    Eigen::SelfAdjointEigenSolver<MatX> es(S, Eigen::EigenvaluesOnly);
    const VecX ev = es.eigenvalues();
    const double tol = 1e-12 * std::max(1.0, ev.cwiseAbs().maxCoeff());
    pos = static_cast<int>((ev.array() > tol).count());
    neg = static_cast<int>((ev.array() < -tol).count());
    zero = static_cast<int>(ev.size()) - pos - neg;
}

}  // namespace

namespace {

void require_general_state(const DofVector& dofs, const fem::Grid& grid, const LoadCase& loads) {
    dofs.check(grid);
    if (!dofs.has_rotations()) throw ValidationError("general path: state needs nodal rotations");
    if (loads.has_tip_moment()) throw ValidationError("general path: a dead tip moment has no potential");
}

}  // namespace

double general_energy(const DofVector& dofs, const fem::Grid& grid, const rod::MaterialLaw& law,
                      const LoadCase& loads) {
    law.validate();
    require_general_state(dofs, grid, loads);
    const LoadCase lc = loads.effective();
    double E = 0.0;
    for (int e = 0; e < grid.elements(); ++e) {
        const GeneralElementData d = element_data(grid, dofs, law, lc, e);
        E += fem::detail::general_element_energy<double>(Vec18<double>::Zero(), d);
    }
    return E - lc.tip_force.dot(dofs.r.back());
}

VecX general_gradient(const DofVector& dofs, const fem::Grid& grid, const rod::MaterialLaw& law,
                      const LoadCase& loads) {
    law.validate();
    require_general_state(dofs, grid, loads);
    const LoadCase lc = loads.effective();
    VecX g = VecX::Zero(kGeneralNodeDofs * grid.nodes());
    for (int e = 0; e < grid.elements(); ++e) {
        const GeneralElementData d = element_data(grid, dofs, law, lc, e);
        Eigen::Matrix<double, 1, 18> jac;
        ad::jacobian<18, 1>(
            [&](const auto& z) {
                using S = typename std::decay_t<decltype(z)>::Scalar;
                Eigen::Matrix<S, 1, 1> out;
                out[0] = fem::detail::general_element_energy(z, d);
                return out;
            },
            Vec18<double>::Zero(), jac);
        g.segment<18>(kGeneralNodeDofs * e) += jac.transpose();
    }
    g.segment<3>(kGeneralNodeDofs * (grid.nodes() - 1)) -= lc.tip_force;
    return g;
}

DofVector general_chart_step(const DofVector& dofs, const VecX& increments) {
    if (!dofs.has_rotations() || increments.size() != kGeneralNodeDofs * dofs.nodes()) {
        throw ValidationError("general_chart_step: need rotations and 9 increments per node");
    }
    DofVector out = dofs;
    for (int i = 0; i < dofs.nodes(); ++i) {
        const int b = kGeneralNodeDofs * i;
        out.r[i] += increments.segment<3>(b);
        out.t[i] += increments.segment<3>(b + 3);
        out.rotations[i] = so3::exp_matrix<double>(Vec3(increments.segment<3>(b + 6))) * dofs.rotations[i];
    }
    return out;
}

SolveReport solve_general_static(const DofVector& x0, const fem::Grid& grid,
                                 const rod::MaterialLaw& law, const LoadCase& loads,
                                 const fem::Clamp& clamp, const SolverOptions& opt) {
    law.validate();
    loads.validate();
    x0.check(grid);
    if (clamp.free) throw ValidationError("solve_general_static: a clamp is required");
    if (opt.load_steps < 1) throw ValidationError("solver.load_steps must be at least 1");

    const KktLayout lay(grid, clamp);
    DofVector s = x0.has_rotations() ? x0 : lift_bishop_composite(x0, grid, clamp);
    s.r[0] = clamp.position;
    s.t[0] = s.t[0].dot(lay.dir) * lay.dir;
    s.rotations[0] = clamp.orientation;
    s.eta.assign(grid.nodes(), Vec2::Zero());
    if (x0.eta.size() == static_cast<std::size_t>(grid.nodes())) s.eta = x0.eta;
    s.eta[0] = Vec2::Zero();

    const fem::DofMap ti_map = fem::DofMap::clamped(grid, clamp);
    SolveReport rep;
    SparseMatrix K(lay.total, lay.total);

    auto newton = [&](const LoadCase& lc, double lambda) {
        const double scale =
            1.0 + ti_map.reduce(fem::assemble_load_vector(grid, lc)).norm() + lc.tip_moment.norm();
        const std::string where = " at load factor " + std::to_string(lambda);
        for (int it = 0;; ++it) {
            Linearization lin = linearize(grid, s, law, lc, lay, true, opt.threads);
            rep.energy = lin.energy;
            rep.residual = lin.residual.norm() / scale;
            rep.energy_history.push_back(lin.energy);
            if (rep.residual <= opt.tol) return true;
            if (it >= opt.max_iter) {
                rep.message = "no convergence in " + std::to_string(opt.max_iter) + " iterations" + where;
                return false;
            }
            K.setZero();
            K.setFromTriplets(lin.triplets.begin(), lin.triplets.end());
            K.makeCompressed();
            Eigen::SparseLU<SparseMatrix> lu;
            lu.compute(K);
            VecX du;
            if (lu.info() == Eigen::Success) du = lu.solve(-lin.residual);
            if (lu.info() != Eigen::Success || !du.allFinite()) {
                int p, n, z;
                count_inertia(K, p, n, z);
                throw SingularKKT("solve_general_static: singular KKT matrix" + where, p, n, z);
            }
            ++rep.iterations;
            double rmax = 1.0;
            for (const Vec3& r : s.r) rmax = std::max(rmax, r.lpNorm<Eigen::Infinity>());
            // Roundoff floor of stiff axial terms: a negligible step is convergence.
            if (du.head(lay.primal).lpNorm<Eigen::Infinity>() <= opt.tol * rmax) {
                s = apply_increment(s, du, 1.0, lay);
                const Linearization fin = linearize(grid, s, law, lc, lay, false, opt.threads);
                rep.energy = fin.energy;
                rep.residual = fin.residual.norm() / scale;
                rep.energy_history.push_back(fin.energy);
                return true;
            }
            // Accept on natural monotonicity (the simplified Newton correction
            // at the trial point shrinks) or on plain residual decrease.
            const double step_norm = du.norm();
            double alpha = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 30; ++ls, alpha *= 0.5) {
                const DofVector trial = apply_increment(s, du, alpha, lay);
                const VecX Rt = linearize(grid, trial, law, lc, lay, false, opt.threads).residual;
                if (!Rt.allFinite()) continue;
                const VecX dbar = lu.solve(-Rt);
                if (dbar.norm() <= (1.0 - 0.25 * alpha) * step_norm ||
                    Rt.norm() <= (1.0 - opt.armijo * alpha) * lin.residual.norm()) {
                    s = trial;
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
        const DofVector saved = s;
        const std::size_t hist = rep.energy_history.size();
        if (newton(loads.scaled(lambda).effective(), lambda)) return true;
        s = saved;
        rep.energy_history.resize(hist);
        return false;
    });
    if (ok) rep.message.clear();

    const LoadCase lc = loads.effective();
    const Linearization fin = linearize(grid, s, law, lc, lay, true, opt.threads);
    {
        SparseMatrix Kf(lay.total, lay.total);
        Kf.setFromTriplets(fin.triplets.begin(), fin.triplets.end());
        int p, n, z;
        count_inertia(Kf, p, n, z);
        rep.tangent_negative = n < 0 ? -1 : n - 2 * (lay.nodes - 1);
    }

    s.psi.assign(grid.nodes(), 0.0);
    for (int e = 0; e < grid.elements(); ++e) s.psi[e + 1] = s.psi[e] + fin.phi[e];
    rep.converged = ok;
    rep.multipliers.eta = s.eta;
    const int nq = static_cast<int>(grid.rule().xi.size());
    rep.multipliers.mu.clear();
    for (int e = 0; e < grid.elements(); ++e) {
        for (int k = 0; k < nq; ++k) rep.multipliers.mu.push_back(law.GJ * fin.phi[e] / grid.h(e));
    }
    rep.state = s;
    rep.tip = s.r.back();
    rep.tip_psi = s.psi.back();
    rep.fields = sample_fields(s, grid, law);
    return rep;
}

}  // namespace rodsim::statics
