#include "rodsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/SparseLU>

#include "parallel.hpp"
#include "rodsim/errors.hpp"
#include "ti_element.hpp"

namespace rodsim::dyn {

using fem::DofVector;
using fem::kNodeDofs;
using fem::SparseMatrix;
using fem::detail::TiElementData;
using fem::detail::TiInertiaData;
using fem::detail::Vec14;
using Mat14 = Eigen::Matrix<double, 14, 14>;

DynamicState DynamicState::at_rest(const DofVector& dofs, double t) {
    DynamicState s;
    s.dofs = dofs;
    s.rates = VecX::Zero(kNodeDofs * dofs.nodes());
    s.t = t;
    return s;
}

void DynamicState::check(const fem::Grid& grid) const {
    dofs.check(grid);
    if (rates.size() != kNodeDofs * grid.nodes()) {
        throw ValidationError("state.rates: size does not match the grid");
    }
    if (!rates.allFinite() || !std::isfinite(t)) throw ValidationError("state: non-finite entries");
}

void IntegratorConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("integrator.dt must be positive");
    if (!(t_end >= 0.0)) throw ValidationError("integrator.t_end must be non-negative");
    if (!(newton_tol > 0.0)) throw ValidationError("integrator.newton_tol must be positive");
    if (max_newton < 1) throw ValidationError("integrator.max_newton must be at least 1");
    if (output_stride < 1) throw ValidationError("integrator.output_stride must be at least 1");
}

void RodProblem::validate() const {
    if (grid == nullptr) throw ValidationError("problem: grid is missing");
    law.validate();
    inertia.validate();
    loads.validate();
    if (!law.transversely_isotropic()) {
        throw ValidationError("dynamics: material is not transversely isotropic (EI1 != EI2)");
    }
    inertia.i_perp();
    if (loads.has_tip_moment()) throw ValidationError("dynamics: tip bending moments are not supported");
}

namespace {

TiElementData stiffness_data(const RodProblem& pb, int e, const LoadCase& lc) {
    TiElementData d;
    d.h = pb.grid->h(e);
    d.rule = &pb.grid->rule();
    d.EA = pb.law.EA;
    d.EI = pb.law.EI1;
    d.GJ = pb.law.GJ;
    d.nbar = lc.distributed_force;
    d.mbar = lc.distributed_tangent_moment;
    return d;
}

TiInertiaData inertia_data(const RodProblem& pb, int e) {
    TiInertiaData m;
    m.h = pb.grid->h(e);
    m.rule = &pb.grid->rule();
    m.A_rho = pb.inertia.A_rho;
    m.i_perp = pb.inertia.i_perp();
    m.i_par = pb.inertia.I_par;
    return m;
}

struct Assembled {
    VecX vec;
    std::vector<Mat14> blocks;
};

template <typename F>
VecX assemble_vector(const RodProblem& pb, int threads, F&& element) {
    const int ne = pb.grid->elements();
    std::vector<Vec14<double>> parts(ne);
    rodsim::detail::parallel_for(ne, threads, [&](int e) { parts[e] = element(e); });
    VecX out = VecX::Zero(kNodeDofs * pb.grid->nodes());
    for (int e = 0; e < ne; ++e) out.segment<14>(kNodeDofs * e) += parts[e];
    return out;
}

SparseMatrix from_blocks(int n, const std::vector<Mat14>& blocks) {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(blocks.size() * 196);
    for (std::size_t e = 0; e < blocks.size(); ++e) {
        const int base = kNodeDofs * static_cast<int>(e);
        for (int i = 0; i < 14; ++i) {
            for (int j = 0; j < 14; ++j) {
                if (blocks[e](i, j) != 0.0) trip.emplace_back(base + i, base + j, blocks[e](i, j));
            }
        }
    }
    SparseMatrix M(n, n);
    M.setFromTriplets(trip.begin(), trip.end());
    return M;
}

}  // namespace

double kinetic_energy(const RodProblem& pb, const DofVector& dofs, const VecX& rates) {
    pb.validate();
    const VecX x = dofs.pack();
    double T = 0.0;
    for (int e = 0; e < pb.grid->elements(); ++e) {
        const Vec14<double> xe = x.segment<14>(kNodeDofs * e);
        const Vec14<double> ve = rates.segment<14>(kNodeDofs * e);
        T += fem::detail::ti_element_kinetic<double>(xe, ve, inertia_data(pb, e)).T;
    }
    return T;
}

VecX momenta(const RodProblem& pb, const DofVector& dofs, const VecX& rates) {
    pb.validate();
    const VecX x = dofs.pack();
    return assemble_vector(pb, 1, [&](int e) {
        return fem::detail::ti_element_kinetic<double>(x.segment<14>(kNodeDofs * e),
                                                       rates.segment<14>(kNodeDofs * e),
                                                       inertia_data(pb, e))
            .p;
    });
}

VecX kinetic_configuration_force(const RodProblem& pb, const DofVector& dofs, const VecX& rates) {
    pb.validate();
    const VecX x = dofs.pack();
    return assemble_vector(pb, 1, [&](int e) {
        return fem::detail::ti_element_kinetic<double>(x.segment<14>(kNodeDofs * e),
                                                       rates.segment<14>(kNodeDofs * e),
                                                       inertia_data(pb, e))
            .dTdq;
    });
}

SparseMatrix mass_matrix(const RodProblem& pb, const DofVector& dofs) {
    pb.validate();
    const VecX x = dofs.pack();
    const int ne = pb.grid->elements();
    std::vector<Mat14> blocks(ne);
    for (int e = 0; e < ne; ++e) {
        const Vec14<double> xe = x.segment<14>(kNodeDofs * e);
        const TiInertiaData m = inertia_data(pb, e);
        ad::jacobian<14, 14>(
            [&](const Vec14<ad::Grad<14>>& v) {
                return fem::detail::ti_element_kinetic<ad::Grad<14>>(xe.cast<ad::Grad<14>>(), v, m).p;
            },
            Vec14<double>::Zero(), blocks[e]);
    }
    return from_blocks(kNodeDofs * pb.grid->nodes(), blocks);
}

VecX semidiscrete_residual(const RodProblem& pb, const DynamicState& state,
                           const VecX& accelerations) {
    pb.validate();
    state.check(*pb.grid);
    if (accelerations.size() != state.rates.size()) {
        throw ValidationError("accelerations: size does not match the rates");
    }
    using D1 = ad::Grad<1>;
    const VecX x = state.dofs.pack();
    const LoadCase lc = pb.loads.effective();
    // Time derivative of the momenta along (q + e v, v + e a).
    VecX R = assemble_vector(pb, 1, [&](int e) {
        Vec14<D1> xs, vs;
        for (int i = 0; i < 14; ++i) {
            const int g = kNodeDofs * e + i;
            xs[i] = D1(x[g]);
            xs[i].d[0] = state.rates[g];
            vs[i] = D1(state.rates[g]);
            vs[i].d[0] = accelerations[g];
        }
        const auto k = fem::detail::ti_element_kinetic<D1>(xs, vs, inertia_data(pb, e));
        const Vec14<double> xe = x.segment<14>(kNodeDofs * e);
        Vec14<double> out = fem::detail::ti_element_gradient<double>(xe, stiffness_data(pb, e, lc));
        for (int i = 0; i < 14; ++i) out[i] += k.p[i].d[0] - k.dTdq[i].v;
        return out;
    });
    const int n = pb.grid->nodes() - 1;
    R.segment<3>(kNodeDofs * n) -= lc.tip_force;
    R[kNodeDofs * n + 6] -= lc.tip_tangent_moment;
    return fem::DofMap::clamped(*pb.grid, pb.clamp).reduce(R);
}

DynamicState step_midpoint(const RodProblem& pb, const DynamicState& state,
                           const IntegratorConfig& cfg) {
    pb.validate();
    cfg.validate();
    state.check(*pb.grid);
    const fem::Grid& grid = *pb.grid;
    const fem::DofMap map = fem::DofMap::clamped(grid, pb.clamp);
    const SparseMatrix& B = map.B();
    const LoadCase lc = pb.loads.effective();
    const int ne = grid.elements();
    const int nfull = kNodeDofs * grid.nodes();
    const double dt = cfg.dt;

    const VecX qn = state.dofs.pack();
    const VecX pn = momenta(pb, state.dofs, state.rates);
    VecX f_tip = VecX::Zero(nfull);
    f_tip.segment<3>(kNodeDofs * (grid.nodes() - 1)) = lc.tip_force;
    f_tip[nfull - 1] = lc.tip_tangent_moment;

    // Midpoint velocity on the free dofs.
    VecX w = B.transpose() * state.rates;

    std::vector<Vec14<double>> res(ne);
    std::vector<Mat14> jac(ne);
    bool converged = false;
    double prev_norm = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < cfg.max_newton; ++it) {
        const VecX v = B * w;
        rodsim::detail::parallel_for(ne, cfg.threads, [&](int e) {
            const Vec14<double> qe = qn.segment<14>(kNodeDofs * e);
            const Vec14<double> ve = v.segment<14>(kNodeDofs * e);
            const TiElementData kd = stiffness_data(pb, e, lc);
            const TiInertiaData md = inertia_data(pb, e);
            res[e] = ad::jacobian<14, 14>(
                [&](const Vec14<ad::Grad<14>>& vv) {
                    using G = ad::Grad<14>;
                    const Vec14<G> qm = qe.cast<G>() + (0.5 * dt) * vv;
                    const auto k = fem::detail::ti_element_kinetic<G>(qm, vv, md);
                    const Vec14<G> gV = fem::detail::ti_element_gradient<G>(qm, kd);
                    return Vec14<G>(2.0 * k.p - dt * k.dTdq + dt * gV);
                },
                ve, jac[e]);
        });
        VecX G = -2.0 * pn - dt * f_tip;
        // Size of the summed terms, the reference for the residual.
        VecX mag = 2.0 * pn.cwiseAbs() + dt * f_tip.cwiseAbs();
        for (int e = 0; e < ne; ++e) {
            G.segment<14>(kNodeDofs * e) += res[e];
            mag.segment<14>(kNodeDofs * e) += res[e].cwiseAbs();
        }
        const VecX Gr = B.transpose() * G;
        if (!Gr.allFinite()) break;
        const double scale = 1.0 + (B.transpose() * mag).norm();
        const double gnorm = Gr.norm();
        // Stalled at the rounding floor just above the tolerance.
        const bool stalled = gnorm > 0.5 * prev_norm && gnorm <= 1e2 * cfg.newton_tol * scale;
        if (gnorm <= cfg.newton_tol * scale || stalled) {
            converged = true;
            break;
        }
        prev_norm = gnorm;
        SparseMatrix J = from_blocks(nfull, jac);
        SparseMatrix Jr = B.transpose() * J * B;
        Jr.makeCompressed();
        Eigen::SparseLU<SparseMatrix> lu(Jr);
        if (lu.info() != Eigen::Success) break;
        const VecX dw = lu.solve(-Gr);
        if (!dw.allFinite()) break;
        w += dw;
        if (dw.norm() <= cfg.newton_tol * (1.0 + w.norm())) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw StepNonConvergence("step_midpoint: Newton failed at t = " + std::to_string(state.t) +
                                 " after " + std::to_string(it) + " iterations; reduce dt");
    }

    const VecX vm = B * w;
    DynamicState next;
    next.t = state.t + dt;
    next.dofs = DofVector::from_packed(qn + dt * vm);
    {
        const VecX qm = qn + 0.5 * dt * vm;
        const DofVector mid = DofVector::from_packed(qm);
        const VecX pm = momenta(pb, mid, vm);
        const VecX pnext = 2.0 * pm - pn;
        const SparseMatrix M = mass_matrix(pb, next.dofs);
        SparseMatrix Mr = B.transpose() * M * B;
        Mr.makeCompressed();
        Eigen::SparseLU<SparseMatrix> lu(Mr);
        if (lu.info() != Eigen::Success) {
            throw StepNonConvergence("step_midpoint: singular mass matrix at t = " +
                                     std::to_string(next.t));
        }
        next.rates = B * VecX(lu.solve(B.transpose() * pnext));
    }
    return next;
}

std::vector<DynamicState> integrate(const RodProblem& pb, const DynamicState& initial,
                                    const IntegratorConfig& cfg) {
    cfg.validate();
    std::vector<DynamicState> out{initial};
    const long steps = std::lround(std::ceil(cfg.t_end / cfg.dt - 1e-9));
    DynamicState s = initial;
    for (long k = 1; k <= steps; ++k) {
        s = step_midpoint(pb, s, cfg);
        if (k % cfg.output_stride == 0 || k == steps) out.push_back(s);
    }
    return out;
}

std::vector<EnergySample> energy_audit(const RodProblem& pb,
                                       const std::vector<DynamicState>& trajectory) {
    std::vector<EnergySample> out;
    out.reserve(trajectory.size());
    for (const DynamicState& s : trajectory) {
        EnergySample e;
        e.t = s.t;
        e.kinetic = kinetic_energy(pb, s.dofs, s.rates);
        e.potential = fem::assemble_energy(*pb.grid, s.dofs, pb.law, pb.loads);
        e.total = e.kinetic + e.potential;
        out.push_back(e);
    }
    return out;
}

double relative_energy_drift(const std::vector<EnergySample>& samples) {
    if (samples.empty()) return 0.0;
    const double E0 = samples.front().total;
    double worst = 0.0;
    for (const EnergySample& s : samples) worst = std::max(worst, std::abs(s.total - E0));
    return E0 != 0.0 ? worst / std::abs(E0) : worst;
}

double dominant_frequency(const std::vector<double>& t, const std::vector<double>& y, double f_lo,
                          double f_hi, int grid) {
    const std::size_t n = y.size();
    if (t.size() != n || n < 8) throw ValidationError("dominant_frequency: need matching samples, at least 8");
    if (!(f_lo >= 0.0) || !(f_hi > f_lo) || grid < 2) {
        throw ValidationError("dominant_frequency: need 0 <= f_lo < f_hi and grid >= 2");
    }
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    std::vector<double> yw(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * k / static_cast<double>(n - 1));
        yw[k] = w * (y[k] - mean);
    }
    auto power = [&](double f) {
        double re = 0.0, im = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double a = 2.0 * std::numbers::pi * f * t[k];
            re += yw[k] * std::cos(a);
            im += yw[k] * std::sin(a);
        }
        return re * re + im * im;
    };
    const double df = (f_hi - f_lo) / grid;
    double best = f_lo, best_p = -1.0;
    for (int i = 0; i <= grid; ++i) {
        const double f = f_lo + df * i;
        const double p = power(f);
        if (p > best_p) {
            best_p = p;
            best = f;
        }
    }
    double a = std::max(f_lo, best - df), b = std::min(f_hi, best + df);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a), d = a + g * (b - a);
    double pc = power(c), pd = power(d);
    for (int it = 0; it < 80 && b - a > 1e-14 * b; ++it) {
        if (pc > pd) {
            b = d;
            d = c;
            pd = pc;
            c = b - g * (b - a);
            pc = power(c);
        } else {
            a = c;
            c = d;
            pc = pd;
            d = a + g * (b - a);
            pd = power(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace rodsim::dyn
