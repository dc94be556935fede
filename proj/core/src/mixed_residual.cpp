#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "general_element.hpp"
#include "rodsim/errors.hpp"
#include "rodsim/static_solver.hpp"

namespace rodsim::statics {

using fem::DofVector;

namespace {

using G = ad::Grad<1>;

struct PointEval {
    double l = 1.0;
    Vec3 d, dp;
    Vec3 n_par;
    Vec3 m_perp, m_perp_p;
};

// Fields at local coordinate xi of element e; s-derivatives by forward AD in xi.
PointEval eval_point(const DofVector& s, const fem::Grid& grid, const rod::MaterialLaw& law, int e,
                     double xi) {
    const double h = grid.h(e);
    G X(xi);
    X.d[0] = 1.0;
    fem::detail::Vec14<G> x;
    for (int k = 0; k < 3; ++k) {
        x[k] = G(s.r[e][k]);
        x[3 + k] = G(s.t[e][k]);
        x[7 + k] = G(s.r[e + 1][k]);
        x[10 + k] = G(s.t[e + 1][k]);
    }
    x[6] = G(s.psi[e]);
    x[13] = G(s.psi[e + 1]);
    const fem::detail::HermiteT<G> H(X);
    const Vec3T<G> rp = fem::detail::hermite_eval(x, H, 1, h);
    const Vec3T<G> rpp = fem::detail::hermite_eval(x, H, 2, h);
    const G l = sqrt(rp.squaredNorm());
    const Vec3T<G> d = rp / l;
    const Vec3T<G> dp = (rpp - d.dot(rpp) * d) / l;
    const Mat3T<G> La = s.rotations[e].cast<G>();
    const G phi(fem::detail::relative_twist<double>(s.rotations[e], s.rotations[e + 1]));
    const Vec3T<G> K = fem::detail::interpolated_curvature<G, G>(La, phi, X, d, dp);
    const Vec3T<G> mloc(law.EI1 * K[0], law.EI2 * K[1], G(0.0));
    const Vec3T<G> m = fem::detail::rotate_about<G>(
        d, G(X * phi), fem::detail::chi_apply<G>(Vec3T<G>(La.col(2)), d, Vec3T<G>(La * mloc)));

    PointEval p;
    p.l = l.v;
    for (int k = 0; k < 3; ++k) {
        p.d[k] = d[k].v;
        p.dp[k] = dp[k].v;
        p.m_perp[k] = m[k].v;
        p.m_perp_p[k] = m[k].d[0] / h;
    }
    p.n_par = law.EA * (p.l - 1.0) * p.d;
    return p;
}

// Integral of m_perp . d' over [xi0, 1] of element e.
double tail_integral(const DofVector& s, const fem::Grid& grid, const rod::MaterialLaw& law, int e,
                     double xi0, const fem::QuadRule& q) {
    double acc = 0.0;
    const double span = 1.0 - xi0;
    if (span <= 0.0) return 0.0;
    for (std::size_t k = 0; k < q.xi.size(); ++k) {
        const PointEval p = eval_point(s, grid, law, e, xi0 + span * q.xi[k]);
        acc += q.w[k] * span * grid.h(e) * p.m_perp.dot(p.dp);
    }
    return acc;
}

}  // namespace

LagrangeFields torsion_multiplier_from_twist(const DofVector& dofs, const fem::Grid& grid,
                                             const rod::MaterialLaw& law) {
    dofs.check(grid);
    LagrangeFields f;
    f.eta = dofs.eta.empty() ? std::vector<Vec2>(grid.nodes(), Vec2::Zero()) : dofs.eta;
    const std::size_t nq = grid.rule().xi.size();
    for (int e = 0; e < grid.elements(); ++e) {
        const double tau = (dofs.psi[e + 1] - dofs.psi[e]) / grid.h(e);
        for (std::size_t k = 0; k < nq; ++k) f.mu.push_back(law.GJ * tau);
    }
    return f;
}

MixedResidualReport mixed_residual_check(const DofVector& dofs, const LagrangeFields& fields,
                                         const fem::Grid& grid, const rod::MaterialLaw& law,
                                         const LoadCase& loads_in, double constraint_tol) {
    law.validate();
    loads_in.validate();
    const fem::ConstraintResiduals c = fem::assemble_constraints(grid, dofs);
    const fem::QuadRule& q = grid.rule();
    const std::size_t nq = q.xi.size();
    if (fields.mu.size() != nq * static_cast<std::size_t>(grid.elements())) {
        throw ValidationError("mixed_residual_check: mu must have one sample per quadrature point");
    }
    MixedResidualReport rep;
    rep.constraint = c.max_abs();
    if (!(rep.constraint <= constraint_tol)) {
        throw ValidationError("mixed_residual_check: constraint violation " +
                              std::to_string(rep.constraint) + " exceeds tolerance");
    }

    const LoadCase loads = loads_in.effective();
    const double L = grid.s(grid.nodes() - 1);
    const fem::QuadRule sub = fem::gauss_legendre(6);
    const int ne = grid.elements();

    // Suffix sums of the full-element integrals of m_perp . d'.
    std::vector<double> suffix(ne + 1, 0.0);
    for (int e = ne - 1; e >= 0; --e) suffix[e] = suffix[e + 1] + tail_integral(dofs, grid, law, e, 0.0, sub);

    for (int e = 0; e < ne; ++e) {
        const double h = grid.h(e);
        const double m_par = law.GJ * (dofs.psi[e + 1] - dofs.psi[e]) / h;
        for (std::size_t k = 0; k < nq; ++k) {
            const double xi = q.xi[k];
            const double s = grid.s(e) + xi * h;
            const double mu = fields.mu[e * nq + k];
            const PointEval p = eval_point(dofs, grid, law, e, xi);
            const double tail = tail_integral(dofs, grid, law, e, xi, sub) + suffix[e + 1];
            const Vec3 outer = loads.tip_force + (L - s) * loads.distributed_force;
            const Vec3 bend = (p.d / p.l).cross(p.m_perp_p);
            const Vec3 F4 = p.n_par + bend - outer;
            const Vec3 F7 = p.n_par + bend - outer;
            const double T4 = m_par - loads.tip_tangent_moment -
                              loads.distributed_tangent_moment * (L - s) + tail;
            const double T7a = (m_par - mu) - loads.distributed_tangent_moment * (L - s);
            const double T7b = mu - loads.tip_tangent_moment + tail;
            rep.force_general = std::max(rep.force_general, F4.norm());
            rep.torsion_general = std::max(rep.torsion_general, std::abs(T4));
            rep.force_mixed = std::max(rep.force_mixed, F7.norm());
            rep.torsion_mixed = std::max({rep.torsion_mixed, std::abs(T7a), std::abs(T7b)});
            rep.difference = std::max({rep.difference, (F4 - F7).norm(), std::abs(T4 - T7a - T7b)});
        }
    }

    const PointEval tip = eval_point(dofs, grid, law, ne - 1, 1.0);
    const double m_par_tip = law.GJ * (dofs.psi[ne] - dofs.psi[ne - 1]) / grid.h(ne - 1);
    const double mu_tip = fields.mu.back();
    rep.boundary_general =
        std::max(tip.m_perp.norm(), std::abs(m_par_tip - loads.tip_tangent_moment));
    rep.boundary_mixed = std::max(tip.m_perp.norm(), std::abs(mu_tip - loads.tip_tangent_moment));
    rep.difference = std::max(rep.difference, std::abs(rep.boundary_general - rep.boundary_mixed));
    return rep;
}

}  // namespace rodsim::statics
