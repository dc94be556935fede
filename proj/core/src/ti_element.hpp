#pragma once

// Element kernels of the transversely isotropic rod: cubic Hermite
// centerline with nodal tangents, linear twist. Element dofs are
// [r_a, t_a, psi_a, r_b, t_b, psi_b].

#include <Eigen/Core>

#include "rodsim/ad.hpp"
#include "rodsim/discretization.hpp"
#include "rodsim/types.hpp"

namespace rodsim::fem::detail {

template <typename S>
using Vec14 = Eigen::Matrix<S, 14, 1>;

template <typename T>
struct HermiteT {
    T N[4], dN[4], ddN[4];

    explicit HermiteT(const T& x) {
        const T x2 = x * x, x3 = x2 * x;
        N[0] = 1.0 - 3.0 * x2 + 2.0 * x3;
        N[1] = x - 2.0 * x2 + x3;
        N[2] = 3.0 * x2 - 2.0 * x3;
        N[3] = -x2 + x3;
        dN[0] = -6.0 * x + 6.0 * x2;
        dN[1] = 1.0 - 4.0 * x + 3.0 * x2;
        dN[2] = 6.0 * x - 6.0 * x2;
        dN[3] = -2.0 * x + 3.0 * x2;
        ddN[0] = -6.0 + 12.0 * x;
        ddN[1] = -4.0 + 6.0 * x;
        ddN[2] = 6.0 - 12.0 * x;
        ddN[3] = -2.0 + 6.0 * x;
    }
};

using Hermite = HermiteT<double>;

// Slot of Hermite coefficient k (r_a, t_a, r_b, t_b) in the element vector.
inline constexpr int kSlot[4] = {0, 3, 7, 10};
inline constexpr int kPsiA = 6;
inline constexpr int kPsiB = 13;

struct TiElementData {
    double h = 1.0;
    const QuadRule* rule = nullptr;
    double EA = 1.0, EI = 1.0, GJ = 1.0;
    Vec3 nbar = Vec3::Zero();
    double mbar = 0.0;
};

// Centerline derivative of order 0, 1 or 2 at local coordinate x.
template <typename S, typename T>
Vec3T<S> hermite_eval(const Vec14<S>& x, const HermiteT<T>& H, int order, double h) {
    const T* c = order == 0 ? H.N : (order == 1 ? H.dN : H.ddN);
    const double scale = order == 0 ? 1.0 : (order == 1 ? 1.0 / h : 1.0 / (h * h));
    Vec3T<S> out = Vec3T<S>::Zero();
    for (int k = 0; k < 4; ++k) {
        const S f = S(c[k] * (scale * ((k % 2 == 1) ? h : 1.0)));
        out += x.template segment<3>(kSlot[k]) * f;
    }
    return out;
}

template <typename S>
S ti_element_energy(const Vec14<S>& x, const TiElementData& e) {
    using std::sqrt;
    S E = S(0.0);
    const QuadRule& q = *e.rule;
    const S tau = (x[kPsiB] - x[kPsiA]) / e.h;
    for (std::size_t k = 0; k < q.xi.size(); ++k) {
        const Hermite H(q.xi[k]);
        const Vec3T<S> r = hermite_eval(x, H, 0, e.h);
        const Vec3T<S> rp = hermite_eval(x, H, 1, e.h);
        const Vec3T<S> rpp = hermite_eval(x, H, 2, e.h);
        const S l = sqrt(rp.squaredNorm());
        const Vec3T<S> d = rp / l;
        const Vec3T<S> dp = (rpp - d.dot(rpp) * d) / l;
        const S psi = (1.0 - q.xi[k]) * x[kPsiA] + q.xi[k] * x[kPsiB];
        S u = 0.5 * e.EA * (l - 1.0) * (l - 1.0) + 0.5 * e.EI * dp.squaredNorm() +
              0.5 * e.GJ * tau * tau;
        u -= e.nbar[0] * r[0] + e.nbar[1] * r[1] + e.nbar[2] * r[2];
        u -= e.mbar * psi;
        E += (q.w[k] * e.h) * u;
    }
    return E;
}

template <typename S>
Vec14<S> ti_element_gradient(const Vec14<S>& x, const TiElementData& e) {
    using std::sqrt;
    Vec14<S> g = Vec14<S>::Zero();
    const QuadRule& q = *e.rule;
    const S tau = (x[kPsiB] - x[kPsiA]) / e.h;
    for (std::size_t k = 0; k < q.xi.size(); ++k) {
        const Hermite H(q.xi[k]);
        const Vec3T<S> rp = hermite_eval(x, H, 1, e.h);
        const Vec3T<S> rpp = hermite_eval(x, H, 2, e.h);
        const S l = sqrt(rp.squaredNorm());
        const Vec3T<S> d = rp / l;
        const S drpp = d.dot(rpp);
        const Vec3T<S> dp = (rpp - drpp * d) / l;
        const Vec3T<S> g_rp = (e.EA * (l - 1.0) - e.EI * dp.squaredNorm() / l) * d -
                              (e.EI * drpp / (l * l)) * dp;
        const Vec3T<S> g_rpp = (e.EI / l) * dp;
        const double wh = q.w[k] * e.h;
        for (int a = 0; a < 4; ++a) {
            const double hs = (a % 2 == 1) ? e.h : 1.0;
            const double c1 = H.dN[a] * hs / e.h;
            const double c2 = H.ddN[a] * hs / (e.h * e.h);
            const double c0 = H.N[a] * hs;
            g.template segment<3>(kSlot[a]) += wh * (c1 * g_rp + c2 * g_rpp);
            g.template segment<3>(kSlot[a]) -= (wh * c0) * e.nbar;
        }
        g[kPsiA] -= wh * (1.0 - q.xi[k]) * e.mbar;
        g[kPsiB] -= wh * q.xi[k] * e.mbar;
    }
    g[kPsiA] -= e.GJ * tau;
    g[kPsiB] += e.GJ * tau;
    return g;
}

// Regularized kinetic energy 1/2 A_rho |v|^2 + 1/2 i_perp |d_dot|^2 +
// 1/2 i_par psi_dot^2 of one element: its value, the momenta dT/dv and the
// configuration derivative dT/dq.
struct TiInertiaData {
    double h = 1.0;
    const QuadRule* rule = nullptr;
    double A_rho = 1.0, i_perp = 1.0, i_par = 1.0;
};

template <typename S>
struct KineticTerms {
    S T = S(0.0);
    Vec14<S> p = Vec14<S>::Zero();
    Vec14<S> dTdq = Vec14<S>::Zero();
};

template <typename S>
KineticTerms<S> ti_element_kinetic(const Vec14<S>& x, const Vec14<S>& v, const TiInertiaData& m) {
    using std::sqrt;
    KineticTerms<S> out;
    const QuadRule& q = *m.rule;
    // Linear twist interpolation: exact two-node consistent mass.
    const S pa = v[kPsiA], pb = v[kPsiB];
    out.T += m.i_par * m.h * (pa * pa + pa * pb + pb * pb) / 6.0;
    out.p[kPsiA] += m.i_par * m.h * (2.0 * pa + pb) / 6.0;
    out.p[kPsiB] += m.i_par * m.h * (pa + 2.0 * pb) / 6.0;
    for (std::size_t k = 0; k < q.xi.size(); ++k) {
        const Hermite H(q.xi[k]);
        const Vec3T<S> vr = hermite_eval(v, H, 0, m.h);
        const Vec3T<S> rp = hermite_eval(x, H, 1, m.h);
        const Vec3T<S> vp = hermite_eval(v, H, 1, m.h);
        const S l = sqrt(rp.squaredNorm());
        const Vec3T<S> d = rp / l;
        const S dvp = d.dot(vp);
        const Vec3T<S> dd = (vp - dvp * d) / l;
        const double wh = q.w[k] * m.h;
        out.T += wh * (0.5 * m.A_rho * vr.squaredNorm() + 0.5 * m.i_perp * dd.squaredNorm());
        const Vec3T<S> p_v = m.A_rho * vr;
        const Vec3T<S> p_vp = (m.i_perp / l) * dd;
        const Vec3T<S> q_rp = -m.i_perp * ((dd.squaredNorm() / l) * d + (dvp / (l * l)) * dd);
        for (int a = 0; a < 4; ++a) {
            const double hs = (a % 2 == 1) ? m.h : 1.0;
            const double c0 = H.N[a] * hs;
            const double c1 = H.dN[a] * hs / m.h;
            out.p.template segment<3>(kSlot[a]) += wh * (c0 * p_v + c1 * p_vp);
            out.dTdq.template segment<3>(kSlot[a]) += (wh * c1) * q_rp;
        }
    }
    return out;
}

}  // namespace rodsim::fem::detail
