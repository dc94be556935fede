#pragma once

// Element kernels of the constrained (general section) rod. Each node carries
// position r, Hermite tangent t and an absolute rotation Lambda; the kernels
// are evaluated at increments [dr, dt, theta] per node with
// Lambda = exp(hat(theta)) Lambda_0, so the derivatives at zero increment are
// taken in the chart of the current rotation.

#include <cmath>

#include <Eigen/Core>

#include "rodsim/ad.hpp"
#include "rodsim/so3.hpp"
#include "ti_element.hpp"

namespace rodsim::fem::detail {

template <typename S>
using Vec18 = Eigen::Matrix<S, 18, 1>;

inline constexpr int kGeneralNodeDofs = 9;

// Twist of Lambda_b relative to the drill-free transport of Lambda_a.
template <typename S>
S relative_twist(const Mat3T<S>& La, const Mat3T<S>& Lb) {
    using std::atan2;
    const Mat3T<S> Tb = so3::chi_matrix<S>(Vec3T<S>(La.col(2)), Vec3T<S>(Lb.col(2))) * La;
    const Mat3T<S> M = Tb.transpose() * Lb;
    return atan2(M(1, 0), M(0, 0));
}

// chi(a, d)^T w.
template <typename S>
Vec3T<S> chi_transpose_apply(const Vec3T<S>& a, const Vec3T<S>& d, const Vec3T<S>& w) {
    const S c = a.dot(d);
    const Vec3T<S> k = a.cross(d);
    return c * w - k.cross(w) + k * (k.dot(w) / (1.0 + c));
}

// chi(a, d) w.
template <typename S>
Vec3T<S> chi_apply(const Vec3T<S>& a, const Vec3T<S>& d, const Vec3T<S>& w) {
    const S c = a.dot(d);
    const Vec3T<S> k = a.cross(d);
    return c * w + k.cross(w) + k * (k.dot(w) / (1.0 + c));
}

// Rotation of v by angle a about the unit axis n.
template <typename S>
Vec3T<S> rotate_about(const Vec3T<S>& n, const S& a, const Vec3T<S>& v) {
    using std::cos;
    using std::sin;
    const S c = cos(a), s = sin(a);
    return c * v + s * n.cross(v) + ((1.0 - c) * n.dot(v)) * n;
}

struct GeneralElementData {
    double h = 1.0;
    const QuadRule* rule = nullptr;
    double EA = 1.0, EI1 = 1.0, EI2 = 1.0, GJ = 1.0;
    Vec3 nbar = Vec3::Zero();
    // Work conjugate of the element twist: distributed and tip tangent moments.
    double twist_load = 0.0;
    Vec3 ra, ta, rb, tb;
    Mat3 La, Lb;
};

// Current element state at increments z.
template <typename S>
struct GeneralElementState {
    Vec14<S> x;
    Mat3T<S> La, Lb;
    S phi;
};

template <typename S>
GeneralElementState<S> general_state(const Vec18<S>& z, const GeneralElementData& e) {
    GeneralElementState<S> st;
    st.x.setZero();
    st.x.template segment<3>(0) = e.ra.template cast<S>() + z.template segment<3>(0);
    st.x.template segment<3>(3) = e.ta.template cast<S>() + z.template segment<3>(3);
    st.x.template segment<3>(7) = e.rb.template cast<S>() + z.template segment<3>(9);
    st.x.template segment<3>(10) = e.tb.template cast<S>() + z.template segment<3>(12);
    st.La = so3::exp_matrix<S>(Vec3T<S>(z.template segment<3>(6))) * e.La.template cast<S>();
    st.Lb = so3::exp_matrix<S>(Vec3T<S>(z.template segment<3>(15))) * e.Lb.template cast<S>();
    st.phi = relative_twist<S>(st.La, st.Lb);
    return st;
}

// Convected bending strain K = Lambda(s)^T (d x d') with the interpolated
// frame Lambda(s) = exp(xi phi hat(d)) chi(e3_a, d) Lambda_a.
template <typename S, typename X>
Vec3T<S> interpolated_curvature(const Mat3T<S>& La, const S& phi, const X& xi, const Vec3T<S>& d,
                                const Vec3T<S>& dp) {
    const Vec3T<S> b = d.cross(dp);
    const Vec3T<S> v1 = rotate_about<S>(d, S(-(xi * phi)), b);
    const Vec3T<S> v2 = chi_transpose_apply<S>(Vec3T<S>(La.col(2)), d, v1);
    return La.transpose() * v2;
}

template <typename S>
S general_element_energy(const Vec18<S>& z, const GeneralElementData& e) {
    using std::sqrt;
    const GeneralElementState<S> st = general_state(z, e);
    const QuadRule& q = *e.rule;
    S E = 0.5 * e.GJ * st.phi * st.phi / e.h - e.twist_load * st.phi;
    for (std::size_t k = 0; k < q.xi.size(); ++k) {
        const Hermite H(q.xi[k]);
        const Vec3T<S> r = hermite_eval(st.x, H, 0, e.h);
        const Vec3T<S> rp = hermite_eval(st.x, H, 1, e.h);
        const Vec3T<S> rpp = hermite_eval(st.x, H, 2, e.h);
        const S l = sqrt(rp.squaredNorm());
        const Vec3T<S> d = rp / l;
        const Vec3T<S> dp = (rpp - d.dot(rpp) * d) / l;
        const Vec3T<S> K = interpolated_curvature(st.La, st.phi, q.xi[k], d, dp);
        S u = 0.5 * e.EA * (l - 1.0) * (l - 1.0) + 0.5 * e.EI1 * K[0] * K[0] +
              0.5 * e.EI2 * K[1] * K[1];
        u -= e.nbar[0] * r[0] + e.nbar[1] * r[1] + e.nbar[2] * r[2];
        E += (q.w[k] * e.h) * u;
    }
    return E;
}

// Shear constraint at one node, increments [dt, theta]:
// first two components of (Lambda^T t) x E3.
template <typename S>
Eigen::Matrix<S, 2, 1> shear_constraint(const Eigen::Matrix<S, 6, 1>& z, const Vec3& t0,
                                        const Mat3& L0) {
    const Vec3T<S> t = t0.template cast<S>() + z.template segment<3>(0);
    const Mat3T<S> L = so3::exp_matrix<S>(Vec3T<S>(z.template segment<3>(3))) * L0.template cast<S>();
    const Vec3T<S> x = L.transpose() * t;
    Eigen::Matrix<S, 2, 1> c;
    c << x[1], -x[0];
    return c;
}

}  // namespace rodsim::fem::detail
