#include "rodsim/frames.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rodsim/errors.hpp"

namespace rodsim::frames {

namespace {

// Derivative at x0 of the parabola through three samples.
template <typename T>
T one_sided_slope(double x0, double x1, double x2, const T& y0, const T& y1, const T& y2) {
    const double h1 = x1 - x0;
    const double h2 = x2 - x0;
    return -(h1 + h2) / (h1 * h2) * y0 + h2 / (h1 * (h2 - h1)) * y1 - h1 / (h2 * (h2 - h1)) * y2;
}

// Second-order derivative of samples y on a nonuniform grid s.
std::vector<double> differentiate(const std::vector<double>& s, const std::vector<double>& y) {
    const std::size_t n = s.size();
    std::vector<double> dy(n, 0.0);
    if (n < 2) return dy;
    if (n == 2) {
        dy[0] = dy[1] = (y[1] - y[0]) / (s[1] - s[0]);
        return dy;
    }
    dy[0] = one_sided_slope(s[0], s[1], s[2], y[0], y[1], y[2]);
    dy[n - 1] = one_sided_slope(s[n - 1], s[n - 2], s[n - 3], y[n - 1], y[n - 2], y[n - 3]);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = s[i] - s[i - 1];
        const double hp = s[i + 1] - s[i];
        dy[i] = -hp / (hm * (hm + hp)) * y[i - 1] + (hp - hm) / (hm * hp) * y[i] +
                hm / (hp * (hm + hp)) * y[i + 1];
    }
    return dy;
}

Mat3 ds_at(const RotationField& L, int i, int j) {
    if (i == 0) return (-3.0 * L(0, j) + 4.0 * L(1, j) - L(2, j)) / (2.0 * L.ds);
    if (i == L.ns - 1) {
        return (3.0 * L(i, j) - 4.0 * L(i - 1, j) + L(i - 2, j)) / (2.0 * L.ds);
    }
    return (L(i + 1, j) - L(i - 1, j)) / (2.0 * L.ds);
}

Mat3 dt_at(const RotationField& L, int i, int j) {
    if (j == 0) return (-3.0 * L(i, 0) + 4.0 * L(i, 1) - L(i, 2)) / (2.0 * L.dt);
    if (j == L.nt - 1) {
        return (3.0 * L(i, j) - 4.0 * L(i, j - 1) + L(i, j - 2)) / (2.0 * L.dt);
    }
    return (L(i, j + 1) - L(i, j - 1)) / (2.0 * L.dt);
}

void require_grid(int ns, int nt, const char* what) {
    if (ns < 3 || nt < 3) {
        throw ValidationError(std::string(what) + ": need at least 3 points per axis");
    }
}

}  // namespace

SampledCurve SampledCurve::from_positions(std::vector<double> s, std::vector<Vec3> r,
                                          std::optional<Vec3> start_slope,
                                          std::optional<Vec3> end_slope) {
    const std::size_t n = s.size();
    if (n < 3 || r.size() != n) {
        throw ValidationError("SampledCurve: need at least 3 matching samples");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(s[i + 1] > s[i])) throw ValidationError("SampledCurve: s must increase strictly");
    }
    const Vec3 y0p = start_slope.value_or(one_sided_slope(s[0], s[1], s[2], r[0], r[1], r[2]));
    const Vec3 ynp = end_slope.value_or(
        one_sided_slope(s[n - 1], s[n - 2], s[n - 3], r[n - 1], r[n - 2], r[n - 3]));

    // Tridiagonal system for the nodal second derivatives M.
    std::vector<double> a(n, 0.0), b(n, 0.0), c(n, 0.0);
    std::vector<Vec3> rhs(n);
    const double h0 = s[1] - s[0];
    b[0] = 2.0 * h0;
    c[0] = h0;
    rhs[0] = 6.0 * ((r[1] - r[0]) / h0 - y0p);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hm = s[i] - s[i - 1];
        const double hp = s[i + 1] - s[i];
        a[i] = hm;
        b[i] = 2.0 * (hm + hp);
        c[i] = hp;
        rhs[i] = 6.0 * ((r[i + 1] - r[i]) / hp - (r[i] - r[i - 1]) / hm);
    }
    const double hn = s[n - 1] - s[n - 2];
    a[n - 1] = hn;
    b[n - 1] = 2.0 * hn;
    rhs[n - 1] = 6.0 * (ynp - (r[n - 1] - r[n - 2]) / hn);

    for (std::size_t i = 1; i < n; ++i) {
        const double m = a[i] / b[i - 1];
        b[i] -= m * c[i - 1];
        rhs[i] -= m * rhs[i - 1];
    }
    std::vector<Vec3> M(n);
    M[n - 1] = rhs[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) M[i] = (rhs[i] - c[i] * M[i + 1]) / b[i];

    SampledCurve curve;
    curve.rp.resize(n);
    curve.rpp = M;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = s[i + 1] - s[i];
        curve.rp[i] = (r[i + 1] - r[i]) / h - h * (2.0 * M[i] + M[i + 1]) / 6.0;
    }
    curve.rp[n - 1] = (r[n - 1] - r[n - 2]) / hn + hn * (M[n - 2] + 2.0 * M[n - 1]) / 6.0;
    curve.s = std::move(s);
    curve.r = std::move(r);
    curve.validate();
    return curve;
}

Vec3 SampledCurve::tangent_rate(std::size_t i) const {
    const double l = rp[i].norm();
    const Vec3 d = rp[i] / l;
    return (rpp[i] - d.dot(rpp[i]) * d) / l;
}

void SampledCurve::validate() const {
    const std::size_t n = s.size();
    if (n < 2 || r.size() != n || rp.size() != n || rpp.size() != n) {
        throw ValidationError("SampledCurve: sample arrays must share a length of at least 2");
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (!(s[i + 1] > s[i])) throw ValidationError("SampledCurve: s must increase strictly");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(rp[i].norm() > 0.0)) {
            throw RegularityError("SampledCurve: vanishing tangent at sample " + std::to_string(i));
        }
    }
}

FrameField bishop_transport(const SampledCurve& curve, const so3::Director& u0) {
    curve.validate();
    const std::size_t n = curve.size();
    Vec3 d = curve.tangent(0);
    if (std::abs(u0.vec().dot(d)) > 1e-8) {
        throw ValidationError("bishop_transport: u0 is not orthogonal to the initial tangent");
    }
    FrameField frames(n);
    Vec3 u = (u0.vec() - u0.vec().dot(d) * d).normalized();
    frames[0] = Triad{u, d.cross(u), d};
    for (std::size_t i = 1; i < n; ++i) {
        const Vec3 dn = curve.tangent(i);
        const so3::Rotation chi = so3::chi_no_drill(so3::Director(d), so3::Director(dn));
        u = chi * u;
        u = (u - u.dot(dn) * dn).normalized();
        d = dn;
        frames[i] = Triad{u, d.cross(u), d};
    }
    return frames;
}

FrameField twisted(const FrameField& frames, const std::vector<double>& psi) {
    if (psi.size() != frames.size()) throw ValidationError("twisted: grid mismatch");
    FrameField out(frames.size());
    for (std::size_t i = 0; i < frames.size(); ++i) {
        const double c = std::cos(psi[i]);
        const double s = std::sin(psi[i]);
        const Triad& f = frames[i];
        out[i] = Triad{c * f.u + s * f.v, -s * f.u + c * f.v, f.d};
    }
    return out;
}

double holonomy(const FrameField& frames, double closure_tol) {
    if (frames.size() < 2) throw ValidationError("holonomy: need at least two frames");
    const Triad& a = frames.front();
    const Triad& b = frames.back();
    if ((a.d - b.d).norm() > closure_tol) {
        throw ValidationError("holonomy: tangent loop is not closed");
    }
    return so3::signed_angle(a.u, b.u, a.d);
}

std::vector<Vec3> darboux(const SampledCurve& curve, const std::vector<double>& psi) {
    curve.validate();
    if (psi.size() != curve.size()) throw ValidationError("darboux: grid mismatch");
    const std::vector<double> psi_p = differentiate(curve.s, psi);
    std::vector<Vec3> omega(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Vec3 d = curve.tangent(i);
        omega[i] = d.cross(curve.tangent_rate(i)) + psi_p[i] * d;
    }
    return omega;
}

std::vector<double> drill_free_torsion_density(const SampledCurve& curve, const so3::Director& d0,
                                               double tol_antipodal) {
    curve.validate();
    std::vector<double> out(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const Vec3 d = curve.tangent(i);
        const double c = d0.vec().dot(d);
        if (c <= -1.0 + tol_antipodal) {
            throw SingularDrillFreeMap("drill_free_torsion_density: tangent antipodal to d0 at sample " +
                                       std::to_string(i));
        }
        out[i] = -d0.vec().cross(d).dot(curve.tangent_rate(i)) / (1.0 + c);
    }
    return out;
}

std::vector<double> correction_angle_profile(const SampledCurve& curve, const so3::Director& d0) {
    const std::vector<double> a = drill_free_torsion_density(curve, d0);
    std::vector<double> psi(a.size(), 0.0);
    for (std::size_t i = 1; i < a.size(); ++i) {
        psi[i] = psi[i - 1] - 0.5 * (a[i - 1] + a[i]) * (curve.s[i] - curve.s[i - 1]);
    }
    return psi;
}

double accumulated_correction_angle(const SampledCurve& curve, const so3::Director& d0, double s) {
    if (s < curve.s.front() || s > curve.s.back()) {
        throw ValidationError("accumulated_correction_angle: s outside the sampled range");
    }
    const std::vector<double> psi = correction_angle_profile(curve, d0);
    const auto it = std::upper_bound(curve.s.begin(), curve.s.end(), s);
    if (it == curve.s.end()) return psi.back();
    const std::size_t k = static_cast<std::size_t>(it - curve.s.begin());
    if (k == 0) return psi.front();
    const double x = (s - curve.s[k - 1]) / (curve.s[k] - curve.s[k - 1]);
    return (1.0 - x) * psi[k - 1] + x * psi[k];
}

StrainAndSpin convected_strain_and_spin(const RotationField& L) {
    require_grid(L.ns, L.nt, "convected_strain_and_spin");
    StrainAndSpin out{VectorField(L.ns, L.nt, L.ds, L.dt), VectorField(L.ns, L.nt, L.ds, L.dt)};
    for (int i = 0; i < L.ns; ++i) {
        for (int j = 0; j < L.nt; ++j) {
            const Mat3 Lt = L(i, j).transpose();
            out.Omega(i, j) = so3::axial_of_skew_part<double>(Lt * ds_at(L, i, j));
            out.W(i, j) = so3::axial_of_skew_part<double>(Lt * dt_at(L, i, j));
        }
    }
    return out;
}

VectorField compatibility_residual(const VectorField& Omega, const VectorField& W) {
    require_grid(Omega.ns, Omega.nt, "compatibility_residual");
    if (W.ns != Omega.ns || W.nt != Omega.nt || W.ds != Omega.ds || W.dt != Omega.dt) {
        throw ValidationError("compatibility_residual: fields are not on a shared grid");
    }
    VectorField r(Omega.ns - 2, Omega.nt - 2, Omega.ds, Omega.dt);
    for (int i = 1; i + 1 < Omega.ns; ++i) {
        for (int j = 1; j + 1 < Omega.nt; ++j) {
            const Vec3 Omega_dot = (Omega(i, j + 1) - Omega(i, j - 1)) / (2.0 * Omega.dt);
            const Vec3 W_p = (W(i + 1, j) - W(i - 1, j)) / (2.0 * Omega.ds);
            r(i - 1, j - 1) = Omega_dot - W_p - Omega(i, j).cross(W(i, j));
        }
    }
    return r;
}

ScalarField torsion_spin_identity_residual(const RotationField& L) {
    const StrainAndSpin f = convected_strain_and_spin(L);
    ScalarField r(L.ns - 2, L.nt - 2, L.ds, L.dt);
    for (int i = 1; i + 1 < L.ns; ++i) {
        for (int j = 1; j + 1 < L.nt; ++j) {
            const double Omega3_dot = (f.Omega(i, j + 1)[2] - f.Omega(i, j - 1)[2]) / (2.0 * L.dt);
            const double W3_p = (f.W(i + 1, j)[2] - f.W(i - 1, j)[2]) / (2.0 * L.ds);
            const Vec3 d = L(i, j).col(2);
            const Vec3 dp = (L(i + 1, j).col(2) - L(i - 1, j).col(2)) / (2.0 * L.ds);
            const Vec3 dd = (L(i, j + 1).col(2) - L(i, j - 1).col(2)) / (2.0 * L.dt);
            r(i - 1, j - 1) = Omega3_dot - W3_p - d.dot(dp.cross(dd));
        }
    }
    return r;
}

}  // namespace rodsim::frames
