#pragma once

#include <optional>
#include <vector>

#include "rodsim/so3.hpp"
#include "rodsim/types.hpp"

namespace rodsim::frames {

// Sampled regular curve r(s) with first and second parameter derivatives.
struct SampledCurve {
    std::vector<double> s;
    std::vector<Vec3> r;
    std::vector<Vec3> rp;
    std::vector<Vec3> rpp;

    // Reconstructs r' and r'' with a clamped cubic spline through the
    // positions. End slopes default to second-order one-sided differences.
    static SampledCurve from_positions(std::vector<double> s, std::vector<Vec3> r,
                                       std::optional<Vec3> start_slope = std::nullopt,
                                       std::optional<Vec3> end_slope = std::nullopt);

    std::size_t size() const { return s.size(); }
    Vec3 tangent(std::size_t i) const { return rp[i].normalized(); }
    // d' = (I - d d) r'' / |r'|.
    Vec3 tangent_rate(std::size_t i) const;
    // Throws ValidationError on shape mismatch or non-increasing s,
    // RegularityError on a vanishing tangent.
    void validate() const;
};

// Right-handed orthonormal triad with d the unit tangent.
struct Triad {
    Vec3 u;
    Vec3 v;
    Vec3 d;

    Mat3 matrix() const {
        Mat3 m;
        m << u, v, d;
        return m;
    }
};

using FrameField = std::vector<Triad>;

// Transports u0 with the drill-free increments chi[d_i, d_{i+1}].
FrameField bishop_transport(const SampledCurve& curve, const so3::Director& u0);

// Frame rotated about d by psi: u_psi = cos psi u + sin psi v.
FrameField twisted(const FrameField& frames, const std::vector<double>& psi);

// Signed angle about d(s_0) carrying u(s_0) to u(s_N), for a closed tangent
// loop. Positive for tangent loops that run counterclockwise seen from
// outside the sphere.
double holonomy(const FrameField& frames, double closure_tol = 1e-6);

// omega = d x d' + psi' d per sample (d' per unit parameter).
std::vector<Vec3> darboux(const SampledCurve& curve, const std::vector<double>& psi);

// -(d0 x d) . d' / (1 + d0 . d) per sample.
std::vector<double> drill_free_torsion_density(const SampledCurve& curve, const so3::Director& d0,
                                               double tol_antipodal = so3::kAntipodalTolerance);

// Trapezoidal running integral of minus the torsion density, one value per sample.
std::vector<double> correction_angle_profile(const SampledCurve& curve, const so3::Director& d0);

// Correction angle at parameter s (linear within the bracketing interval).
double accumulated_correction_angle(const SampledCurve& curve, const so3::Director& d0, double s);

// Uniform space-time grid with row-major (space, time) storage.
template <typename T>
struct SpaceTimeField {
    int ns = 0;
    int nt = 0;
    double ds = 1.0;
    double dt = 1.0;
    std::vector<T> data;

    SpaceTimeField() = default;
    SpaceTimeField(int ns_, int nt_, double ds_, double dt_)
        : ns(ns_), nt(nt_), ds(ds_), dt(dt_), data(static_cast<std::size_t>(ns_) * nt_) {}

    T& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * nt + j]; }
    const T& operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * nt + j]; }
};

using VectorField = SpaceTimeField<Vec3>;
using ScalarField = SpaceTimeField<double>;
using RotationField = SpaceTimeField<Mat3>;

struct StrainAndSpin {
    VectorField Omega;  // axial(Lambda^T Lambda')
    VectorField W;      // axial(Lambda^T Lambda_dot)
};

// Second-order differences, one-sided at the borders.
StrainAndSpin convected_strain_and_spin(const RotationField& Lambda);

// Omega_dot - W' - Omega x W on interior points (ns - 2 by nt - 2).
VectorField compatibility_residual(const VectorField& Omega, const VectorField& W);

// d/dt(Omega . E3) - d/ds(W . E3) - d . (d' x d_dot) on interior points,
// with d = Lambda E3.
ScalarField torsion_spin_identity_residual(const RotationField& Lambda);

}  // namespace rodsim::frames
