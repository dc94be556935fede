#include "rodsim/so3.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace rodsim::so3 {

Director::Director(const Vec3& v) {
    const double n = v.norm();
    if (!std::isfinite(n) || n == 0.0) {
        throw ValidationError("Director: vector must be finite and non-zero");
    }
    v_ = v / n;
}

Rotation::Rotation(const Mat3& m) : m_(m) {
    if (!m.allFinite()) throw ValidationError("Rotation: non-finite entries");
    if (orthonormality_error() > kRotationTolerance) {
        throw ValidationError("Rotation: matrix is not proper orthogonal");
    }
}

double Rotation::orthonormality_error() const {
    const double ortho = (m_.transpose() * m_ - Mat3::Identity()).cwiseAbs().maxCoeff();
    return std::max(ortho, std::abs(m_.determinant() - 1.0));
}

Mat3 hat(const Vec3& w) { return hat<double>(w); }

Vec3 axial(const Mat3& W) {
    if ((W + W.transpose()).cwiseAbs().maxCoeff() > kRotationTolerance) {
        throw ValidationError("axial: input is not skew-symmetric");
    }
    return axial_of_skew_part<double>(W);
}

Rotation exp_rodrigues(const Vec3& theta) { return Rotation::trusted(exp_matrix<double>(theta)); }

Mat3 dexp(const Vec3& theta) { return dexp_matrix<double>(theta); }

Rotation chi_no_drill(const Director& d0, const Director& d, double tol_antipodal) {
    if (d0.vec().dot(d.vec()) <= -1.0 + tol_antipodal) {
        throw SingularDrillFreeMap("chi_no_drill: directors are antipodal");
    }
    return Rotation::trusted(chi_matrix<double>(d0.vec(), d.vec()));
}

Rotation composite_rotation(double psi, const Director& d0, const Director& d,
                            double tol_antipodal) {
    const Rotation chi = chi_no_drill(d0, d, tol_antipodal);
    return exp_rodrigues(psi * d.vec()) * chi;
}

RotationSplit split(const Rotation& T, const Director& d0, const Director& d) {
    if ((T * d0.vec() - d.vec()).cwiseAbs().maxCoeff() > kRotationTolerance) {
        throw NotASplittingMap("split: operator does not map source director to target");
    }
    const Mat3 directorial = d.vec() * d0.vec().transpose();
    return RotationSplit{T.matrix() - directorial, directorial, d0, d};
}

double signed_angle(const Vec3& a, const Vec3& b, const Vec3& n) {
    return std::atan2(a.cross(b).dot(n), a.dot(b));
}

double wrap_angle(double a) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::fmod(a, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    if (r > std::numbers::pi) r -= two_pi;
    return r;
}

}  // namespace rodsim::so3
