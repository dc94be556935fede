#pragma once

// Rotation group and unit-sphere primitives.
//
// The templated kernels in this header (hat, exp_matrix, dexp_matrix,
// chi_matrix) are written once and instantiated both for doubles and for
// the dual numbers of ad.hpp; the strong types below wrap the double
// versions with validation.

#include <cmath>

#include "rodsim/ad.hpp"
#include "rodsim/errors.hpp"
#include "rodsim/types.hpp"

namespace rodsim::so3 {

// Below this angle the Rodrigues / dexp coefficients switch to their series.
inline constexpr double kSeriesThreshold = 1e-4;
// chi(d0, d) is rejected when d0 . d <= -1 + kAntipodalTolerance.
inline constexpr double kAntipodalTolerance = 1e-8;
// Orthonormality and determinant tolerance for Rotation.
inline constexpr double kRotationTolerance = 1e-10;

template <typename S>
Mat3T<S> hat(const Vec3T<S>& w) {
    Mat3T<S> W;
    W << S(0.0), -w[2], w[1],
         w[2], S(0.0), -w[0],
         -w[1], w[0], S(0.0);
    return W;
}

// Axial vector of the skew-symmetric part of W.
template <typename S>
Vec3T<S> axial_of_skew_part(const Mat3T<S>& W) {
    return Vec3T<S>(0.5 * (W(2, 1) - W(1, 2)), 0.5 * (W(0, 2) - W(2, 0)),
                    0.5 * (W(1, 0) - W(0, 1)));
}

// Rodrigues: I + sin(t)/t W + 1/2 [sin(t/2)/(t/2)]^2 W^2.
template <typename S>
Mat3T<S> exp_matrix(const Vec3T<S>& theta) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const S t2 = theta.squaredNorm();
    S a, b;
    if (ad::value(t2) < kSeriesThreshold * kSeriesThreshold) {
        // sin(t)/t and (sin(x)/x)^2 with x = t/2, both in powers of t^2.
        a = 1.0 - t2 / 6.0 + t2 * t2 / 120.0;
        b = 1.0 - t2 / 12.0 + t2 * t2 / 360.0;
    } else {
        const S t = sqrt(t2);
        a = sin(t) / t;
        const S sh = sin(0.5 * t) / (0.5 * t);
        b = sh * sh;
    }
    const Mat3T<S> W = hat(theta);
    Mat3T<S> R = 0.5 * b * (W * W);
    R += a * W;
    for (int i = 0; i < 3; ++i) R(i, i) += 1.0;
    return R;
}

// dexp such that d/de exp(theta(e)) = hat(dexp(theta) theta') exp(theta):
// I + (1 - cos t)/t^2 W + (t - sin t)/t^3 W^2.
template <typename S>
Mat3T<S> dexp_matrix(const Vec3T<S>& theta) {
    using std::cos;
    using std::sin;
    using std::sqrt;
    const S t2 = theta.squaredNorm();
    S a, b;
    if (ad::value(t2) < kSeriesThreshold * kSeriesThreshold) {
        a = 0.5 - t2 / 24.0 + t2 * t2 / 720.0;
        b = 1.0 / 6.0 - t2 / 120.0 + t2 * t2 / 5040.0;
    } else {
        const S t = sqrt(t2);
        a = (1.0 - cos(t)) / t2;
        b = (t - sin(t)) / (t2 * t);
    }
    const Mat3T<S> W = hat(theta);
    Mat3T<S> D = b * (W * W);
    D += a * W;
    for (int i = 0; i < 3; ++i) D(i, i) += 1.0;
    return D;
}

// Drill-free rotation carrying unit d0 onto unit d. No antipodal check.
template <typename S>
Mat3T<S> chi_matrix(const Vec3T<S>& d0, const Vec3T<S>& d) {
    const S c = d0.dot(d);
    const Vec3T<S> k = d0.cross(d);
    Mat3T<S> X = hat(k);
    X += (k * k.transpose()) / (1.0 + c);
    for (int i = 0; i < 3; ++i) X(i, i) += c;
    return X;
}

// Unit vector on S^2. Renormalizes its input.
class Director {
public:
    explicit Director(const Vec3& v);

    const Vec3& vec() const { return v_; }
    double operator[](int i) const { return v_[i]; }
    Director operator-() const { return Director(-v_); }

private:
    Vec3 v_;
};

// Proper orthogonal 3x3 operator.
class Rotation {
public:
    Rotation() : m_(Mat3::Identity()) {}
    // Validates orthonormality and det = +1 to kRotationTolerance.
    explicit Rotation(const Mat3& m);

    static Rotation identity() { return Rotation(); }
    // Wraps a matrix already known to be a rotation (result of exp, chi, ...).
    static Rotation trusted(const Mat3& m) {
        Rotation r;
        r.m_ = m;
        return r;
    }

    const Mat3& matrix() const { return m_; }
    Rotation transpose() const { return trusted(m_.transpose()); }
    Vec3 operator*(const Vec3& v) const { return m_ * v; }
    Rotation operator*(const Rotation& o) const { return trusted(m_ * o.m_); }
    Vec3 column(int i) const { return m_.col(i); }

    // max |R^T R - I| entrywise and |det R - 1|.
    double orthonormality_error() const;

private:
    Mat3 m_;
};

// T = tangential + directorial, with tangential: T_{d0}S^2 -> T_{d}S^2 and
// directorial = d (x) d0.
struct RotationSplit {
    Mat3 tangential;
    Mat3 directorial;
    Director source;
    Director target;
};

Mat3 hat(const Vec3& w);
// Throws ValidationError unless W is skew within kRotationTolerance.
Vec3 axial(const Mat3& W);

Rotation exp_rodrigues(const Vec3& theta);
Mat3 dexp(const Vec3& theta);

// Throws SingularDrillFreeMap when d0 . d <= -1 + tol_antipodal.
Rotation chi_no_drill(const Director& d0, const Director& d,
                      double tol_antipodal = kAntipodalTolerance);

// exp(psi hat(d)) chi(d0, d).
Rotation composite_rotation(double psi, const Director& d0, const Director& d,
                            double tol_antipodal = kAntipodalTolerance);

// Throws NotASplittingMap unless T d0 = d within kRotationTolerance.
RotationSplit split(const Rotation& T, const Director& d0, const Director& d);

// Signed angle of the rotation about axis n taking a to b (both assumed
// orthogonal to n), in (-pi, pi].
double signed_angle(const Vec3& a, const Vec3& b, const Vec3& n);

// Wraps an angle into (-pi, pi].
double wrap_angle(double a);

}  // namespace rodsim::so3
