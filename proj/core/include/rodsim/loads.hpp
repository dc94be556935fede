#pragma once

#include "rodsim/types.hpp"

namespace rodsim {

// Dead loads on a rod clamped at s = 0. All fields are multiplied by `factor`
// when the loads are applied.
struct LoadCase {
    Vec3 distributed_force = Vec3::Zero();  // N/m
    double distributed_tangent_moment = 0.0;  // N m/m
    Vec3 tip_force = Vec3::Zero();  // N
    double tip_tangent_moment = 0.0;  // N m
    Vec3 tip_moment = Vec3::Zero();  // N m, constrained path only
    double factor = 1.0;

    // Copy with factor folded into every field and factor reset to 1.
    LoadCase effective() const;
    LoadCase scaled(double lambda) const;
    // Forces and moments pushed forward by a rotation Q.
    LoadCase rotated(const Mat3& Q) const;
    bool has_tip_moment() const { return factor != 0.0 && !tip_moment.isZero(0.0); }
    // Throws ValidationError on non-finite entries.
    void validate() const;
};

}  // namespace rodsim
