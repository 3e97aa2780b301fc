#pragma once

#include <cmath>

#include "biglide/numerics.hpp"

namespace biglide {

// Rigid-body placement: x -> R x + p.
struct Transform {
    Mat3 R = Mat3::Identity();
    Vec3 p = Vec3::Zero();
};

inline Transform translation(const Vec3& p) { return {Mat3::Identity(), p}; }

inline Transform rotation_about(const Vec3& unit_axis, double angle) {
    return {Eigen::AngleAxisd(angle, unit_axis).toRotationMatrix(), Vec3::Zero()};
}

inline Transform rotation_x(double a) { return rotation_about(Vec3::UnitX(), a); }
inline Transform rotation_y(double a) { return rotation_about(Vec3::UnitY(), a); }
inline Transform rotation_z(double a) { return rotation_about(Vec3::UnitZ(), a); }

inline Transform operator*(const Transform& a, const Transform& b) {
    return {a.R * b.R, a.p + a.R * b.p};
}

inline Vec3 transform_point(const Transform& t, const Vec3& x) {
    return t.R * x + t.p;
}

inline bool is_rigid(const Transform& t, double tol = 1e-12) {
    return (t.R.transpose() * t.R - Mat3::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(t.R.determinant() - 1.0) <= tol;
}

inline Mat3 skew(const Vec3& v) {
    Mat3 s;
    s << 0.0, -v.z(), v.y(),
         v.z(), 0.0, -v.x(),
        -v.y(), v.x(), 0.0;
    return s;
}

} // namespace biglide
