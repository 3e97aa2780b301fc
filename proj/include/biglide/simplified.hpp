#pragma once

#include <cmath>
#include <numbers>

#include "biglide/mechanism.hpp"

namespace biglide {

// Lumped-drive abstraction: each cart is a 1-dof spring of stiffness
// k_drive along its rail, legs and joints are rigid. Everything follows
// from the mechanism Jacobian.

// Cartesian compliance of the tool point, C = J K^-1 J^T.
inline Mat2 simplified_compliance(const Mat2& jac, double k_drive) {
    if (!(k_drive > 0.0))
        throw NotPositiveDefinite("simplified_compliance: k_drive must be > 0");
    return jac * jac.transpose() / k_drive;
}

inline Vec2 deflection_simplified(const Mat2& jac, const Vec2& force,
                                  double k_drive) {
    return simplified_compliance(jac, k_drive) * force;
}

// Natural frequencies (Hz, ascending) of the carried mass on the drive
// springs: K_x = J^-T K J^-1 projected to the tool frame, M = mass I.
// K_x transforms congruently under tool-frame rotations, so the
// frequencies are frame invariant.
inline Vec2 frequencies_simplified(const Mat2& jac, double k_drive,
                                   double mass) {
    if (!(mass > 0.0))
        throw MassNotPositiveDefinite("frequencies_simplified: mass must be > 0");
    const double det = jac.determinant();
    if (std::abs(det) <= 1e-14 * jac.squaredNorm())
        throw SingularPosture("frequencies_simplified: jacobian is singular");
    const Mat2 jinv = jac.inverse();
    const Mat2 kx = jinv.transpose() * (k_drive * Mat2::Identity()) * jinv;
    const EigenSolution sol = generalized_eigs(kx, mass * Mat2::Identity());
    Vec2 f;
    for (int i = 0; i < 2; ++i)
        f[i] = std::sqrt(sol.eigenvalues[i]) / (2.0 * std::numbers::pi);
    return f;
}

} // namespace biglide
