#pragma once

#include <cmath>
#include <optional>
#include <variant>
#include <vector>

#include "biglide/dataset.hpp"
#include "biglide/transform.hpp"

namespace biglide {

// Planar parallel mechanism: two carts sliding along y on rails at x=0 and
// x=a, each connected by a rigid leg to the common tool point B=(x, y).
// assembly_sign selects the working branch of the inverse kinematics
// (carts below the tool point for the default -1).
struct Geometry {
    double a = 0.0;
    double L1 = 0.0;
    double L2 = 0.0;
    double L_tool = 0.0;
    double assembly_sign = -1.0;
};

inline Geometry geometry_of(const MechanismDataset& ds) {
    return {ds.a, ds.L1, ds.L2, ds.L_tool, -1.0};
}

struct WorkspaceBounds {
    double x_min = 0.0;
    double x_max = 0.0;
    double stroke() const { return x_max - x_min; }
};

// Reachable x-interval along the tool path (y fixed by the application):
// leg 1 bounds x from above, leg 2 from below.
inline WorkspaceBounds workspace_bounds(const Geometry& g) {
    const double x_min = g.a - g.L2;
    const double x_max = g.L1;
    if (!(x_max > x_min))
        throw EmptyWorkspace("workspace_bounds: L1 + L2 <= a leaves no reachable x");
    return {x_min, x_max};
}

struct JointCoords {
    double q1 = 0.0; // cart 1 position along y
    double q2 = 0.0; // cart 2 position along y
};

inline JointCoords inverse_kinematics(const Geometry& g, double x, double y) {
    const double r1 = g.L1 * g.L1 - x * x;
    const double r2 = g.L2 * g.L2 - (x - g.a) * (x - g.a);
    // tiny negative radicands at the workspace boundary are round-off
    const double tol1 = 1e-12 * g.L1 * g.L1;
    const double tol2 = 1e-12 * g.L2 * g.L2;
    if (r1 < -tol1 || r2 < -tol2)
        throw OutOfWorkspace("inverse_kinematics: point outside reachable band");
    const double s = g.assembly_sign;
    return {y + s * std::sqrt(std::max(r1, 0.0)),
            y + s * std::sqrt(std::max(r2, 0.0))};
}

// dq/dt = J^-1 dp/dt with J = A^-1 B; rows of A are the leg direction
// constraints, B carries the cart contributions. eps_sing (relative to each
// leg length) rejects postures where a leg is within round-off of
// horizontal, i.e. the cart can no longer produce motion along the leg;
// eps_sing = 0 disables the guard for deliberate boundary evaluation.
inline Mat2 jacobian(const Geometry& g, double x, double y,
                     double eps_sing = 1e-6) {
    const JointCoords q = inverse_kinematics(g, x, y);
    const double h1 = y - q.q1;
    const double h2 = y - q.q2;
    if (eps_sing > 0.0 &&
        (std::abs(h1) <= eps_sing * g.L1 || std::abs(h2) <= eps_sing * g.L2))
        throw SingularPosture("jacobian: leg within eps_sing of horizontal");
    Mat2 A;
    A << x, h1,
         x - g.a, h2;
    Mat2 B = Vec2(h1, h2).asDiagonal();
    // rows of A are the leg vectors, so |det| / (L1 L2) = |sin(leg angle)|
    const double det = A.determinant();
    if (eps_sing > 0.0 && std::abs(det) <= eps_sing * g.L1 * g.L2)
        throw SingularPosture("jacobian: legs near parallel");
    if (det == 0.0)
        throw SingularPosture("jacobian: constraint matrix exactly singular");
    Mat2 J;
    J << A(1, 1) * B(0, 0), -A(0, 1) * B(1, 1),
        -A(1, 0) * B(0, 0), A(0, 0) * B(1, 1);
    return J / det;
}

// --- serial chain description shared by the stiffness and dynamics code ---

struct RigidTransformElem {
    Transform t;
};

struct ActuatedPrismaticElem {
    Vec3 axis = Vec3::UnitY();
    double q = 0.0;
};

struct PassiveRevoluteElem {
    Vec3 axis = Vec3::UnitZ();
    double q = 0.0;
};

struct VirtualSpring6Elem {
    Mat6 stiffness = Mat6::Zero(); // local frame at the element's station
};

using ChainElement = std::variant<RigidTransformElem, ActuatedPrismaticElem,
                                  PassiveRevoluteElem, VirtualSpring6Elem>;

struct LegChain {
    int leg_index = 1; // 1 or 2
    std::vector<ChainElement> elements;
};

struct ChainOptions {
    bool tool_compliance = false;
    // extra 6x6 lumped drive spring inserted after the actuated joint
    std::optional<double> drive_spring;
    // substitute leg compliances (e.g. equivalent-beam form)
    std::optional<Mat6> leg1_compliance;
    std::optional<Mat6> leg2_compliance;
};

namespace detail {

inline Mat6 drive_spring_stiffness(double k_drive) {
    Vec6 d;
    d << 1e12, k_drive, 1e12, 1e12, 1e12, 1e12;
    return d.asDiagonal();
}

inline Mat6 spring_from_compliance(const Mat6& compliance) {
    return invert_symmetric(symmetrized_compliance(compliance),
                            kComplianceAsymError);
}

} // namespace detail

// Serial chain from the rail base to the tool point for one leg at posture
// (x, y). Both chains terminate at the same tool frame; leg 2 carries an
// extra passive rotation so its end frame matches leg 1's.
inline LegChain build_leg_chain(const MechanismDataset& ds, int leg_index,
                                double x, double y,
                                const ChainOptions& opt = {}) {
    const Geometry g = geometry_of(ds);
    const JointCoords q = inverse_kinematics(g, x, y);
    const double phi1 = std::atan2(y - q.q1, x);
    const double phi2 = std::atan2(y - q.q2, x - g.a);

    const Mat6 k_foot = detail::spring_from_compliance(ds.k_foot);
    LegChain chain;
    chain.leg_index = leg_index;
    auto& e = chain.elements;
    if (leg_index == 1) {
        const Mat6 k_leg = detail::spring_from_compliance(
            opt.leg1_compliance.value_or(ds.k_leg1));
        e.push_back(RigidTransformElem{Transform{}});
        e.push_back(ActuatedPrismaticElem{Vec3::UnitY(), q.q1});
        if (opt.drive_spring)
            e.push_back(VirtualSpring6Elem{detail::drive_spring_stiffness(*opt.drive_spring)});
        e.push_back(RigidTransformElem{Transform{}});
        e.push_back(VirtualSpring6Elem{k_foot});
        e.push_back(PassiveRevoluteElem{Vec3::UnitZ(), phi1});
        e.push_back(RigidTransformElem{translation({g.L1, 0.0, 0.0})});
        e.push_back(VirtualSpring6Elem{k_leg});
        e.push_back(RigidTransformElem{translation({0.0, 0.0, -g.L_tool})});
        // tool flexibility is modelled once, at the end of this chain
        if (opt.tool_compliance)
            e.push_back(VirtualSpring6Elem{detail::spring_from_compliance(ds.k_tool)});
    } else if (leg_index == 2) {
        const Mat6 k_leg = detail::spring_from_compliance(
            opt.leg2_compliance.value_or(ds.k_leg2));
        e.push_back(RigidTransformElem{translation({g.a, 0.0, 0.0})});
        e.push_back(ActuatedPrismaticElem{Vec3::UnitY(), q.q2});
        if (opt.drive_spring)
            e.push_back(VirtualSpring6Elem{detail::drive_spring_stiffness(*opt.drive_spring)});
        e.push_back(RigidTransformElem{Transform{}});
        e.push_back(VirtualSpring6Elem{k_foot});
        e.push_back(PassiveRevoluteElem{Vec3::UnitZ(), phi2});
        e.push_back(RigidTransformElem{translation({g.L2, 0.0, 0.0})});
        e.push_back(VirtualSpring6Elem{k_leg});
        // align the end frame with leg 1 so the tool offset is shared
        e.push_back(PassiveRevoluteElem{Vec3::UnitZ(), phi1 - phi2});
        e.push_back(RigidTransformElem{translation({0.0, 0.0, -g.L_tool})});
    } else {
        throw Error("build_leg_chain: leg_index must be 1 or 2");
    }
    return chain;
}

// Small-displacement pose of a spring: translations then three elementary
// rotations, all about the local frame the spring sits in.
inline Transform spring_deflection_pose(const Vec6& theta) {
    return translation(theta.head<3>()) * rotation_x(theta[3]) *
           rotation_y(theta[4]) * rotation_z(theta[5]);
}

// Forward pose of a chain with optional perturbations: passive_offsets adds
// to successive passive joint coordinates, spring_coords deflects successive
// springs (6 values each). Used by the finite-difference checks.
inline Transform chain_end_pose(const LegChain& chain,
                                const std::vector<double>& passive_offsets = {},
                                const std::vector<Vec6>& spring_coords = {}) {
    Transform pose;
    std::size_t next_passive = 0;
    std::size_t next_spring = 0;
    for (const auto& elem : chain.elements) {
        if (const auto* r = std::get_if<RigidTransformElem>(&elem)) {
            pose = pose * r->t;
        } else if (const auto* p = std::get_if<ActuatedPrismaticElem>(&elem)) {
            pose = pose * translation(p->axis * p->q);
        } else if (const auto* rv = std::get_if<PassiveRevoluteElem>(&elem)) {
            double q = rv->q;
            if (next_passive < passive_offsets.size()) q += passive_offsets[next_passive];
            ++next_passive;
            pose = pose * rotation_about(rv->axis, q);
        } else if (std::get_if<VirtualSpring6Elem>(&elem)) {
            Vec6 theta = Vec6::Zero();
            if (next_spring < spring_coords.size()) theta = spring_coords[next_spring];
            ++next_spring;
            pose = pose * spring_deflection_pose(theta);
        }
    }
    return pose;
}

} // namespace biglide
