#pragma once

#include "biglide/mechanism.hpp"

namespace biglide {

// Virtual-joint stiffness model: each chain is rigid links + localized 6-dof
// springs + passive joints; the actuated coordinate is held by the control
// loop. Cartesian stiffness follows from the chain Jacobians evaluated at
// the loaded equilibrium's linearization point (the unloaded posture).

struct LegJacobians {
    Mat j_theta; // 6 x (6 * springs): end twist per spring coordinate
    Mat j_q;     // 6 x passive: end twist per passive joint coordinate
};

// Columns are end-point twists (v; w) in the base frame. A translation at an
// intermediate station shifts everything downstream uniformly; a rotation
// about w at station p moves the end point by w x (p_end - p).
inline LegJacobians chain_jacobians(const LegChain& chain) {
    const Vec3 p_end = chain_end_pose(chain).p;

    int n_springs = 0, n_passive = 0;
    for (const auto& elem : chain.elements) {
        if (std::holds_alternative<VirtualSpring6Elem>(elem)) ++n_springs;
        if (std::holds_alternative<PassiveRevoluteElem>(elem)) ++n_passive;
    }
    LegJacobians jac;
    jac.j_theta = Mat::Zero(6, 6 * n_springs);
    jac.j_q = Mat::Zero(6, n_passive);

    Transform t;
    int i_spring = 0, i_passive = 0;
    for (const auto& elem : chain.elements) {
        if (const auto* r = std::get_if<RigidTransformElem>(&elem)) {
            t = t * r->t;
        } else if (const auto* p = std::get_if<ActuatedPrismaticElem>(&elem)) {
            t = t * translation(p->axis * p->q);
        } else if (const auto* rv = std::get_if<PassiveRevoluteElem>(&elem)) {
            const Vec3 w = t.R * rv->axis;
            jac.j_q.col(i_passive).head<3>() = w.cross(p_end - t.p);
            jac.j_q.col(i_passive).tail<3>() = w;
            ++i_passive;
            t = t * rotation_about(rv->axis, rv->q);
        } else if (std::get_if<VirtualSpring6Elem>(&elem)) {
            for (int j = 0; j < 3; ++j)
                jac.j_theta.col(6 * i_spring + j).head<3>() = t.R.col(j);
            for (int j = 0; j < 3; ++j) {
                const Vec3 w = t.R.col(j);
                jac.j_theta.col(6 * i_spring + 3 + j).head<3>() = w.cross(p_end - t.p);
                jac.j_theta.col(6 * i_spring + 3 + j).tail<3>() = w;
            }
            ++i_spring;
        }
    }
    return jac;
}

// Block-diagonal stiffness of all chain springs, in chain order. Blocks are
// the springs' local-frame matrices; j_theta carries the frame placement.
inline Mat chain_k_theta(const LegChain& chain) {
    std::vector<const Mat6*> springs;
    for (const auto& elem : chain.elements)
        if (const auto* s = std::get_if<VirtualSpring6Elem>(&elem))
            springs.push_back(&s->stiffness);
    Mat k = Mat::Zero(6 * springs.size(), 6 * springs.size());
    for (std::size_t i = 0; i < springs.size(); ++i)
        k.block<6, 6>(6 * i, 6 * i) = *springs[i];
    return k;
}

// Cartesian stiffness of one chain with passive joints left free:
// the top-left block of the inverse of [[S, J_q], [J_q^T, 0]] with
// S = J_theta K_theta^-1 J_theta^T. Passive directions come out as exact
// zero-stiffness directions: K J_q = 0.
inline Mat6 leg_cartesian_stiffness(const LegChain& chain) {
    const LegJacobians jac = chain_jacobians(chain);
    if (jac.j_theta.cols() == 0)
        throw Error("leg_cartesian_stiffness: chain has no springs");
    const Mat k_theta = chain_k_theta(chain);
    Eigen::LLT<Mat> llt(k_theta);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("leg_cartesian_stiffness: K_theta is not positive definite");
    const Mat s = jac.j_theta * llt.solve(jac.j_theta.transpose());

    const Eigen::Index nq = jac.j_q.cols();
    Mat bordered = Mat::Zero(6 + nq, 6 + nq);
    bordered.topLeftCorner(6, 6) = s;
    bordered.topRightCorner(6, nq) = jac.j_q;
    bordered.bottomLeftCorner(nq, 6) = jac.j_q.transpose();

    Eigen::PartialPivLU<Mat> lu(bordered);
    if (!(lu.rcond() > 1e-14))
        throw SingularBorderedSystem(
            "leg_cartesian_stiffness: compliance system is numerically singular");
    const Mat inv = lu.inverse();
    const Mat6 k = inv.topLeftCorner(6, 6);
    return 0.5 * (k + k.transpose());
}

inline Mat6 manipulator_stiffness(const Mat6& k1, const Mat6& k2) {
    return k1 + k2;
}

// Both chains evaluated at (x, y) and summed at the shared tool frame.
inline Mat6 manipulator_stiffness_at(const MechanismDataset& ds, double x,
                                     double y, const ChainOptions& opt = {}) {
    ChainOptions opt2 = opt;
    opt2.tool_compliance = false; // tool spring belongs to chain 1 only
    const Mat6 k1 = leg_cartesian_stiffness(build_leg_chain(ds, 1, x, y, opt));
    const Mat6 k2 = leg_cartesian_stiffness(build_leg_chain(ds, 2, x, y, opt2));
    return manipulator_stiffness(k1, k2);
}

// Static tool-point deflection under a 6-component wrench.
inline Vec6 deflection_refined(const Mat6& k_manipulator, const Vec6& wrench) {
    Eigen::LLT<Mat6> llt(0.5 * (k_manipulator + k_manipulator.transpose()));
    if (llt.info() != Eigen::Success)
        throw Singular("deflection_refined: manipulator stiffness is not positive definite");
    return llt.solve(wrench);
}

} // namespace biglide
