#pragma once

#include <string>
#include <variant>
#include <vector>

#include "biglide/beam.hpp"

namespace biglide {

// Lumped elastodynamics: links become chains of rigid elements joined by
// 6-dof springs; the assembled M q'' + K q = 0 pencil gives the natural
// frequencies. Element coordinates are (x y z, phi_x phi_y phi_z) about the
// element's own mass center.

struct RigidElement {
    double mass = 0.0;
    Mat3 inertia = Mat3::Zero(); // about the mass center, local frame
    Vec3 com = Vec3::Zero();     // global
    Mat3 orientation = Mat3::Identity();
};

inline constexpr int kGroundElement = -1;

struct SpringLink {
    Mat6 stiffness = Mat6::Zero(); // local frame
    Vec3 position = Vec3::Zero();  // global
    Mat3 orientation = Mat3::Identity();
    int element_a = kGroundElement;
    int element_b = 0;
};

// --- link discretization (link-local, x along the beam) ---

struct LocalElement {
    double com_x = 0.0;
    double length = 0.0;
    double mass = 0.0;
    Mat3 inertia = Mat3::Zero();
};

struct LocalSpring {
    double pos_x = 0.0;
    Mat6 stiffness = Mat6::Zero();
};

struct DiscretizedLink {
    std::vector<LocalElement> elements;
    std::vector<LocalSpring> springs;
};

// Deflection transport to a point offset by r from the reference:
// [[I, -skew(r)], [0, I]].
inline Mat6 coupling_matrix(const Vec3& r) {
    Mat6 c = Mat6::Identity();
    c.topRightCorner<3, 3>() = -skew(r);
    return c;
}

// Couplings of a spring to its two neighbor elements, axial offsets
// d_2k (to the preceding mass center) and d_1k1 (to the following one);
// spring deflection is theta = C_next q_next - C_prev q_prev, which
// vanishes for shared rigid motion.
inline std::pair<Mat6, Mat6> coupling_matrices(double d_2k, double d_1k1) {
    return {coupling_matrix({d_2k, 0.0, 0.0}),
            coupling_matrix({-d_1k1, 0.0, 0.0})};
}

// Stiffness of one beam segment of length ell, expressed at its midpoint:
// cantilever tip compliance transported half a segment back, inverted.
// Chaining these springs reproduces the continuous tip compliance.
inline Mat6 segment_spring_stiffness(const BeamParams& b, double ell) {
    const Mat6 c_tip = beam_end_compliance(b.EA, b.EIy, b.EIz, b.GJ, ell);
    const Mat6 s = coupling_matrix({-0.5 * ell, 0.0, 0.0});
    const Mat6 c_mid = s * c_tip * s.transpose();
    return invert_symmetric(c_mid);
}

// m rigid elements, m-1 segment springs at the segment midpoints; end
// elements are half a segment long so spans tile the beam exactly.
inline DiscretizedLink discretize_link(const BeamParams& b, int m) {
    if (m < 2)
        throw InvalidElementCount("discretize_link: need at least 2 elements");
    const int n = m - 1;
    const double ell = b.L / n;
    const double ry2 = b.EIy / b.EA; // cross-section gyration radii squared
    const double rz2 = b.EIz / b.EA;

    DiscretizedLink link;
    std::vector<double> bounds;
    bounds.push_back(0.0);
    for (int k = 0; k < n; ++k) bounds.push_back((k + 0.5) * ell);
    bounds.push_back(b.L);
    for (int k = 0; k < m; ++k) {
        LocalElement e;
        e.length = bounds[k + 1] - bounds[k];
        e.com_x = 0.5 * (bounds[k] + bounds[k + 1]);
        e.mass = b.mass_per_length * e.length;
        e.inertia = Vec3(e.mass * (ry2 + rz2),
                         e.mass * e.length * e.length / 12.0,
                         e.mass * e.length * e.length / 12.0)
                        .asDiagonal();
        link.elements.push_back(e);
    }
    const Mat6 ks = segment_spring_stiffness(b, ell);
    for (int k = 0; k < n; ++k)
        link.springs.push_back({(k + 0.5) * ell, ks});
    return link;
}

inline Mat6 element_mass_matrix(const RigidElement& e) {
    Mat6 d = Mat6::Zero();
    d.topLeftCorner<3, 3>() = e.orientation;
    d.bottomRightCorner<3, 3>() = e.orientation;
    Mat6 m = Mat6::Zero();
    m.topLeftCorner<3, 3>() = e.mass * Mat3::Identity();
    m.bottomRightCorner<3, 3>() = e.inertia;
    return d * m * d.transpose();
}

// --- assembly ---

struct RJoint {
    int spring_index = 0; // free rotation about the spring's local z
};
struct Clamp {
    int element = 0;
};
struct AttachedMass {
    int element = 0;
    double mass_kg = 0.0;
};
using JointSpec = std::variant<RJoint, Clamp, AttachedMass>;

struct AssemblyInput {
    std::vector<RigidElement> elements;
    std::vector<SpringLink> springs;
    std::vector<JointSpec> joints;
};

struct AssembledSystem {
    Mat m; // symmetric PD over retained dofs
    Mat k; // symmetric PSD
    std::vector<int> dof_offset; // element index -> first row, -1 if clamped
};

// Revolute degeneration: zero the stiffness row/column of the joint axis
// (local z), leaving the other five directions of the carrier spring.
inline Mat6 hinge_degenerate(const Mat6& k_s) {
    const Mat6 p = Vec6(1, 1, 1, 1, 1, 0).asDiagonal();
    return p * k_s * p;
}

inline AssembledSystem assemble_system(const AssemblyInput& input) {
    const int nb = static_cast<int>(input.elements.size());
    if (nb == 0) throw NoDynamicDOF("assemble_system: no elements");

    std::vector<Mat6> spring_k;
    spring_k.reserve(input.springs.size());
    for (const auto& s : input.springs) spring_k.push_back(s.stiffness);

    std::vector<bool> clamped(nb, false);
    std::vector<std::pair<int, double>> point_masses;
    for (const auto& j : input.joints) {
        if (const auto* r = std::get_if<RJoint>(&j)) {
            if (r->spring_index < 0 ||
                r->spring_index >= static_cast<int>(spring_k.size()))
                throw InconsistentTopology("assemble_system: RJoint spring index out of range");
            spring_k[r->spring_index] = hinge_degenerate(spring_k[r->spring_index]);
        } else if (const auto* c = std::get_if<Clamp>(&j)) {
            if (c->element < 0 || c->element >= nb)
                throw InconsistentTopology("assemble_system: clamp element out of range");
            clamped[c->element] = true;
        } else if (const auto* pm = std::get_if<AttachedMass>(&j)) {
            if (pm->element < 0 || pm->element >= nb)
                throw InconsistentTopology("assemble_system: attached mass element out of range");
            if (!(pm->mass_kg >= 0.0))
                throw InconsistentTopology("assemble_system: attached mass must be >= 0");
            point_masses.emplace_back(pm->element, pm->mass_kg);
        }
    }

    const int n_full = 6 * nb;
    Mat m_full = Mat::Zero(n_full, n_full);
    Mat k_full = Mat::Zero(n_full, n_full);

    for (int i = 0; i < nb; ++i)
        m_full.block<6, 6>(6 * i, 6 * i) = element_mass_matrix(input.elements[i]);
    for (const auto& [el, mass] : point_masses)
        m_full.block<3, 3>(6 * el, 6 * el) += mass * Mat3::Identity();

    for (std::size_t si = 0; si < input.springs.size(); ++si) {
        const SpringLink& s = input.springs[si];
        const int ia = s.element_a;
        const int ib = s.element_b;
        if (ib < 0 || ib >= nb || ia < kGroundElement || ia >= nb || ia == ib)
            throw InconsistentTopology("assemble_system: spring endpoints invalid");
        Mat6 d = Mat6::Zero();
        d.topLeftCorner<3, 3>() = s.orientation;
        d.bottomRightCorner<3, 3>() = s.orientation;
        const Mat6 kg = d * spring_k[si] * d.transpose();
        const Mat6 cb = coupling_matrix(s.position - input.elements[ib].com);
        if (ia != kGroundElement) {
            const Mat6 ca = coupling_matrix(s.position - input.elements[ia].com);
            k_full.block<6, 6>(6 * ia, 6 * ia) += ca.transpose() * kg * ca;
            k_full.block<6, 6>(6 * ia, 6 * ib) -= ca.transpose() * kg * cb;
            k_full.block<6, 6>(6 * ib, 6 * ia) -= cb.transpose() * kg * ca;
        }
        k_full.block<6, 6>(6 * ib, 6 * ib) += cb.transpose() * kg * cb;
    }

    AssembledSystem sys;
    sys.dof_offset.assign(nb, -1);
    int retained = 0;
    for (int i = 0; i < nb; ++i)
        if (!clamped[i]) sys.dof_offset[i] = 6 * retained++;
    if (retained == 0)
        throw NoDynamicDOF("assemble_system: every element is clamped");

    const int n = 6 * retained;
    sys.m = Mat::Zero(n, n);
    sys.k = Mat::Zero(n, n);
    for (int i = 0; i < nb; ++i) {
        if (sys.dof_offset[i] < 0) continue;
        for (int j = 0; j < nb; ++j) {
            if (sys.dof_offset[j] < 0) continue;
            sys.m.block<6, 6>(sys.dof_offset[i], sys.dof_offset[j]) =
                m_full.block<6, 6>(6 * i, 6 * j);
            sys.k.block<6, 6>(sys.dof_offset[i], sys.dof_offset[j]) =
                k_full.block<6, 6>(6 * i, 6 * j);
        }
    }
    sys.m = 0.5 * (sys.m + sys.m.transpose()).eval();
    sys.k = 0.5 * (sys.k + sys.k.transpose()).eval();
    return sys;
}

// --- modes ---

enum class ModeClass { OutOfPlaneBending, InPlane, Other };

inline std::string to_string(ModeClass c) {
    switch (c) {
        case ModeClass::OutOfPlaneBending: return "out-of-plane-bending";
        case ModeClass::InPlane: return "in-plane";
        default: return "other";
    }
}

// Energy split per displacement coordinate: {z, phi_x, phi_y} move out of
// the xy plane, {x, y, phi_z} stay in it; 60% of squared amplitude decides.
inline ModeClass classify_mode(const Vec& shape) {
    double e_in = 0.0, e_out = 0.0;
    for (Eigen::Index i = 0; i + 6 <= shape.size(); i += 6) {
        e_in += shape[i] * shape[i] + shape[i + 1] * shape[i + 1] +
                shape[i + 5] * shape[i + 5];
        e_out += shape[i + 2] * shape[i + 2] + shape[i + 3] * shape[i + 3] +
                 shape[i + 4] * shape[i + 4];
    }
    const double tot = e_in + e_out;
    if (tot <= 0.0) return ModeClass::Other;
    if (e_out >= 0.6 * tot) return ModeClass::OutOfPlaneBending;
    if (e_in >= 0.6 * tot) return ModeClass::InPlane;
    return ModeClass::Other;
}

struct ModeResult {
    double frequency_hz = 0.0;
    Vec shape;
    ModeClass classification = ModeClass::Other;
};

inline std::vector<ModeResult> natural_frequencies(const AssembledSystem& sys,
                                                   int count) {
    const EigenSolution sol = generalized_eigs(sys.k, sys.m);
    const int n = std::min<int>(count, static_cast<int>(sol.eigenvalues.size()));
    std::vector<ModeResult> modes;
    modes.reserve(n);
    for (int i = 0; i < n; ++i) {
        ModeResult m;
        m.frequency_hz = std::sqrt(sol.eigenvalues[i]) / (2.0 * std::numbers::pi);
        m.shape = sol.eigenvectors.col(i);
        m.classification = classify_mode(m.shape);
        modes.push_back(std::move(m));
    }
    return modes;
}

// --- robot assembly ---

// Places a discretized link into the assembly along unit_axis from origin
// (link z = global z); consecutive elements get the segment springs.
// Returns the index of the link's first element.
inline int place_link(AssemblyInput& input, const DiscretizedLink& link,
                      const Vec3& origin, const Vec3& unit_axis) {
    Mat3 r;
    r.col(0) = unit_axis;
    r.col(1) = Vec3::UnitZ().cross(unit_axis);
    r.col(2) = Vec3::UnitZ();
    const int first = static_cast<int>(input.elements.size());
    for (const auto& e : link.elements)
        input.elements.push_back(
            {e.mass, e.inertia, origin + unit_axis * e.com_x, r});
    for (std::size_t k = 0; k < link.springs.size(); ++k)
        input.springs.push_back({link.springs[k].stiffness,
                                 origin + unit_axis * link.springs[k].pos_x, r,
                                 first + static_cast<int>(k),
                                 first + static_cast<int>(k) + 1});
    return first;
}

struct RobotModalConfig {
    int elements = 20;        // rigid elements per leg
    double rigid_cap = 1e12;  // stiffness standing in for rigid directions
};

namespace detail {

// Cart attachment: actuator compliance (drive stiffness along the rail,
// numerically rigid elsewhere) in series with the foot compliance, then a
// z-hinge whose five constrained directions are backed by the adjacent
// first-segment spring. World frame, rank 5.
inline Mat6 ground_spring_stiffness(const Mat6& foot_compliance,
                                    double drive_stiffness,
                                    const Mat6& k_segment_world,
                                    double rigid_cap) {
    Vec6 act;
    const double c_rigid = 1.0 / rigid_cap;
    act << c_rigid, 1.0 / drive_stiffness, c_rigid, c_rigid, c_rigid, c_rigid;
    const Mat6 c_af = Mat6(act.asDiagonal()) + foot_compliance;
    const Eigen::Matrix<double, 6, 5> e = Mat6::Identity().leftCols<5>();
    const Mat c5 = e.transpose() * c_af * e +
                   invert_symmetric(e.transpose() * k_segment_world * e);
    return e * invert_symmetric(c5) * e.transpose();
}

inline Mat6 to_world(const Mat3& r, const Mat6& k_local) {
    Mat6 d = Mat6::Zero();
    d.topLeftCorner<3, 3>() = r;
    d.bottomRightCorner<3, 3>() = r;
    return d * k_local * d.transpose();
}

} // namespace detail

// Full machine at posture (x, y): both legs discretized and placed between
// their cart and the tool point, carts attached to ground through
// drive/foot springs with a z-hinge, legs joined at the tool point through
// the R-joint degenerated end-segment spring, tool mass riding on leg 1.
inline AssemblyInput build_robot_assembly(const Geometry& g,
                                          const BeamParams& beam1,
                                          const BeamParams& beam2,
                                          const Mat6& foot_compliance,
                                          double drive_stiffness,
                                          double tool_mass, double x, double y,
                                          const RobotModalConfig& cfg = {}) {
    const JointCoords q = inverse_kinematics(g, x, y);
    const Vec3 a1(0.0, q.q1, 0.0);
    const Vec3 a2(g.a, q.q2, 0.0);
    const Vec3 b(x, y, 0.0);
    const Vec3 u1 = (b - a1) / g.L1;
    const Vec3 u2 = (b - a2) / g.L2;

    const DiscretizedLink link1 = discretize_link(beam1, cfg.elements);
    const DiscretizedLink link2 = discretize_link(beam2, cfg.elements);

    AssemblyInput input;
    const int first1 = place_link(input, link1, a1, u1);
    const int first2 = place_link(input, link2, a2, u2);
    const int last1 = first2 - 1;
    const int last2 = static_cast<int>(input.elements.size()) - 1;

    const Mat6 foot_sym = symmetrized_compliance(foot_compliance);
    const double ell1 = beam1.L / (cfg.elements - 1);
    const double ell2 = beam2.L / (cfg.elements - 1);
    const Mat6 k_seg1_world = detail::to_world(input.elements[first1].orientation,
                                               segment_spring_stiffness(beam1, ell1));
    const Mat6 k_seg2_world = detail::to_world(input.elements[first2].orientation,
                                               segment_spring_stiffness(beam2, ell2));

    input.springs.push_back({detail::ground_spring_stiffness(
                                 foot_sym, drive_stiffness, k_seg1_world, cfg.rigid_cap),
                             a1, Mat3::Identity(), kGroundElement, first1});
    input.springs.push_back({detail::ground_spring_stiffness(
                                 foot_sym, drive_stiffness, k_seg2_world, cfg.rigid_cap),
                             a2, Mat3::Identity(), kGroundElement, first2});

    input.springs.push_back(
        {k_seg2_world, b, Mat3::Identity(), last1, last2});
    input.joints.push_back(
        RJoint{static_cast<int>(input.springs.size()) - 1});
    input.joints.push_back(AttachedMass{last1, tool_mass});
    return input;
}

} // namespace biglide
