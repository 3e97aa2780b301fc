#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "biglide/modal.hpp"
#include "biglide/simplified.hpp"
#include "biglide/vjm.hpp"

namespace biglide {

enum class ModelKind {
    SimplifiedStiffness,
    RefinedStiffness,
    SimplifiedModal,
    RefinedModal,
};

inline const char* model_name(ModelKind m) {
    switch (m) {
        case ModelKind::SimplifiedStiffness: return "simplified-stiffness";
        case ModelKind::RefinedStiffness: return "refined-stiffness";
        case ModelKind::SimplifiedModal: return "simplified-modal";
        case ModelKind::RefinedModal: return "refined-modal";
    }
    return "?";
}

struct SweepRecord {
    ModelKind model = ModelKind::SimplifiedStiffness;
    double alpha = 1.0;
    double x = 0.0;
    std::string metric;
    double value = 0.0;
};

enum class LinkModel { RawCompliance, EquivalentBeam };

struct SweepOptions {
    int grid_n = 41;
    double delta_rel = 1e-3;     // workspace shrink for interior sampling
    bool tool_compliance = false;
    int elements = 20;           // rigid elements per leg, refined modal
    double load_newton = 1000.0;
    LinkModel links = LinkModel::RawCompliance; // refined stiffness maps only
};

// Mode classification encoded as a numeric record value.
inline double mode_class_code(ModeClass c) {
    switch (c) {
        case ModeClass::OutOfPlaneBending: return 0.0;
        case ModeClass::InPlane: return 1.0;
        default: return 2.0;
    }
}

// n equispaced points over the delta-shrunk open workspace; the last point
// is pinned so the grid always ends exactly at x_max - delta.
inline std::vector<double> interior_grid(const WorkspaceBounds& ws, int n,
                                         double delta_rel) {
    if (n < 2) throw Error("interior_grid: need at least 2 points");
    const double delta = delta_rel * ws.stroke();
    const double lo = ws.x_min + delta;
    const double hi = ws.x_max - delta;
    std::vector<double> xs(n);
    const double step = (hi - lo) / (n - 1);
    for (int i = 0; i < n; ++i) xs[i] = lo + i * step;
    xs.back() = hi;
    return xs;
}

struct Station {
    std::string name;
    double x = 0.0;
};

// The three reporting stations: workspace center and the two delta-shrunk
// extremities.
inline std::vector<Station> station_set(const WorkspaceBounds& ws,
                                        double delta_rel) {
    const double delta = delta_rel * ws.stroke();
    return {{"center", ws.x_min + ws.stroke() / 2.0},
            {"left", ws.x_min + delta},
            {"right", ws.x_max - delta}};
}

namespace detail {

struct PlanarDeflections {
    double planar_fx = 0.0;
    double planar_fy = 0.0;
    double z_fz = 0.0; // refined only
};

inline PlanarDeflections simplified_deflections(const Geometry& g, double x,
                                                double k_drive, double load,
                                                double eps_sing) {
    const Mat2 j = jacobian(g, x, 0.0, eps_sing);
    PlanarDeflections out;
    out.planar_fx = deflection_simplified(j, {load, 0.0}, k_drive).norm();
    out.planar_fy = deflection_simplified(j, {0.0, load}, k_drive).norm();
    return out;
}

inline PlanarDeflections refined_deflections(const MechanismDataset& ds,
                                             double x,
                                             const ChainOptions& copt,
                                             double load) {
    const Mat6 km = manipulator_stiffness_at(ds, x, 0.0, copt);
    PlanarDeflections out;
    Vec6 f = Vec6::Zero();
    f[0] = load;
    Vec6 d = deflection_refined(km, f);
    out.planar_fx = std::hypot(d[0], d[1]);
    f.setZero();
    f[1] = load;
    d = deflection_refined(km, f);
    out.planar_fy = std::hypot(d[0], d[1]);
    f.setZero();
    f[2] = load;
    d = deflection_refined(km, f);
    out.z_fz = std::abs(d[2]);
    return out;
}

// Dataset with geometry replaced by a scaled variant (compliances, tool
// offset and masses-for-modal are handled by the callers).
inline MechanismDataset with_geometry(const MechanismDataset& ds,
                                      const Geometry& g) {
    MechanismDataset out = ds;
    out.a = g.a;
    out.L1 = g.L1;
    out.L2 = g.L2;
    return out;
}

inline ChainOptions equivalent_link_options(const MechanismDataset& ds,
                                            const Geometry& g,
                                            bool tool_compliance) {
    const BeamParams b1 = fit_equivalent_beam(ds.k_leg1, ds.L1, ds.m_leg1);
    const BeamParams b2 = fit_equivalent_beam(ds.k_leg2, ds.L2, ds.m_leg2);
    ChainOptions copt;
    copt.tool_compliance = tool_compliance;
    copt.leg1_compliance = beam_end_compliance(b1.EA, b1.EIy, b1.EIz, b1.GJ, g.L1);
    copt.leg2_compliance = beam_end_compliance(b2.EA, b2.EIy, b2.EIz, b2.GJ, g.L2);
    return copt;
}

struct RobotBranchFrequencies {
    double f_out = 0.0;    // lowest out-of-plane-bending mode
    double f_in = 0.0;     // lowest in-plane mode
    double f_lowest = 0.0; // lowest mode regardless of class
    ModeClass class1 = ModeClass::Other;
    ModeClass class2 = ModeClass::Other;
    double f1 = 0.0, f2 = 0.0; // two lowest, ascending
};

inline RobotBranchFrequencies robot_frequencies(const MechanismDataset& ds,
                                                const Geometry& g, double x,
                                                int elements) {
    BeamParams b1 = fit_equivalent_beam(ds.k_leg1, ds.L1, ds.m_leg1);
    BeamParams b2 = fit_equivalent_beam(ds.k_leg2, ds.L2, ds.m_leg2);
    // rescaled length at fixed cross-section; mass follows automatically
    b1.L = g.L1;
    b2.L = g.L2;
    const AssemblyInput robot = build_robot_assembly(
        g, b1, b2, symmetrized_compliance(ds.k_foot), ds.drive_stiffness,
        ds.m_tool, x, 0.0, RobotModalConfig{elements, 1e12});
    const AssembledSystem sys = assemble_system(robot);
    const std::vector<ModeResult> modes =
        natural_frequencies(sys, static_cast<int>(sys.m.rows()));

    RobotBranchFrequencies out;
    out.f_lowest = modes[0].frequency_hz;
    out.f1 = modes[0].frequency_hz;
    out.f2 = modes.size() > 1 ? modes[1].frequency_hz : modes[0].frequency_hz;
    out.class1 = modes[0].classification;
    out.class2 = modes.size() > 1 ? modes[1].classification : ModeClass::Other;
    bool have_out = false, have_in = false;
    for (const auto& m : modes) {
        if (!have_out && m.classification == ModeClass::OutOfPlaneBending) {
            out.f_out = m.frequency_hz;
            have_out = true;
        }
        if (!have_in && m.classification == ModeClass::InPlane) {
            out.f_in = m.frequency_hz;
            have_in = true;
        }
        if (have_out && have_in) break;
    }
    return out;
}

} // namespace detail

// Deflection map over the workspace: planar deflection norms under x- and
// y-loads (plus out-of-plane deflection under an axial load for the refined
// model) on the interior grid, with the two true workspace endpoints
// appended for the stiffness maps.
inline std::vector<SweepRecord> stiffness_map(const MechanismDataset& ds,
                                              ModelKind model,
                                              const SweepOptions& opt = {}) {
    if (model != ModelKind::SimplifiedStiffness &&
        model != ModelKind::RefinedStiffness)
        throw Error("stiffness_map: expects a stiffness model kind");
    const Geometry g = geometry_of(ds);
    const WorkspaceBounds ws = workspace_bounds(g);
    std::vector<double> xs = interior_grid(ws, opt.grid_n, opt.delta_rel);
    xs.insert(xs.begin(), ws.x_min);
    xs.push_back(ws.x_max);

    ChainOptions copt;
    copt.tool_compliance = opt.tool_compliance;
    if (model == ModelKind::RefinedStiffness &&
        opt.links == LinkModel::EquivalentBeam)
        copt = detail::equivalent_link_options(ds, g, opt.tool_compliance);

    std::vector<SweepRecord> records;
    for (const double x : xs) {
        const bool endpoint = (x == ws.x_min || x == ws.x_max);
        detail::PlanarDeflections d;
        if (model == ModelKind::SimplifiedStiffness) {
            // the guard is lifted at the exact endpoints, where the jacobian
            // is finite but has a zero column
            d = detail::simplified_deflections(g, x, ds.drive_stiffness,
                                               opt.load_newton,
                                               endpoint ? 0.0 : 1e-6);
        } else {
            d = detail::refined_deflections(ds, x, copt, opt.load_newton);
        }
        records.push_back({model, 1.0, x, "planar_fx_m", d.planar_fx});
        records.push_back({model, 1.0, x, "planar_fy_m", d.planar_fy});
        if (model == ModelKind::RefinedStiffness)
            records.push_back({model, 1.0, x, "z_fz_m", d.z_fz});
    }
    return records;
}

// Natural-frequency map over the delta-shrunk interior grid. The simplified
// model reports f1; the refined model reports the two lowest modes and
// their classifications (see mode_class_code).
inline std::vector<SweepRecord> frequency_map(const MechanismDataset& ds,
                                              ModelKind model,
                                              const SweepOptions& opt = {}) {
    if (model != ModelKind::SimplifiedModal && model != ModelKind::RefinedModal)
        throw Error("frequency_map: expects a modal model kind");
    const Geometry g = geometry_of(ds);
    const WorkspaceBounds ws = workspace_bounds(g);
    const std::vector<double> xs = interior_grid(ws, opt.grid_n, opt.delta_rel);

    std::vector<SweepRecord> records;
    for (const double x : xs) {
        if (model == ModelKind::SimplifiedModal) {
            const Vec2 f = frequencies_simplified(jacobian(g, x, 0.0),
                                                  ds.drive_stiffness, ds.m_tool);
            records.push_back({model, 1.0, x, "f1_hz", f[0]});
        } else {
            const auto rf = detail::robot_frequencies(ds, g, x, opt.elements);
            records.push_back({model, 1.0, x, "f1_hz", rf.f1});
            records.push_back({model, 1.0, x, "f2_hz", rf.f2});
            records.push_back({model, 1.0, x, "mode1_class", mode_class_code(rf.class1)});
            records.push_back({model, 1.0, x, "mode2_class", mode_class_code(rf.class2)});
        }
    }
    return records;
}

// Leg-length scaling study at the three workspace stations. Refined models
// always run on equivalent-beam links here: the measured compliance
// matrices describe one leg length and cannot be rescaled, the fitted beams
// can. The refined modal records track the two physical branches (lowest
// out-of-plane and lowest in-plane mode) so a series follows one branch
// across mode-order crossings; the raw sorted-lowest value is emitted
// alongside.
inline std::vector<SweepRecord> alpha_sweep(const MechanismDataset& ds,
                                            const std::vector<ModelKind>& models,
                                            double alpha_min, double alpha_max,
                                            double alpha_step,
                                            const SweepOptions& opt = {}) {
    if (!(alpha_step > 0.0) || !(alpha_max >= alpha_min))
        throw InvalidAlpha("alpha_sweep: bad alpha range");
    std::vector<double> alphas;
    for (int i = 0;; ++i) {
        const double alpha = alpha_min + i * alpha_step;
        if (alpha > alpha_max + 0.5 * alpha_step) break;
        alphas.push_back(std::min(alpha, alpha_max));
    }

    const Geometry g0 = geometry_of(ds);
    std::vector<SweepRecord> records;
    for (const double alpha : alphas) {
        const ScaledMechanism scaled =
            scale_geometry(g0, ds.m_leg1, ds.m_leg2, alpha);
        const Geometry& g = scaled.geometry;
        const WorkspaceBounds ws = workspace_bounds(g);
        const MechanismDataset ds_a = detail::with_geometry(ds, g);

        for (const Station& st : station_set(ws, opt.delta_rel)) {
            for (const ModelKind model : models) {
                const std::string suffix = "." + st.name;
                switch (model) {
                    case ModelKind::SimplifiedStiffness: {
                        const auto d = detail::simplified_deflections(
                            g, st.x, ds.drive_stiffness, opt.load_newton, 1e-6);
                        records.push_back({model, alpha, st.x,
                                           "planar_fx_m" + suffix, d.planar_fx});
                        records.push_back({model, alpha, st.x,
                                           "planar_fy_m" + suffix, d.planar_fy});
                        break;
                    }
                    case ModelKind::RefinedStiffness: {
                        const ChainOptions copt = detail::equivalent_link_options(
                            ds, g, opt.tool_compliance);
                        const auto d = detail::refined_deflections(
                            ds_a, st.x, copt, opt.load_newton);
                        records.push_back({model, alpha, st.x,
                                           "planar_fx_m" + suffix, d.planar_fx});
                        records.push_back({model, alpha, st.x,
                                           "planar_fy_m" + suffix, d.planar_fy});
                        records.push_back(
                            {model, alpha, st.x, "z_fz_m" + suffix, d.z_fz});
                        break;
                    }
                    case ModelKind::SimplifiedModal: {
                        const Vec2 f = frequencies_simplified(
                            jacobian(g, st.x, 0.0), ds.drive_stiffness, ds.m_tool);
                        records.push_back(
                            {model, alpha, st.x, "f1_hz" + suffix, f[0]});
                        break;
                    }
                    case ModelKind::RefinedModal: {
                        const auto rf =
                            detail::robot_frequencies(ds, g, st.x, opt.elements);
                        records.push_back(
                            {model, alpha, st.x, "f1_hz" + suffix, rf.f_out});
                        records.push_back(
                            {model, alpha, st.x, "f2_hz" + suffix, rf.f_in});
                        records.push_back({model, alpha, st.x,
                                           "f1_lowest_hz" + suffix, rf.f_lowest});
                        break;
                    }
                }
            }
        }
    }
    return records;
}

enum class Trend { Increasing, Decreasing, NonMonotone };

inline const char* trend_name(Trend t) {
    switch (t) {
        case Trend::Increasing: return "increasing";
        case Trend::Decreasing: return "decreasing";
        default: return "non-monotone";
    }
}

// Strict monotonicity with a small relative slack absorbing round-off.
inline Trend trend_of(const std::vector<double>& values,
                      double rel_slack = 1e-9) {
    if (values.size() < 2) return Trend::NonMonotone;
    double scale = 0.0;
    for (const double v : values) scale = std::max(scale, std::abs(v));
    const double tol = rel_slack * scale;
    bool inc = true, dec = true;
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
        if (!(values[i + 1] - values[i] > tol)) inc = false;
        if (!(values[i] - values[i + 1] > tol)) dec = false;
    }
    if (inc) return Trend::Increasing;
    if (dec) return Trend::Decreasing;
    return Trend::NonMonotone;
}

struct TrendVerdict {
    ModelKind model = ModelKind::SimplifiedStiffness;
    std::string metric;
    Trend trend = Trend::NonMonotone;
    std::vector<double> values; // in ascending-alpha order
};

// Groups alpha-sweep records by (model, metric incl. station suffix) and
// reports the trend of each series in ascending alpha.
inline std::vector<TrendVerdict> trend_report(
    const std::vector<SweepRecord>& records) {
    struct Key {
        ModelKind model;
        std::string metric;
        bool operator<(const Key& o) const {
            if (model != o.model) return model < o.model;
            return metric < o.metric;
        }
    };
    std::map<Key, std::vector<std::pair<double, double>>> series;
    for (const auto& r : records)
        series[{r.model, r.metric}].emplace_back(r.alpha, r.value);

    std::vector<TrendVerdict> verdicts;
    for (auto& [key, pts] : series) {
        std::stable_sort(pts.begin(), pts.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        TrendVerdict v;
        v.model = key.model;
        v.metric = key.metric;
        for (const auto& [alpha, value] : pts) v.values.push_back(value);
        v.trend = trend_of(v.values);
        verdicts.push_back(std::move(v));
    }
    return verdicts;
}

} // namespace biglide
