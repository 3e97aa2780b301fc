#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <string>

#include "biglide/errors.hpp"

namespace biglide {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using Mat2 = Eigen::Matrix2d;
using Vec2 = Eigen::Vector2d;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Largest |m - m^T| entry relative to the largest |m| entry.
inline double relative_asymmetry(const Eigen::Ref<const Mat>& m) {
    const double scale = m.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    return (m - m.transpose()).cwiseAbs().maxCoeff() / scale;
}

// Replaces a nominally symmetric matrix by (m + m^T)/2. Asymmetry beyond
// `tol` (relative) is treated as corrupted input, not round-off.
inline Mat symmetrized(const Eigen::Ref<const Mat>& m, double tol = 1e-8) {
    if (m.rows() != m.cols())
        throw NotSymmetric("symmetrized: matrix is not square");
    const double asym = relative_asymmetry(m);
    if (!(asym <= tol))
        throw NotSymmetric("symmetrized: relative asymmetry " +
                           std::to_string(asym) + " exceeds tolerance " +
                           std::to_string(tol));
    return 0.5 * (m + m.transpose());
}

// Inverse of a symmetric positive definite matrix via Cholesky.
inline Mat invert_symmetric(const Eigen::Ref<const Mat>& m, double sym_tol = 1e-8) {
    const Mat s = symmetrized(m, sym_tol);
    Eigen::LLT<Mat> llt(s);
    if (llt.info() != Eigen::Success)
        throw NotPositiveDefinite("invert_symmetric: matrix is not positive definite");
    return llt.solve(Mat::Identity(s.rows(), s.cols()));
}

// Dense linear solve with a reciprocal-condition guard; a nearly singular
// system signals a singular posture or a rank-deficient assembly upstream.
inline Vec solve_linear(const Eigen::Ref<const Mat>& a, const Eigen::Ref<const Vec>& b) {
    if (a.rows() != a.cols() || a.rows() != b.size())
        throw Singular("solve_linear: dimension mismatch");
    Eigen::PartialPivLU<Mat> lu(a);
    if (!(lu.rcond() > 1e-14))
        throw Singular("solve_linear: matrix condition estimate exceeds 1e14");
    return lu.solve(b);
}

struct EigenSolution {
    Vec eigenvalues;  // omega^2, ascending, clamped nonnegative
    Mat eigenvectors; // unit-norm columns, same order
};

// Symmetric-definite generalized eigenproblem K v = lambda M v, solved by a
// Cholesky reduction of M followed by a symmetric standard eigensolve.
// Eigenvalues below clamp_factor * max are reported as exactly zero
// (rigid-body modes). The factor must stay well below genuine
// lowest-elastic-mode ratios, which reach ~4e-10 of the largest eigenvalue
// in the assembled robot models.
inline EigenSolution generalized_eigs(const Eigen::Ref<const Mat>& k,
                                      const Eigen::Ref<const Mat>& m,
                                      double clamp_factor = 1e-12) {
    if (k.rows() != k.cols() || m.rows() != m.cols() || k.rows() != m.rows())
        throw Error("generalized_eigs: dimension mismatch");
    const Mat ks = symmetrized(k);
    const Mat ms = symmetrized(m);
    {
        Eigen::LLT<Mat> llt(ms);
        if (llt.info() != Eigen::Success)
            throw MassNotPositiveDefinite("generalized_eigs: mass matrix is not positive definite");
    }
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(
        ks, ms, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (solver.info() != Eigen::Success)
        throw MassNotPositiveDefinite("generalized_eigs: reduction failed");

    EigenSolution sol;
    sol.eigenvalues = solver.eigenvalues();
    sol.eigenvectors = solver.eigenvectors();
    const double lmax = std::max(sol.eigenvalues.maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < sol.eigenvalues.size(); ++i) {
        if (sol.eigenvalues[i] < clamp_factor * lmax) sol.eigenvalues[i] = 0.0;
        const double n = sol.eigenvectors.col(i).norm();
        if (n > 0.0) sol.eigenvectors.col(i) /= n;
    }
    return sol;
}

// Number of eigenvalues of a symmetric PSD matrix above rel_tol * max.
inline int rank_psd(const Eigen::Ref<const Mat>& m, double rel_tol = 1e-9) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.transpose()),
                                          Eigen::EigenvaluesOnly);
    const Vec ev = es.eigenvalues();
    const double lmax = std::max(ev.maxCoeff(), 0.0);
    int r = 0;
    for (Eigen::Index i = 0; i < ev.size(); ++i)
        if (ev[i] > rel_tol * lmax) ++r;
    return r;
}

} // namespace biglide
