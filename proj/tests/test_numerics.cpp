#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "biglide/numerics.hpp"

using namespace biglide;

namespace {

Mat random_spd(int n, std::mt19937& rng, double shift = 0.5) {
    std::normal_distribution<double> dist;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
    return a * a.transpose() + shift * Mat::Identity(n, n);
}

Mat random_rotation(int n, std::mt19937& rng) {
    std::normal_distribution<double> dist;
    Mat a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = dist(rng);
    Eigen::HouseholderQR<Mat> qr(a);
    Mat q = qr.householderQ();
    if (q.determinant() < 0) q.col(0) *= -1.0;
    return q;
}

} // namespace

TEST_CASE("relative asymmetry measures the skew part") {
    Mat m(2, 2);
    m << 1.0, 2.0, 2.0, 5.0;
    CHECK(relative_asymmetry(m) == 0.0);
    m(1, 0) = 2.0 + 1e-6;
    CHECK_THAT(relative_asymmetry(m), Catch::Matchers::WithinRel(1e-6 / 5.0, 1e-9));
    CHECK(relative_asymmetry(Mat::Zero(3, 3)) == 0.0);
}

TEST_CASE("symmetrized averages round-off asymmetry and rejects real asymmetry") {
    Mat m(2, 2);
    m << 1.0, 2.0 + 1e-10, 2.0, 5.0;
    const Mat s = symmetrized(m);
    CHECK(s(0, 1) == s(1, 0));
    CHECK_THAT(s(0, 1), Catch::Matchers::WithinRel(2.0 + 0.5e-10, 1e-15));

    m(0, 1) = 2.1;
    CHECK_THROWS_AS(symmetrized(m), NotSymmetric);
    CHECK_THROWS_AS(symmetrized(Mat::Ones(2, 3)), NotSymmetric);
}

TEST_CASE("invert_symmetric inverts SPD matrices") {
    SECTION("known 2x2 inverse") {
        Mat m(2, 2);
        m << 4.0, 1.0, 1.0, 3.0;
        const Mat inv = invert_symmetric(m);
        Mat expect(2, 2);
        expect << 3.0 / 11.0, -1.0 / 11.0, -1.0 / 11.0, 4.0 / 11.0;
        CHECK((inv - expect).cwiseAbs().maxCoeff() < 1e-14);
    }
    SECTION("involution on a badly scaled SPD matrix") {
        std::mt19937 rng(7);
        Mat m = random_spd(6, rng);
        m *= 1e9;
        const Mat back = invert_symmetric(invert_symmetric(m));
        CHECK((back - m).cwiseAbs().maxCoeff() <= 1e-7 * m.cwiseAbs().maxCoeff());
    }
    SECTION("indefinite input is rejected") {
        Mat m = -Mat::Identity(3, 3);
        CHECK_THROWS_AS(invert_symmetric(m), NotPositiveDefinite);
        Mat z = Mat::Zero(2, 2);
        CHECK_THROWS_AS(invert_symmetric(z), NotPositiveDefinite);
    }
}

TEST_CASE("solve_linear solves well-conditioned systems and flags singular ones") {
    Mat a(3, 3);
    a << 2, 1, 0, 1, 3, 1, 0, 1, 2;
    Vec x_true(3);
    x_true << 1.0, -2.0, 0.5;
    const Vec x = solve_linear(a, a * x_true);
    CHECK((x - x_true).cwiseAbs().maxCoeff() < 1e-12);

    Mat s(2, 2);
    s << 1.0, 2.0, 2.0, 4.0; // rank 1
    Vec b(2);
    b << 1.0, 1.0;
    CHECK_THROWS_AS(solve_linear(s, b), Singular);

    // condition ~1e16 trips the guard even though LU would "succeed"
    Mat ill(2, 2);
    ill << 1.0, 1.0, 1.0, 1.0 + 1e-16;
    CHECK_THROWS_AS(solve_linear(ill, b), Singular);
    CHECK_THROWS_AS(solve_linear(Mat::Identity(2, 2), Vec::Ones(3)), Singular);
}

TEST_CASE("generalized_eigs solves the symmetric-definite pencil") {
    SECTION("diagonal pencil has closed-form circular frequencies") {
        const Mat k = Vec2(4.0, 9.0).asDiagonal().toDenseMatrix();
        const EigenSolution sol = generalized_eigs(k, Mat::Identity(2, 2));
        REQUIRE(sol.eigenvalues.size() == 2);
        CHECK_THAT(std::sqrt(sol.eigenvalues[0]), Catch::Matchers::WithinRel(2.0, 1e-12));
        CHECK_THAT(std::sqrt(sol.eigenvalues[1]), Catch::Matchers::WithinRel(3.0, 1e-12));
        CHECK(sol.eigenvectors.col(0).norm() == Catch::Approx(1.0));
    }
    SECTION("eigenvalue count equals dimension") {
        std::mt19937 rng(11);
        const Mat k = random_spd(8, rng);
        const Mat m = random_spd(8, rng);
        const EigenSolution sol = generalized_eigs(k, m);
        CHECK(sol.eigenvalues.size() == 8);
        CHECK(sol.eigenvectors.rows() == 8);
        CHECK(sol.eigenvectors.cols() == 8);
    }
    SECTION("congruence invariance under orthonormal re-expression") {
        std::mt19937 rng(13);
        const Mat k = random_spd(5, rng);
        const Mat m = random_spd(5, rng);
        const Mat q = random_rotation(5, rng);
        const Vec ev = generalized_eigs(k, m).eigenvalues;
        const Vec ev_rot =
            generalized_eigs(q * k * q.transpose(), q * m * q.transpose()).eigenvalues;
        CHECK((ev - ev_rot).cwiseAbs().maxCoeff() <= 1e-8 * ev.cwiseAbs().maxCoeff());
    }
    SECTION("stiffness scaling scales eigenvalues linearly") {
        std::mt19937 rng(17);
        const Mat k = random_spd(4, rng);
        const Mat m = random_spd(4, rng);
        const Vec ev = generalized_eigs(k, m).eigenvalues;
        const Vec ev4 = generalized_eigs(Mat(4.0 * k), m).eigenvalues;
        CHECK((ev4 - 4.0 * ev).cwiseAbs().maxCoeff() <= 1e-9 * ev4.maxCoeff());
    }
    SECTION("indefinite mass is rejected") {
        const Mat k = Mat::Identity(2, 2);
        Mat m(2, 2);
        m << 1.0, 0.0, 0.0, -1.0;
        CHECK_THROWS_AS(generalized_eigs(k, m), MassNotPositiveDefinite);
    }
    SECTION("near-null eigenvalues clamp to exact zero") {
        Mat k = Vec2(1e-14, 1.0).asDiagonal().toDenseMatrix();
        const EigenSolution sol = generalized_eigs(k, Mat::Identity(2, 2));
        CHECK(sol.eigenvalues[0] == 0.0);
        CHECK(sol.eigenvalues[1] > 0.5);
    }
}

TEST_CASE("rank_psd counts eigenvalues above the relative floor") {
    Mat m = Vec3(0.0, 1e-12, 1.0).asDiagonal().toDenseMatrix();
    CHECK(rank_psd(m) == 1);
    CHECK(rank_psd(Mat::Identity(4, 4)) == 4);
    CHECK(rank_psd(Mat::Zero(3, 3)) == 0);
}
