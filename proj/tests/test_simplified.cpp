#include <catch2/catch_amalgamated.hpp>

#include "biglide/dataset.hpp"
#include "biglide/mechanism.hpp"
#include "biglide/simplified.hpp"

using namespace biglide;

namespace {

const MechanismDataset& ds() {
    static const MechanismDataset d = builtin_dataset();
    return d;
}

Geometry geom() { return geometry_of(ds()); }

} // namespace

TEST_CASE("drive-only compliance with identity Jacobian") {
    const Mat2 c = simplified_compliance(Mat2::Identity(), 1e6);
    CHECK(c.isApprox(Mat2::Identity() / 1e6, 1e-15));
    const Vec2 d = deflection_simplified(Mat2::Identity(), Vec2(1.0, 0.0), 1e6);
    CHECK(d[0] == 1e-6);
    CHECK(d[1] == 0.0);
}

TEST_CASE("drive-only compliance is symmetric positive definite inside the workspace") {
    const Geometry g = geom();
    const WorkspaceBounds wb = workspace_bounds(g);
    for (int i = 1; i < 10; ++i) {
        const double x = wb.x_min + wb.stroke() * i / 10.0;
        const Mat2 c = simplified_compliance(jacobian(g, x, 0.0), ds().drive_stiffness);
        CHECK(relative_asymmetry(c) <= 1e-14);
        CHECK(c(0, 0) > 0.0);
        CHECK(c.determinant() > 0.0);
    }
}

TEST_CASE("deflection under a feed-direction load at the workspace centre") {
    const Mat2 j = jacobian(geom(), 0.4975, 0.0);
    const Vec2 d = deflection_simplified(j, Vec2(1000.0, 0.0), ds().drive_stiffness);
    CHECK_THAT(d[0], Catch::Matchers::WithinRel(1.062254698012016e-06, 1e-12));
    CHECK_THAT(d[1], Catch::Matchers::WithinRel(-3.800755279296120e-08, 1e-9));
    CHECK_THAT(d.norm(), Catch::Matchers::WithinRel(1.0629344370740414e-06, 1e-12));
}

TEST_CASE("deflection is linear in the load") {
    const Mat2 j = jacobian(geom(), 0.3, 0.0);
    const Vec2 f(700.0, -300.0);
    const Vec2 d1 = deflection_simplified(j, f, 1e9);
    const Vec2 d2 = deflection_simplified(j, Vec2(2.0 * f), 1e9);
    CHECK((d2 - 2.0 * d1).norm() <= 1e-15);
}

TEST_CASE("feed-direction deflection vanishes exactly at the workspace edges") {
    const Geometry g = geom();
    const WorkspaceBounds wb = workspace_bounds(g);
    for (const double x : {wb.x_min, wb.x_max}) {
        const Mat2 j = jacobian(g, x, 0.0, 0.0); // guards off at the exact edge
        const Vec2 d = deflection_simplified(j, Vec2(1000.0, 0.0), ds().drive_stiffness);
        CHECK(d[0] == 0.0);
    }
}

TEST_CASE("natural frequencies with identity Jacobian are the drive-spring pair") {
    const Vec2 f = frequencies_simplified(Mat2::Identity(), 1e9, 46.0);
    CHECK_THAT(f[0], Catch::Matchers::WithinRel(742.0637484420296, 1e-12));
    CHECK_THAT(f[1], Catch::Matchers::WithinRel(742.0637484420296, 1e-12));
}

TEST_CASE("natural frequencies at the workspace centre") {
    const Vec2 f = frequencies_simplified(jacobian(geom(), 0.4975, 0.0), 1e9, 46.0);
    CHECK(f[0] <= f[1]);
    CHECK_THAT(f[0], Catch::Matchers::WithinRel(719.1234150368637, 1e-10));
}

TEST_CASE("frequencies scale with the inverse square root of the mass") {
    const Mat2 j = jacobian(geom(), 0.6, 0.0);
    const Vec2 f1 = frequencies_simplified(j, 1e9, 46.0);
    const Vec2 f4 = frequencies_simplified(j, 1e9, 4.0 * 46.0);
    CHECK_THAT(f4[0], Catch::Matchers::WithinRel(0.5 * f1[0], 1e-12));
    CHECK_THAT(f4[1], Catch::Matchers::WithinRel(0.5 * f1[1], 1e-12));
}

TEST_CASE("frequencies are invariant under a planar frame rotation") {
    const Mat2 j = jacobian(geom(), 0.4, 0.0);
    const double ang = 0.37;
    Mat2 r;
    r << std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang);
    const Vec2 f = frequencies_simplified(j, 1e9, 46.0);
    const Vec2 f_rot = frequencies_simplified(Mat2(r * j), 1e9, 46.0);
    CHECK_THAT(f_rot[0], Catch::Matchers::WithinRel(f[0], 1e-10));
    CHECK_THAT(f_rot[1], Catch::Matchers::WithinRel(f[1], 1e-10));
}

TEST_CASE("invalid simplified-model inputs are rejected") {
    const Mat2 j = jacobian(geom(), 0.4975, 0.0);
    CHECK_THROWS_AS(simplified_compliance(j, 0.0), NotPositiveDefinite);
    CHECK_THROWS_AS(simplified_compliance(j, -1e9), NotPositiveDefinite);
    CHECK_THROWS_AS(frequencies_simplified(j, 1e9, 0.0), MassNotPositiveDefinite);
    Mat2 sing;
    sing << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(frequencies_simplified(sing, 1e9, 46.0), SingularPosture);
}
