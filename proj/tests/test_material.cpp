#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hicon/material.hpp"
#include "test_support.hpp"

using namespace hicon;
using namespace hicon::testing;

TEST_CASE("distance to rotations: closed form") {
    const auto at_identity = dist_to_rotations(Mat2::identity());
    CHECK(at_identity.distance == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(at_identity.nearest(0, 0) == doctest::Approx(1.0));

    const auto doubled = dist_to_rotations(2.0 * Mat2::identity());
    CHECK(doubled.distance == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(doubled.nearest(0, 0) == doctest::Approx(1.0));

    // reflection: sigma = (1,1) with det < 0 gives dist^2 = 4
    const auto reflected = dist_to_rotations(Mat2(1.0, 0.0, 0.0, -1.0));
    CHECK(reflected.distance == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("distance to rotations agrees with the angle-grid oracle") {
    Rng rng(17);
    for (int trial = 0; trial < 5; ++trial) {
        Mat2 f;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) f(i, j) = uniform(rng, -2.0, 2.0);
        const double grid = dist_to_rotations_grid(f);
        const auto closed = dist_to_rotations(f);
        CHECK(closed.distance == doctest::Approx(grid).epsilon(1e-9));
        // the reported rotation attains the distance
        const Mat2 d = f - closed.nearest;
        CHECK(std::sqrt(ddot(d, d)) == doctest::Approx(closed.distance).epsilon(1e-12));
    }
    // the reflection case from the closed-form test, against the same oracle
    CHECK(dist_to_rotations_grid(Mat2(1.0, 0.0, 0.0, -1.0)) ==
          doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("distance is invariant under left rotations") {
    Rng rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        Mat2 f;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) f(i, j) = uniform(rng, -2.0, 2.0);
        const Mat2 r = Mat2::rotation(uniform(rng, 0.0, 2.0 * M_PI));
        CHECK(dist_to_rotations(matmul(r, f)).distance ==
              doctest::Approx(dist_to_rotations(f).distance).epsilon(1e-12));
    }
}

TEST_CASE("builtin squared-distance law") {
    const MaterialLaw law = builtin_dist_squared_law();
    CHECK(law.w(Mat2::identity()) == 0.0);

    // W(I + t e1 x e2) ~ t^2 Q(e1 x e2); the Frobenius norm of
    // sym(e1 x e2) gives Q = 1/2, matching the direct expansion
    // 4 + t^2 - 2 sqrt(4 + t^2) = t^2/2 + O(t^4)
    const Mat2 shear = Mat2::outer(Vec2(1, 0), Vec2(0, 1));
    CHECK(law.quad_form(shear) == doctest::Approx(0.5).epsilon(1e-14));
    for (double t : {1e-2, 1e-3}) {
        const double w = law.w(Mat2::identity() + t * shear);
        CHECK(w / (t * t) == doctest::Approx(0.5).epsilon(20.0 * t));
    }

    // frame-indifference at a 30-degree rotation
    Rng rng(29);
    const Mat2 r30 = Mat2::rotation(M_PI / 6.0);
    for (int trial = 0; trial < 20; ++trial) {
        Mat2 f;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) f(i, j) = uniform(rng, -2.0, 2.0);
        CHECK(law.w(matmul(r30, f)) ==
              doctest::Approx(law.w(f)).epsilon(1e-12).scale(1.0 + law.w(f)));
    }
}

TEST_CASE("quadratic forms of shipped laws vanish on skew parts") {
    Rng rng(31);
    for (const MaterialLaw& law : {builtin_dist_squared_law(), builtin_st_venant_law()}) {
        for (int trial = 0; trial < 100; ++trial) {
            Mat2 g;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) g(i, j) = uniform(rng, -1.0, 1.0);
            CHECK(law.quad_form(g) ==
                  doctest::Approx(law.quad_form(sym(g))).epsilon(1e-12));
        }
        CHECK(law.quad_form.min_symmetric_eigenvalue() > 0.0);
    }
}

TEST_CASE("analytic gradients match central differences") {
    Rng rng(37);
    for (const MaterialLaw& law : {builtin_dist_squared_law(), builtin_st_venant_law()}) {
        int tested = 0;
        while (tested < 20) {
            Mat2 f;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) f(i, j) = uniform(rng, -2.0, 2.0);
            // keep away from the polar branch cut
            const double s = f(0, 0) + f(1, 1), w = f(1, 0) - f(0, 1);
            if (std::sqrt(s * s + w * w) < 0.5) continue;
            ++tested;
            Mat2 dir;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j) dir(i, j) = uniform(rng, -1.0, 1.0);
            const Mat2 grad = law.dw(f);
            double prev_err = 0.0;
            int k = 0;
            for (double t : {1e-3, 1e-4}) {
                const double fd =
                    (law.w(f + t * dir) - law.w(f - t * dir)) / (2.0 * t);
                const double err = std::abs(fd - ddot(grad, dir));
                if (k == 0)
                    prev_err = err;
                else
                    CHECK(err <= std::max(0.1 * prev_err, 1e-8));
                ++k;
            }
        }
    }
}

TEST_CASE("class membership: shipped soft law passes") {
    const MembershipReport rep = verify_class_membership(builtin_dist_squared_law(), 1000, 99);
    for (const auto& c : rep.checks) {
        INFO(c.property, " margin ", c.worst_margin);
        CHECK(c.pass);
    }
}

TEST_CASE("class membership flags broken laws") {
    // not frame-indifferent: W(R) > 0 for R != I
    MaterialLaw bad = builtin_dist_squared_law();
    bad.name = "frobenius-from-identity";
    bad.w = [](const Mat2& f) {
        const Mat2 d = f - Mat2::identity();
        return ddot(d, d);
    };
    bad.w_disp = nullptr;
    bad.dw_disp = nullptr;
    const MembershipReport rep = verify_class_membership(bad, 500, 7);
    bool frame_failed = false;
    for (const auto& c : rep.checks)
        if (c.property == "frame-indifference") frame_failed = !c.pass;
    CHECK(frame_failed);

    // identically zero energy cannot be theta-non-degenerate
    MaterialLaw zero = builtin_dist_squared_law();
    zero.name = "zero";
    zero.w = [](const Mat2&) { return 0.0; };
    zero.w_disp = nullptr;
    zero.dw_disp = nullptr;
    zero.theta = 1.0;
    const MembershipReport rep0 = verify_class_membership(zero, 500, 7);
    bool nondeg_failed = false;
    for (const auto& c : rep0.checks)
        if (c.property == "non-degeneracy") nondeg_failed = !c.pass;
    CHECK(nondeg_failed);
    CHECK(zero.w(2.0 * Mat2::identity()) <
          zero.theta * std::pow(dist_to_rotations(2.0 * Mat2::identity()).distance, 2));
}

TEST_CASE("St. Venant law: valid on orientation-preserving states only") {
    const MaterialLaw svk = builtin_st_venant_law();
    CHECK(svk.w(Mat2::identity()) == 0.0);

    // theta = 1/4 bound holds whenever det F >= 0
    Rng rng(41);
    int tested = 0;
    while (tested < 500) {
        Mat2 f;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) f(i, j) = uniform(rng, -2.0, 2.0);
        if (det(f) < 0.0) continue;
        ++tested;
        const double d = dist_to_rotations(f).distance;
        CHECK(svk.w(f) >= 0.25 * d * d - 1e-12);
    }

    // near a reflection the energy is tiny while the distance is not
    const Mat2 reflected(1.01, 0.0, 0.0, -0.99);
    const double d = dist_to_rotations(reflected).distance;
    CHECK(svk.w(reflected) < 0.25 * d * d);
}

TEST_CASE("membership requires at least 100 samples") {
    CHECK_THROWS(verify_class_membership(builtin_dist_squared_law(), 10, 1));
}
