#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hicon/assemble.hpp"
#include "hicon/mesh.hpp"
#include "test_support.hpp"

using namespace hicon;
using namespace hicon::testing;

namespace {
MacroMesh make_mesh(int n, int m) {
    static std::vector<std::unique_ptr<CompositeGeometry>> keep;
    keep.push_back(std::make_unique<CompositeGeometry>(CompositeGeometry::unit_square(n, 1.0, {})));
    return MacroMesh(*keep.back(), m);
}
} // namespace

TEST_CASE("P1 gradients reproduce linear fields exactly") {
    const MacroMesh mesh = make_mesh(4, 4);
    const VectorField ident = interpolate(mesh, [](Vec2 x) { return x; });
    for (const Mat2& g : gradient_at_quadrature(mesh.elements(), ident)) {
        CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(g(0, 1)) < 1e-14);
        CHECK(std::abs(g(1, 0)) < 1e-14);
    }
    const VectorField shear = interpolate(mesh, [](Vec2 x) { return Vec2(x.y, 0.0); });
    for (const Mat2& g : gradient_at_quadrature(mesh.elements(), shear)) {
        CHECK(g(0, 1) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(std::abs(g(0, 0)) + std::abs(g(1, 0)) + std::abs(g(1, 1)) < 1e-14);
    }
}

TEST_CASE("P1 gradient error of a smooth field shrinks linearly in h") {
    auto max_err = [](int n, int m) {
        const MacroMesh mesh = make_mesh(n, m);
        const VectorField f = interpolate(mesh, [](Vec2 x) {
            return Vec2(std::sin(2.0 * M_PI * x.x), 0.0);
        });
        const auto grads = gradient_at_quadrature(mesh.elements(), f);
        double worst = 0.0;
        for (std::size_t k = 0; k < grads.size(); ++k) {
            const double exact = 2.0 * M_PI * std::cos(2.0 * M_PI * mesh.elements()[k].bary.x);
            worst = std::max(worst, std::abs(grads[k](0, 0) - exact));
        }
        return worst;
    };
    const double e64 = max_err(8, 8);   // h = 1/64
    const double e128 = max_err(8, 16); // h = 1/128
    CHECK(e128 <= 0.6 * e64);
}

TEST_CASE("assembled quadratic matches elementwise quadrature") {
    const MacroMesh mesh = make_mesh(4, 4);

    // Q(G) = |G|^2, identity displacement: integral of |I|^2 = d = 2
    const QuadForm frob = QuadForm::from_function([](const Mat2& g) { return ddot(g, g); });
    const auto a = assemble_quadratic(mesh.elements(), mesh.node_count(), frob);
    const VectorField ident = interpolate(mesh, [](Vec2 x) { return x; });
    CHECK(a.value(ident) == doctest::Approx(2.0).epsilon(1e-13));

    // rotation generator has skew gradient, so the symmetric form vanishes
    const auto sym_form =
        assemble_quadratic(mesh.elements(), mesh.node_count(), QuadForm::dist_squared());
    const VectorField rot = interpolate(mesh, [](Vec2 x) { return Vec2(x.y, -x.x); });
    CHECK(std::abs(sym_form.value(rot)) < 1e-13);

    // random field against the loop-based quadrature oracle
    Rng rng(3);
    const MacroMesh mesh8 = make_mesh(8, 4);
    const QuadForm iso = QuadForm::isotropic(1.0, 1.0);
    const VectorField f = random_field(mesh8, rng);
    const auto op = assemble_quadratic(mesh8.elements(), mesh8.node_count(), iso);
    const double direct =
        quadratic_energy_loop(mesh8.elements(), iso, f, ComponentTag::Stiff, true);
    CHECK(op.value(f) == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("empty region assembles to the zero operator") {
    // no interior cells at n = 2, so no soft elements anywhere
    const MacroMesh mesh = make_mesh(2, 4);
    const auto a = assemble_quadratic(mesh.elements(), mesh.node_count(),
                                      QuadForm::dist_squared(), ComponentTag::Soft);
    Rng rng(5);
    const VectorField f = random_field(mesh, rng);
    CHECK(a.value(f) == 0.0);
}

TEST_CASE("assembled operators are symmetric and PSD") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 1.0, {});
    const MacroMesh mesh(geom, 4);
    const CsrMatrix k =
        assemble_stiffness(mesh.elements(), mesh.node_count(), QuadForm::dist_squared());
    CHECK(k.symmetry_defect() <= 1e-12);
    Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorField f = random_field(mesh, rng);
        CHECK(k.quadratic(f.v) >= -1e-12);
    }
}

TEST_CASE("solve_spd basics") {
    // identity system returns b
    std::vector<std::tuple<int, int, double>> coo;
    for (int i = 0; i < 10; ++i) coo.emplace_back(i, i, 1.0);
    const CsrMatrix eye = CsrMatrix::from_coo(10, coo);
    std::vector<double> b(10);
    for (int i = 0; i < 10; ++i) b[i] = 0.5 * i - 2.0;
    const auto x = solve_spd(eye, b, {});
    for (int i = 0; i < 10; ++i) CHECK(x[i] == doctest::Approx(b[i]).epsilon(1e-12));

    // zero rhs returns zero without iterating
    const auto z = solve_spd(eye, std::vector<double>(10, 0.0), {});
    for (double v : z) CHECK(v == 0.0);
}

TEST_CASE("solve_spd agrees with a dense elimination oracle") {
    const MacroMesh mesh = make_mesh(2, 6); // 169 nodes -> n = 338
    const CsrMatrix k = assemble_stiffness(mesh.elements(), mesh.node_count(),
                                           QuadForm::isotropic(1.0, 1.0));
    const int n = k.n;
    std::vector<std::uint8_t> mask(n, 0);
    for (int id : mesh.gamma_nodes()) mask[2 * id] = mask[2 * id + 1] = 1;

    std::vector<double> b(n, 0.0);
    for (int i = 0; i < n; ++i)
        if (!mask[i]) b[i] = 1e-3 * ((i * 2654435761u) % 100 - 50);

    const auto x = solve_spd(k, b, mask, PcgOptions{1e-12, 20000});

    // dense copy with eliminated rows and columns
    std::vector<double> dense(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        if (mask[i]) {
            dense[static_cast<std::size_t>(i) * n + i] = 1.0;
            continue;
        }
        for (int p = k.rowptr[i]; p < k.rowptr[i + 1]; ++p)
            if (!mask[k.col[p]]) dense[static_cast<std::size_t>(i) * n + k.col[p]] = k.val[p];
    }
    const auto ref = dense_solve_oracle(dense, b);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < n; ++i) {
        worst = std::max(worst, std::abs(x[i] - ref[i]));
        scale = std::max(scale, std::abs(ref[i]));
    }
    CHECK(worst <= 1e-9 * std::max(1.0, scale));
}

TEST_CASE("Galerkin orthogonality of the solved system") {
    const MacroMesh mesh = make_mesh(4, 4);
    const CsrMatrix k = assemble_stiffness(mesh.elements(), mesh.node_count(),
                                           QuadForm::isotropic(1.0, 1.0));
    std::vector<std::uint8_t> mask(k.n, 0);
    for (int id : mesh.gamma_nodes()) mask[2 * id] = mask[2 * id + 1] = 1;
    std::vector<double> b(k.n, 0.0);
    for (int i = 0; i < k.n; ++i)
        if (!mask[i]) b[i] = std::sin(0.1 * i);
    const auto x = solve_spd(k, b, mask, PcgOptions{1e-11, 20000});

    std::vector<double> res = k.multiply(x);
    for (int i = 0; i < k.n; ++i) res[i] = mask[i] ? 0.0 : res[i] - b[i];
    double bn = 0.0;
    for (double v : b) bn += v * v;
    bn = std::sqrt(bn);
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> c(k.n, 0.0);
        double cn = 0.0;
        for (int i = 0; i < k.n; ++i) {
            if (!mask[i]) c[i] = uniform(rng, -1.0, 1.0);
            cn += c[i] * c[i];
        }
        cn = std::sqrt(cn);
        double dot = 0.0;
        for (int i = 0; i < k.n; ++i) dot += c[i] * res[i];
        CHECK(std::abs(dot) <= 1e-10 * bn * cn);
    }
}

TEST_CASE("patch test: energies of linear fields are exact") {
    const MacroMesh mesh = make_mesh(4, 6);
    const QuadForm iso = QuadForm::isotropic(2.0, 1.0);
    const Mat2 g(0.3, -0.1, 0.2, 0.4);
    const VectorField lin = interpolate(mesh, [&](Vec2 x) { return apply(g, x); });
    const auto op = assemble_quadratic(mesh.elements(), mesh.node_count(), iso);
    CHECK(op.value(lin) == doctest::Approx(iso(g)).epsilon(1e-12));
}

TEST_CASE("energy of interpolated smooth fields converges at O(h^2)") {
    auto energy_at = [](int m) {
        const CompositeGeometry geom = CompositeGeometry::unit_square(2, 1.0, {});
        const MacroMesh mesh(geom, m);
        const VectorField f = interpolate(mesh, [](Vec2 x) {
            return Vec2(std::sin(M_PI * x.x) * std::sin(M_PI * x.y), 0.0);
        });
        const auto op = assemble_quadratic(mesh.elements(), mesh.node_count(),
                                           QuadForm::from_function([](const Mat2& g) {
                                               return ddot(g, g);
                                           }));
        return op.value(f);
    };
    const double exact = M_PI * M_PI / 2.0; // integral of |grad|^2 of the sine bump
    const double e1 = std::abs(energy_at(4) - exact);
    const double e2 = std::abs(energy_at(8) - exact);
    const double e3 = std::abs(energy_at(16) - exact);
    const double slope1 = std::log2(e1 / e2);
    const double slope2 = std::log2(e2 / e3);
    CHECK(slope1 >= 1.9);
    CHECK(slope2 >= 1.9);
}

TEST_CASE("non-convergence carries the final residual") {
    std::vector<std::tuple<int, int, double>> coo;
    for (int i = 0; i < 50; ++i) {
        coo.emplace_back(i, i, 2.0);
        if (i + 1 < 50) {
            coo.emplace_back(i, i + 1, -1.0);
            coo.emplace_back(i + 1, i, -1.0);
        }
    }
    const CsrMatrix lap = CsrMatrix::from_coo(50, coo);
    std::vector<double> b(50, 1.0);
    CHECK_THROWS_AS(solve_spd(lap, b, {}, PcgOptions{1e-14, 2}), SolverError);
}
