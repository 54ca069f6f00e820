#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hicon/assemble.hpp"
#include "hicon/splitting.hpp"
#include "test_support.hpp"

using namespace hicon;
using namespace hicon::testing;

namespace {
const Laws kLaws{builtin_dist_squared_law(), builtin_dist_squared_law()};

double inclusion_dirichlet_energy(const MacroMesh& mesh, const VectorField& f, int cell) {
    double s = 0.0;
    for (int el : mesh.cell_soft_elements()[cell]) {
        const Element& e = mesh.elements()[el];
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(f.get(e.n[a]), e.grad[a]);
        s += e.area * ddot(g, g);
    }
    return s;
}
} // namespace

TEST_CASE("harmonic extension reproduces linear data and zero data") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 8);

    const Mat2 a(0.4, -0.3, 0.1, 0.2);
    const Vec2 b(0.7, -0.2);
    const VectorField lin = interpolate(mesh, [&](Vec2 x) { return apply(a, x) + b; });
    const VectorField ext = harmonic_extension(mesh, lin);
    for (std::size_t i = 0; i < lin.v.size(); ++i)
        CHECK(ext.v[i] == doctest::Approx(lin.v[i]).epsilon(1e-12));

    const VectorField zero(mesh.node_count());
    const VectorField zext = harmonic_extension(mesh, zero);
    for (double v : zext.v) CHECK(v == 0.0);
}

TEST_CASE("harmonic extension satisfies the Dirichlet principle per inclusion") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 8);
    Rng rng(19);
    const VectorField data = interpolate(mesh, [&](Vec2 x) {
        return Vec2(std::sin(3.0 * x.x) + 0.2 * x.y, std::cos(2.0 * x.y) * x.x);
    });
    const VectorField ext = harmonic_extension(mesh, data);

    for (std::size_t cell = 0; cell < mesh.interior_cells().size(); ++cell) {
        const double optimal = inclusion_dirichlet_energy(mesh, ext, static_cast<int>(cell));
        for (int trial = 0; trial < 20; ++trial) {
            VectorField competitor = ext;
            for (int id = 0; id < mesh.node_count(); ++id)
                if (mesh.node_info()[id].incl == InclusionNodeState::Interior &&
                    mesh.node_info()[id].incl_cell == static_cast<int>(cell))
                    competitor.add(id, Vec2(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)));
            CHECK(optimal <=
                  inclusion_dirichlet_energy(mesh, competitor, static_cast<int>(cell)) + 1e-12);
        }
    }
}

TEST_CASE("extension norms are controlled by the stiff side") {
    // discrete versions of the extension bounds: measured constants reported
    const CompositeGeometry geom = CompositeGeometry::unit_square(8, 0.5, {});
    const MacroMesh mesh(geom, 4);
    Rng rng(23);
    const VectorField g = random_field(mesh, rng);
    const VectorField ext = harmonic_extension(mesh, g);
    const auto& el = mesh.elements();

    const double l2_full = std::sqrt(l2_norm_sq(el, ext));
    const double grad_full = std::sqrt(grad_l2_norm_sq(el, ext));

    double l2_stiff = 0.0, grad_stiff = 0.0, sym_stiff = 0.0, sym_full = 0.0;
    const auto grads = gradient_at_quadrature(el, ext);
    for (std::size_t k = 0; k < el.size(); ++k) {
        const Mat2 s = sym(grads[k]);
        sym_full += el[k].area * ddot(s, s);
        if (el[k].tag == ComponentTag::Stiff) {
            grad_stiff += el[k].area * ddot(grads[k], grads[k]);
            sym_stiff += el[k].area * ddot(s, s);
        }
    }
    {
        VectorField masked = ext;
        for (int id = 0; id < mesh.node_count(); ++id)
            if (mesh.node_info()[id].incl == InclusionNodeState::Interior)
                masked.set(id, Vec2());
        l2_stiff = std::sqrt(l2_norm_sq(el, masked)); // lower bound proxy on the stiff norm
    }
    CHECK(l2_full <= 4.0 * l2_stiff);
    CHECK(grad_full <= 4.0 * std::sqrt(grad_stiff));
    CHECK(std::sqrt(sym_full) <= 4.0 * std::sqrt(sym_stiff));
}

TEST_CASE("split: supported-in-inclusions fields go entirely to g0") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 8);
    VectorField phi(mesh.node_count());
    for (int id = 0; id < mesh.node_count(); ++id)
        if (mesh.node_info()[id].incl == InclusionNodeState::Interior)
            phi.set(id, Vec2(0.3, -0.1));
    const Splitting s = split(mesh, phi);
    for (double v : s.g1.v) CHECK(std::abs(v) < 1e-13);
    const double eps = geom.epsilon();
    for (std::size_t i = 0; i < phi.v.size(); ++i)
        CHECK(s.g0.v[i] == doctest::Approx(phi.v[i] / eps).epsilon(1e-12));
}

TEST_CASE("split: discretely harmonic data goes entirely to g1") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 8);
    // psi linear inside each inclusion (hence discretely harmonic), arbitrary
    // smooth elsewhere, zero on Gamma
    const VectorField psi = interpolate(mesh, [&](Vec2 x) {
        const double cut = x.x * (1.0 - x.x) * x.y * (1.0 - x.y) * 16.0;
        return Vec2(cut * (0.5 + 0.25 * x.x), -cut * 0.3);
    });
    VectorField harm = harmonic_extension(mesh, psi);
    const double eg = std::pow(geom.epsilon(), geom.gamma());
    VectorField phi(mesh.node_count());
    for (std::size_t i = 0; i < phi.v.size(); ++i) phi.v[i] = eg * harm.v[i];
    const Splitting s = split(mesh, phi);
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.v.size(); ++i) {
        worst = std::max(worst, std::abs(s.g0.v[i]));
        CHECK(s.g1.v[i] == doctest::Approx(harm.v[i]).epsilon(1e-10));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("split: reconstruction, linearity, idempotence") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(8, 0.5, {});
    const MacroMesh mesh(geom, 4);
    Rng rng(31);
    const VectorField phi = random_field(mesh, rng, 1.0, true);
    const VectorField psi = random_field(mesh, rng, 1.0, true);
    const Splitting sp = split(mesh, phi);
    const Splitting sq = split(mesh, psi);

    const double eps = geom.epsilon();
    const double eg = std::pow(eps, geom.gamma());
    double worst = 0.0;
    for (std::size_t i = 0; i < phi.v.size(); ++i)
        worst = std::max(worst, std::abs(eps * sp.g0.v[i] + eg * sp.g1.v[i] - phi.v[i]));
    CHECK(worst <= 1e-12);

    // linearity: split(2 phi - 0.5 psi) = 2 split(phi) - 0.5 split(psi)
    VectorField combo(mesh.node_count());
    for (std::size_t i = 0; i < phi.v.size(); ++i)
        combo.v[i] = 2.0 * phi.v[i] - 0.5 * psi.v[i];
    const Splitting sc = split(mesh, combo);
    double lin_worst = 0.0;
    for (std::size_t i = 0; i < phi.v.size(); ++i) {
        lin_worst = std::max(lin_worst, std::abs(sc.g0.v[i] - (2.0 * sp.g0.v[i] - 0.5 * sq.g0.v[i])));
        lin_worst = std::max(lin_worst, std::abs(sc.g1.v[i] - (2.0 * sp.g1.v[i] - 0.5 * sq.g1.v[i])));
    }
    CHECK(lin_worst <= 1e-10);

    // idempotence through the reconstruction
    VectorField rebuilt(mesh.node_count());
    for (std::size_t i = 0; i < phi.v.size(); ++i)
        rebuilt.v[i] = eps * sp.g0.v[i] + eg * sp.g1.v[i];
    const Splitting s2 = split(mesh, rebuilt);
    double idem = 0.0;
    for (std::size_t i = 0; i < phi.v.size(); ++i)
        idem = std::max({idem, std::abs(s2.g0.v[i] - sp.g0.v[i]),
                         std::abs(s2.g1.v[i] - sp.g1.v[i])});
    CHECK(idem <= 1e-10);
}

TEST_CASE("split: discrete harmonicity of g1 inside inclusions") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 8);
    Rng rng(37);
    const VectorField phi = random_field(mesh, rng, 1.0, true);
    const Splitting s = split(mesh, phi);

    const CsrMatrix lap =
        assemble_scalar_laplacian(mesh.elements(), mesh.node_count(), ComponentTag::Soft);
    for (int comp = 0; comp < 2; ++comp) {
        std::vector<double> g(mesh.node_count());
        for (int id = 0; id < mesh.node_count(); ++id) g[id] = s.g1.v[2 * id + comp];
        const std::vector<double> res = lap.multiply(g);
        for (int id = 0; id < mesh.node_count(); ++id)
            if (mesh.node_info()[id].incl == InclusionNodeState::Interior)
                CHECK(std::abs(res[id]) <= 1e-10);
    }
}

TEST_CASE("split requires the clamp") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 4);
    const VectorField bad = interpolate(mesh, [](Vec2 x) { return Vec2(1.0 + x.x, 0.0); });
    CHECK_THROWS(split(mesh, bad));
}

TEST_CASE("apriori ratio is defined and positive on nonzero fields") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 4);
    Rng rng(41);
    const VectorField phi = random_field(mesh, rng, 0.01, true);
    CHECK(apriori_ratio(mesh, kLaws, phi) > 0.0);
    CHECK_THROWS(apriori_ratio(mesh, kLaws, VectorField(mesh.node_count())));
}

TEST_CASE("apriori ratio of an eps-scaled inclusion bump is eps-stable") {
    // one smooth bump profile replicated in every inclusion, amplitude eps
    std::vector<double> ratios;
    for (int n : {4, 8, 16}) {
        const CompositeGeometry geom = CompositeGeometry::unit_square(n, 0.5, {});
        const MacroMesh mesh(geom, 8);
        const double eps = geom.epsilon();
        VectorField phi(mesh.node_count());
        for (int id = 0; id < mesh.node_count(); ++id) {
            const NodeInfo& info = mesh.node_info()[id];
            if (info.incl != InclusionNodeState::Interior) continue;
            const Vec2 x = mesh.node_coord(id);
            const CellIndex c = geom.cell_of(x);
            const Vec2 y(x.x / eps - c.i, x.y / eps - c.j);
            const double b = std::sin(M_PI * (y.x - 0.25) / 0.5) *
                             std::sin(M_PI * (y.y - 0.25) / 0.5);
            phi.set(id, Vec2(eps * b, 0.0));
        }
        ratios.push_back(apriori_ratio(mesh, kLaws, phi));
    }
    CHECK(std::abs(ratios[1] - ratios[0]) <= 0.05 * ratios[0]);
    CHECK(std::abs(ratios[2] - ratios[1]) <= 0.05 * ratios[1]);
}

TEST_CASE("high-contrast Poincare ratio") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 8);
    // smooth clamped field: the ratio is below the plain Poincare constant
    VectorField u = interpolate(mesh, [](Vec2 x) {
        return Vec2(std::sin(M_PI * x.x) * std::sin(M_PI * x.y), 0.0);
    });
    for (int id : mesh.gamma_nodes()) u.set(id, Vec2());
    const double ratio = high_contrast_poincare_ratio(mesh, u);
    CHECK(ratio > 0.0);
    CHECK(ratio <= 1.0 / (M_PI * std::sqrt(2.0)) + 0.05);

    CHECK_THROWS(high_contrast_poincare_ratio(mesh, VectorField(mesh.node_count())));
}

TEST_CASE("rigidity report") {
    const CompositeGeometry geom = CompositeGeometry::unit_square(4, 0.5, {});
    const MacroMesh mesh(geom, 4);

    // exactly rigid deformation
    const Mat2 r = Mat2::rotation(0.7);
    const VectorField rigid = interpolate(mesh, [&](Vec2 x) { return apply(r, x); });
    const RigidityReport rep = rigidity_report(mesh, rigid, RigidityRegion::All, RigidityBc::Free);
    CHECK(rep.exact_rigidity);
    CHECK(rep.best_rotation(0, 0) == doctest::Approx(r(0, 0)).epsilon(1e-12));
    CHECK(rep.best_rotation(1, 0) == doctest::Approx(r(1, 0)).epsilon(1e-12));

    // perturbed identity: ratios finite and >= 1
    Rng rng(43);
    VectorField v = interpolate(mesh, [](Vec2 x) { return x; });
    for (int id = 0; id < mesh.node_count(); ++id)
        v.add(id, Vec2(1e-2 * uniform(rng, -1.0, 1.0), 1e-2 * uniform(rng, -1.0, 1.0)));
    const RigidityReport rep2 =
        rigidity_report(mesh, v, RigidityRegion::Stiff, RigidityBc::IdentityOnGamma);
    CHECK(!rep2.exact_rigidity);
    CHECK(rep2.ratio_full >= 1.0 - 1e-12);
    CHECK(rep2.ratio_bc >= rep2.ratio_full - 1e-12);
}

TEST_CASE("rigidity ratios stay bounded across the sweep") {
    // fixed smooth perturbation of the identity, stiff region
    std::vector<double> ratios;
    for (int n : {4, 8, 16}) {
        const CompositeGeometry geom = CompositeGeometry::unit_square(n, 0.5, {});
        const MacroMesh mesh(geom, 4);
        const VectorField v = interpolate(mesh, [](Vec2 x) {
            return x + Vec2(1e-2 * std::sin(M_PI * x.x) * std::sin(M_PI * x.y),
                            1e-2 * x.x * x.x * (1.0 - x.x) * x.y);
        });
        const RigidityReport rep =
            rigidity_report(mesh, v, RigidityRegion::Stiff, RigidityBc::IdentityOnGamma);
        ratios.push_back(rep.ratio_full);
    }
    const double lo = std::min({ratios[0], ratios[1], ratios[2]});
    const double hi = std::max({ratios[0], ratios[1], ratios[2]});
    CHECK(hi <= 2.0 * lo);
}

TEST_CASE("extended fields keep the distance to rotations controlled") {
    // inclusion-supported bump on top of the identity; after harmonic
    // extension of the stiff trace, the full-domain defect is bounded by the
    // stiff-side defect with an eps-stable constant
    std::vector<double> constants;
    for (int n : {4, 8, 16}) {
        const CompositeGeometry geom = CompositeGeometry::unit_square(n, 0.5, {});
        const MacroMesh mesh(geom, 4);
        const double eps = geom.epsilon();
        VectorField v = interpolate(mesh, [](Vec2 x) {
            return x + Vec2(5e-3 * std::sin(M_PI * x.x), 5e-3 * x.y * (1.0 - x.y));
        });
        // contaminate the inclusions, then rebuild them harmonically
        Rng rng(47);
        for (int id = 0; id < mesh.node_count(); ++id)
            if (mesh.node_info()[id].incl == InclusionNodeState::Interior)
                v.add(id, Vec2(0.2 * eps * uniform(rng, -1, 1), 0.2 * eps * uniform(rng, -1, 1)));
        const VectorField ext = harmonic_extension(mesh, v);

        const auto grads = gradient_at_quadrature(mesh.elements(), ext);
        double full = 0.0, stiff = 0.0;
        for (std::size_t k = 0; k < mesh.elements().size(); ++k) {
            const double d = dist_to_rotations(grads[k]).distance;
            full += mesh.elements()[k].area * d * d;
            if (mesh.elements()[k].tag == ComponentTag::Stiff)
                stiff += mesh.elements()[k].area * d * d;
        }
        constants.push_back(std::sqrt(full / stiff));
    }
    const double hi = std::max({constants[0], constants[1], constants[2]});
    const double lo = std::min({constants[0], constants[1], constants[2]});
    CHECK(hi <= 2.0 * lo);
}
