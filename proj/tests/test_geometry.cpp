#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hicon/geometry.hpp"
#include "hicon/rng.hpp"

using namespace hicon;

namespace {
CompositeGeometry square_geom(int n, double a = 0.25) {
    return CompositeGeometry::unit_square(n, 1.0, {InclusionKind::CenteredSquare, a});
}
} // namespace

TEST_CASE("interior cells exclude the boundary ring") {
    CHECK(square_geom(4).interior_cells().size() == 4);
    CHECK(square_geom(2).interior_cells().size() == 0);
    CHECK(square_geom(8).interior_cells().size() == 36);

    const auto cells = square_geom(4).interior_cells();
    REQUIRE(cells.size() == 4);
    CHECK(cells[0] == CellIndex{1, 1});
    CHECK(cells[1] == CellIndex{1, 2});
    CHECK(cells[2] == CellIndex{2, 1});
    CHECK(cells[3] == CellIndex{2, 2});
}

TEST_CASE("point classification") {
    const CompositeGeometry g = square_geom(4);
    // center of the interior cell (1,1) sits inside the inclusion
    CHECK(g.classify({0.375, 0.375}) == ComponentTag::Soft);
    // boundary ring cells carry no inclusions
    CHECK(g.classify({0.01, 0.01}) == ComponentTag::Stiff);
    // points on cell faces are stiff (the inclusion is compactly contained)
    CHECK(g.classify({0.125, 0.5}) == ComponentTag::Stiff);
    // a cell-corner point: half-open cells put it in the next cell, off the hole
    CHECK(g.classify({0.5, 0.5}) == ComponentTag::Stiff);
    CHECK_THROWS_AS(g.classify({1.5, 0.5}), std::domain_error);
}

TEST_CASE("classification is eps-periodic across interior cells") {
    const CompositeGeometry g = square_geom(8);
    Rng rng(42);
    const double eps = g.epsilon();
    int tested = 0;
    while (tested < 200) {
        const Vec2 x(uniform(rng, eps, 1.0 - 2.0 * eps), uniform(rng, eps, 1.0 - 2.0 * eps));
        const Vec2 xs(x.x + eps, x.y);
        if (!g.is_interior_cell(g.cell_of(x)) || !g.is_interior_cell(g.cell_of(xs))) continue;
        CHECK(g.classify(x) == g.classify(xs));
        ++tested;
    }
}

TEST_CASE("soft volume is exact and converges to |Omega||Y0|") {
    for (InclusionKind kind : {InclusionKind::CenteredSquare, InclusionKind::CenteredDisk}) {
        const InclusionShape incl{kind, 0.25};
        for (int n : {4, 8, 16, 32}) {
            const CompositeGeometry g = CompositeGeometry::unit_square(n, 1.0, incl);
            const double count = static_cast<double>(g.interior_cells().size());
            CHECK(g.soft_area() ==
                  doctest::Approx(count * g.epsilon() * g.epsilon() * incl.area()).epsilon(1e-14));
            const double limit = 1.0 * incl.area();
            CHECK(std::abs(g.soft_area() - limit) <= 4.0 * g.epsilon() * incl.area() + 1e-14);
        }
    }
}

TEST_CASE("geometry invariants are enforced") {
    CHECK_THROWS(CompositeGeometry::unit_square(4, 0.0, {}));
    CHECK_THROWS(CompositeGeometry::unit_square(
        4, 1.0, InclusionShape{InclusionKind::CenteredSquare, 0.5}));
    CHECK_THROWS(CompositeGeometry(1.25, 1.0, 2, 1.0, {})); // 1/2 does not divide 1.25
    CHECK_NOTHROW(CompositeGeometry(1.5, 1.0, 2, 1.0, {}));
}

TEST_CASE("left-edge clamp selector") {
    const CompositeGeometry g(1.0, 1.0, 4, 1.0, {}, BoundarySelector::LeftEdge);
    CHECK(g.on_gamma({0.0, 0.3}));
    CHECK(!g.on_gamma({1.0, 0.3}));
    CHECK(!g.on_gamma({0.5, 0.0}));
}
