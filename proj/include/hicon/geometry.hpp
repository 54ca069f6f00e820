#ifndef HICON_GEOMETRY_HPP
#define HICON_GEOMETRY_HPP

#include <vector>

#include "hicon/common.hpp"

namespace hicon {

enum class ComponentTag { Soft, Stiff };
enum class BoundarySelector { LeftEdge, FullBoundary };
enum class InclusionKind { CenteredSquare, CenteredDisk };

struct InclusionShape {
    InclusionKind kind = InclusionKind::CenteredSquare;
    double half_width_or_radius = 0.25;

    // Area of the inclusion in the unit cell.
    double area() const;
    // Membership in cell coordinates y in [0,1)^2 (open set).
    bool contains(const Vec2& y) const;
};

struct CellIndex {
    int i = 0, j = 0;
    bool operator==(const CellIndex&) const = default;
    bool operator<(const CellIndex& o) const { return i < o.i || (i == o.i && j < o.j); }
};

// Reference geometry of the composite: rectangle Omega tiled by epsilon-cells,
// soft inclusions in every cell whose closure stays inside Omega, clamped part
// Gamma of the boundary, contrast exponent gamma.
class CompositeGeometry {
public:
    CompositeGeometry(double lx, double ly, int cells_per_unit, double gamma,
                      InclusionShape inclusion,
                      BoundarySelector gamma_boundary = BoundarySelector::FullBoundary);

    static CompositeGeometry unit_square(int cells_per_unit, double gamma,
                                         InclusionShape inclusion = {},
                                         BoundarySelector bs = BoundarySelector::FullBoundary) {
        return CompositeGeometry(1.0, 1.0, cells_per_unit, gamma, inclusion, bs);
    }

    double lx() const { return lx_; }
    double ly() const { return ly_; }
    double epsilon() const { return 1.0 / n_; }
    int inverse_epsilon() const { return n_; }
    double gamma() const { return gamma_; }
    BoundarySelector gamma_boundary() const { return gamma_boundary_; }
    const InclusionShape& inclusion() const { return inclusion_; }

    int cells_x() const { return ncx_; }
    int cells_y() const { return ncy_; }

    bool is_interior_cell(const CellIndex& c) const {
        return c.i >= 1 && c.i <= ncx_ - 2 && c.j >= 1 && c.j <= ncy_ - 2;
    }

    // Cells carrying inclusions (closure inside Omega), lexicographic order.
    std::vector<CellIndex> interior_cells() const;
    // All cells of the exact tiling of Omega, lexicographic order.
    std::vector<CellIndex> covering_cells() const;

    // Cell containing x; points on the top/right boundary map to the last cell.
    CellIndex cell_of(const Vec2& x) const;

    ComponentTag classify(const Vec2& x) const;

    bool on_gamma(const Vec2& x, double tol = 1e-12) const;

    // Exact area of the soft component Omega^0_eps.
    double soft_area() const { return static_cast<double>(interior_cell_count()) *
                                      epsilon() * epsilon() * inclusion_.area(); }
    long interior_cell_count() const {
        const long ix = ncx_ >= 2 ? ncx_ - 2 : 0;
        const long iy = ncy_ >= 2 ? ncy_ - 2 : 0;
        return ix * iy;
    }

private:
    double lx_, ly_;
    int n_;          // epsilon = 1/n
    int ncx_, ncy_;  // cells per side
    double gamma_;
    InclusionShape inclusion_;
    BoundarySelector gamma_boundary_;
};

} // namespace hicon

#endif
