#include "hicon/geometry.hpp"

#include <cmath>

namespace hicon {

double InclusionShape::area() const {
    const double a = half_width_or_radius;
    return kind == InclusionKind::CenteredSquare ? 4.0 * a * a : M_PI * a * a;
}

bool InclusionShape::contains(const Vec2& y) const {
    const double a = half_width_or_radius;
    if (kind == InclusionKind::CenteredSquare)
        return std::abs(y.x - 0.5) < a && std::abs(y.y - 0.5) < a;
    const double dx = y.x - 0.5, dy = y.y - 0.5;
    return dx * dx + dy * dy < a * a;
}

CompositeGeometry::CompositeGeometry(double lx, double ly, int cells_per_unit, double gamma,
                                     InclusionShape inclusion, BoundarySelector gamma_boundary)
    : lx_(lx), ly_(ly), n_(cells_per_unit), gamma_(gamma), inclusion_(inclusion),
      gamma_boundary_(gamma_boundary) {
    require(lx_ > 0 && ly_ > 0, "geometry: domain lengths must be positive");
    require(n_ >= 1, "geometry: epsilon must be 1/n with n >= 1");
    require(gamma_ > 0.0, "geometry: contrast exponent must be positive");
    require(inclusion_.half_width_or_radius > 0.0 && inclusion_.half_width_or_radius < 0.5,
            "geometry: inclusion must be compactly contained in the cell");
    const double cx = lx_ * n_, cy = ly_ * n_;
    ncx_ = static_cast<int>(std::lround(cx));
    ncy_ = static_cast<int>(std::lround(cy));
    require(std::abs(cx - ncx_) < 1e-9 && std::abs(cy - ncy_) < 1e-9,
            "geometry: epsilon must divide the side lengths exactly");
}

std::vector<CellIndex> CompositeGeometry::interior_cells() const {
    std::vector<CellIndex> out;
    for (int i = 1; i <= ncx_ - 2; ++i)
        for (int j = 1; j <= ncy_ - 2; ++j) out.push_back({i, j});
    return out;
}

std::vector<CellIndex> CompositeGeometry::covering_cells() const {
    std::vector<CellIndex> out;
    for (int i = 0; i < ncx_; ++i)
        for (int j = 0; j < ncy_; ++j) out.push_back({i, j});
    return out;
}

CellIndex CompositeGeometry::cell_of(const Vec2& x) const {
    const double e = epsilon();
    int i = static_cast<int>(std::floor(x.x / e));
    int j = static_cast<int>(std::floor(x.y / e));
    if (i >= ncx_) i = ncx_ - 1;
    if (j >= ncy_) j = ncy_ - 1;
    if (i < 0) i = 0;
    if (j < 0) j = 0;
    return {i, j};
}

ComponentTag CompositeGeometry::classify(const Vec2& x) const {
    if (x.x < -1e-12 || x.x > lx_ + 1e-12 || x.y < -1e-12 || x.y > ly_ + 1e-12)
        throw std::domain_error("classify: point outside the closure of Omega");
    const CellIndex c = cell_of(x);
    if (!is_interior_cell(c)) return ComponentTag::Stiff;
    const double e = epsilon();
    const Vec2 y(x.x / e - c.i, x.y / e - c.j);
    return inclusion_.contains(y) ? ComponentTag::Soft : ComponentTag::Stiff;
}

bool CompositeGeometry::on_gamma(const Vec2& x, double tol) const {
    if (gamma_boundary_ == BoundarySelector::LeftEdge) return std::abs(x.x) <= tol;
    return std::abs(x.x) <= tol || std::abs(x.x - lx_) <= tol || std::abs(x.y) <= tol ||
           std::abs(x.y - ly_) <= tol;
}

} // namespace hicon
