#include "hicon/mesh.hpp"

#include <algorithm>
#include <cmath>

#include "hicon/parallel.hpp"

namespace hicon {

namespace {

// Shape gradients of the P1 triangle with vertices p0, p1, p2.
void shape_gradients(const Vec2& p0, const Vec2& p1, const Vec2& p2, Vec2 g[3], double& area) {
    const Vec2 e1 = p1 - p0, e2 = p2 - p0;
    const double d = e1.x * e2.y - e1.y * e2.x;
    area = 0.5 * std::abs(d);
    // rows of the inverse edge matrix
    g[1] = Vec2(e2.y / d, -e2.x / d);
    g[2] = Vec2(-e1.y / d, e1.x / d);
    g[0] = Vec2(-g[1].x - g[2].x, -g[1].y - g[2].y);
}

// Union-jack split: even quads use the main diagonal, odd quads the other one.
// corner order: a=(i,j), b=(i+1,j), c=(i+1,j+1), d=(i,j+1)
void split_quad(bool even, int tri, int idx[3]) {
    static const int kEven[2][3] = {{0, 1, 2}, {0, 2, 3}};
    static const int kOdd[2][3] = {{0, 1, 3}, {1, 2, 3}};
    const int* s = even ? kEven[tri] : kOdd[tri];
    idx[0] = s[0];
    idx[1] = s[1];
    idx[2] = s[2];
}

} // namespace

MacroMesh::MacroMesh(const CompositeGeometry& geom, int elements_per_cell_side)
    : geom_(&geom), m_(elements_per_cell_side) {
    require(m_ >= 4, "mesh: need at least 4 elements per cell side");
    h_ = geom.epsilon() / m_;
    nx_ = geom.cells_x() * m_;
    ny_ = geom.cells_y() * m_;

    interior_cells_ = geom.interior_cells();
    std::vector<std::vector<int>> cell_index(geom.cells_x(),
                                             std::vector<int>(geom.cells_y(), -1));
    for (std::size_t k = 0; k < interior_cells_.size(); ++k)
        cell_index[interior_cells_[k].i][interior_cells_[k].j] = static_cast<int>(k);

    elements_.reserve(2 * static_cast<std::size_t>(nx_) * ny_);
    for (int j = 0; j < ny_; ++j)
        for (int i = 0; i < nx_; ++i) {
            const int corner[4] = {node_id(i, j), node_id(i + 1, j), node_id(i + 1, j + 1),
                                   node_id(i, j + 1)};
            const Vec2 p[4] = {Vec2(i * h_, j * h_), Vec2((i + 1) * h_, j * h_),
                               Vec2((i + 1) * h_, (j + 1) * h_), Vec2(i * h_, (j + 1) * h_)};
            for (int t = 0; t < 2; ++t) {
                int idx[3];
                split_quad((i + j) % 2 == 0, t, idx);
                Element e;
                for (int a = 0; a < 3; ++a) e.n[a] = corner[idx[a]];
                shape_gradients(p[idx[0]], p[idx[1]], p[idx[2]], e.grad, e.area);
                e.bary = (1.0 / 3.0) * (p[idx[0]] + p[idx[1]] + p[idx[2]]);
                e.tag = geom.classify(e.bary);
                if (e.tag == ComponentTag::Soft) {
                    const CellIndex c = geom.cell_of(e.bary);
                    e.cell = cell_index[c.i][c.j];
                }
                elements_.push_back(e);
            }
        }

    // node classification
    node_info_.assign(node_count(), NodeInfo{});
    std::vector<int> soft_hits(node_count(), 0), stiff_hits(node_count(), 0),
        soft_cell(node_count(), -1);
    for (const Element& e : elements_)
        for (int a = 0; a < 3; ++a) {
            if (e.tag == ComponentTag::Soft) {
                ++soft_hits[e.n[a]];
                soft_cell[e.n[a]] = e.cell;
            } else {
                ++stiff_hits[e.n[a]];
            }
        }
    for (int id = 0; id < node_count(); ++id) {
        NodeInfo& info = node_info_[id];
        if (soft_hits[id] > 0 && stiff_hits[id] == 0) {
            info.incl = InclusionNodeState::Interior;
            info.incl_cell = soft_cell[id];
        } else if (soft_hits[id] > 0) {
            info.incl = InclusionNodeState::Boundary;
            info.incl_cell = soft_cell[id];
        }
        if (geom.on_gamma(node_coord(id), 1e-12)) {
            info.on_gamma = true;
            gamma_nodes_.push_back(id);
        }
    }

    cell_soft_elements_.assign(interior_cells_.size(), {});
    for (std::size_t k = 0; k < elements_.size(); ++k)
        if (elements_[k].cell >= 0) cell_soft_elements_[elements_[k].cell].push_back(static_cast<int>(k));
}

int MacroMesh::locate(const Vec2& x, double bary[3]) const {
    int i = static_cast<int>(std::floor(x.x / h_));
    int j = static_cast<int>(std::floor(x.y / h_));
    i = std::clamp(i, 0, nx_ - 1);
    j = std::clamp(j, 0, ny_ - 1);
    const double s = x.x / h_ - i, t = x.y / h_ - j;
    const bool even = (i + j) % 2 == 0;
    const int tri = even ? (s >= t ? 0 : 1) : (s + t <= 1.0 ? 0 : 1);
    const int elem = 2 * (j * nx_ + i) + tri;
    const Element& e = elements_[elem];
    const Vec2 p0 = node_coord(e.n[0]);
    // barycentric coordinates from the precomputed shape gradients
    bary[1] = dot(e.grad[1], x - p0);
    bary[2] = dot(e.grad[2], x - p0);
    bary[0] = 1.0 - bary[1] - bary[2];
    return elem;
}

Vec2 MacroMesh::eval(const VectorField& f, const Vec2& x) const {
    double b[3];
    const Element& e = elements_[locate(x, b)];
    Vec2 out;
    for (int a = 0; a < 3; ++a) out += b[a] * f.get(e.n[a]);
    return out;
}

Mat2 MacroMesh::eval_gradient(const VectorField& f, const Vec2& x) const {
    double b[3];
    const Element& e = elements_[locate(x, b)];
    Mat2 g;
    for (int a = 0; a < 3; ++a) g += Mat2::outer(f.get(e.n[a]), e.grad[a]);
    return g;
}

bool MacroMesh::field_zero_on_gamma(const VectorField& f, double tol) const {
    for (int id : gamma_nodes_) {
        const Vec2 u = f.get(id);
        if (std::abs(u.x) > tol || std::abs(u.y) > tol) return false;
    }
    return true;
}

CellMesh::CellMesh(int resolution, std::optional<InclusionShape> inclusion)
    : r_(resolution), inclusion_(inclusion) {
    require(r_ >= 2 && r_ % 2 == 0, "cell mesh: resolution must be even and >= 2");
    const double h = 1.0 / r_;
    elements_.reserve(2 * static_cast<std::size_t>(r_) * r_);
    for (int j = 0; j < r_; ++j)
        for (int i = 0; i < r_; ++i) {
            const int corner[4] = {node_id(i, j), node_id(i + 1, j), node_id(i + 1, j + 1),
                                   node_id(i, j + 1)};
            const Vec2 p[4] = {Vec2(i * h, j * h), Vec2((i + 1) * h, j * h),
                               Vec2((i + 1) * h, (j + 1) * h), Vec2(i * h, (j + 1) * h)};
            for (int t = 0; t < 2; ++t) {
                int idx[3];
                split_quad((i + j) % 2 == 0, t, idx);
                Element e;
                for (int a = 0; a < 3; ++a) e.n[a] = corner[idx[a]];
                shape_gradients(p[idx[0]], p[idx[1]], p[idx[2]], e.grad, e.area);
                e.bary = (1.0 / 3.0) * (p[idx[0]] + p[idx[1]] + p[idx[2]]);
                e.tag = (inclusion_ && inclusion_->contains(e.bary)) ? ComponentTag::Soft
                                                                     : ComponentTag::Stiff;
                if (e.tag == ComponentTag::Soft) {
                    e.cell = 0;
                    soft_area_ += e.area;
                }
                elements_.push_back(e);
            }
        }

    std::vector<int> soft_hits(node_count(), 0), stiff_hits(node_count(), 0);
    for (const Element& e : elements_)
        for (int a = 0; a < 3; ++a)
            (e.tag == ComponentTag::Soft ? soft_hits : stiff_hits)[e.n[a]]++;
    for (int id = 0; id < node_count(); ++id) {
        if (soft_hits[id] > 0 && stiff_hits[id] == 0) hole_interior_nodes_.push_back(id);
        if (soft_hits[id] > 0 && stiff_hits[id] > 0) hole_boundary_nodes_.push_back(id);
        if (stiff_hits[id] > 0) stiff_nodes_.push_back(id);
    }
}

Vec2 CellMesh::eval(const CellField& f, const Vec2& y) const {
    const double h = 1.0 / r_;
    double sx = y.x - std::floor(y.x), sy = y.y - std::floor(y.y);
    if (sx >= 1.0) sx = 0.0;
    if (sy >= 1.0) sy = 0.0;
    int i = static_cast<int>(std::floor(sx / h));
    int j = static_cast<int>(std::floor(sy / h));
    i = std::clamp(i, 0, r_ - 1);
    j = std::clamp(j, 0, r_ - 1);
    const double s = sx / h - i, t = sy / h - j;
    const bool even = (i + j) % 2 == 0;
    const int tri = even ? (s >= t ? 0 : 1) : (s + t <= 1.0 ? 0 : 1);
    const Element& e = elements_[2 * (j * r_ + i) + tri];
    // Node ids are periodic, so the first vertex position is reconstructed from
    // the quad indices: it is the quad origin except for the odd/second split.
    const bool shifted = !even && tri == 1;
    const Vec2 q0((i + (shifted ? 1 : 0)) * h, j * h);
    const double b1 = dot(e.grad[1], Vec2(sx, sy) - q0);
    const double b2 = dot(e.grad[2], Vec2(sx, sy) - q0);
    const double bb[3] = {1.0 - b1 - b2, b1, b2};
    Vec2 out;
    for (int a = 0; a < 3; ++a) out += bb[a] * f.get(e.n[a]);
    return out;
}

std::vector<Mat2> gradient_at_quadrature(const std::vector<Element>& elements,
                                         const VectorField& f) {
    std::vector<Mat2> out(elements.size());
    par::for_each(elements.size(), [&](std::size_t k) {
        const Element& e = elements[k];
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(f.get(e.n[a]), e.grad[a]);
        out[k] = g;
    });
    return out;
}

double l2_norm_sq(const std::vector<Element>& elements, const VectorField& f) {
    return l2_inner(elements, f, f);
}

double l2_inner(const std::vector<Element>& elements, const VectorField& f,
                const VectorField& g) {
    return par::reduce_sum(elements.size(), [&](std::size_t k) {
        const Element& e = elements[k];
        Vec2 sf, sg;
        double diag = 0.0;
        for (int a = 0; a < 3; ++a) {
            const Vec2 ua = f.get(e.n[a]), va = g.get(e.n[a]);
            sf += ua;
            sg += va;
            diag += dot(ua, va);
        }
        return e.area / 12.0 * (dot(sf, sg) + diag);
    });
}

double grad_l2_norm_sq(const std::vector<Element>& elements, const VectorField& f,
                       ComponentTag region) {
    return par::reduce_sum(elements.size(), [&](std::size_t k) {
        const Element& e = elements[k];
        if (e.tag != region) return 0.0;
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(f.get(e.n[a]), e.grad[a]);
        return e.area * ddot(g, g);
    });
}

double grad_l2_norm_sq(const std::vector<Element>& elements, const VectorField& f) {
    return par::reduce_sum(elements.size(), [&](std::size_t k) {
        const Element& e = elements[k];
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(f.get(e.n[a]), e.grad[a]);
        return e.area * ddot(g, g);
    });
}

} // namespace hicon
