#ifndef HICON_MESH_HPP
#define HICON_MESH_HPP

#include <optional>
#include <vector>

#include "hicon/common.hpp"
#include "hicon/geometry.hpp"

namespace hicon {

// P1 triangle with precomputed shape-function gradients. Quads are split into
// two triangles with alternating diagonals, so the mesh is invariant under
// quarter-turn rotations of the cell (even resolutions).
struct Element {
    int n[3];
    Vec2 grad[3]; // gradients of the nodal shape functions
    double area;
    Vec2 bary;
    ComponentTag tag = ComponentTag::Stiff;
    int cell = -1; // index into interior_cells(), -1 for stiff elements
};

enum class InclusionNodeState : unsigned char { None, Boundary, Interior };

struct NodeInfo {
    bool on_gamma = false;
    InclusionNodeState incl = InclusionNodeState::None;
    int incl_cell = -1;
};

// Nodal vector field; values are 2 doubles per node.
struct VectorField {
    std::vector<double> v;

    VectorField() = default;
    explicit VectorField(std::size_t node_count) : v(2 * node_count, 0.0) {}

    std::size_t node_count() const { return v.size() / 2; }
    Vec2 get(std::size_t node) const { return Vec2(v[2 * node], v[2 * node + 1]); }
    void set(std::size_t node, const Vec2& u) {
        v[2 * node] = u.x;
        v[2 * node + 1] = u.y;
    }
    void add(std::size_t node, const Vec2& u) {
        v[2 * node] += u.x;
        v[2 * node + 1] += u.y;
    }
};

using CellField = VectorField;

// Structured mesh of Omega aligned with the epsilon-lattice; h = eps / m.
class MacroMesh {
public:
    MacroMesh(const CompositeGeometry& geom, int elements_per_cell_side);

    const CompositeGeometry& geom() const { return *geom_; }
    int per_cell() const { return m_; }
    double h() const { return h_; }
    int nodes_x() const { return nx_ + 1; }
    int nodes_y() const { return ny_ + 1; }
    int node_count() const { return (nx_ + 1) * (ny_ + 1); }
    int node_id(int i, int j) const { return j * (nx_ + 1) + i; }
    Vec2 node_coord(int id) const {
        return Vec2(h_ * (id % (nx_ + 1)), h_ * (id / (nx_ + 1)));
    }

    const std::vector<Element>& elements() const { return elements_; }
    const std::vector<NodeInfo>& node_info() const { return node_info_; }
    const std::vector<int>& gamma_nodes() const { return gamma_nodes_; }

    // Soft elements grouped by interior cell (index into interior_cells()).
    const std::vector<std::vector<int>>& cell_soft_elements() const { return cell_soft_elements_; }
    const std::vector<CellIndex>& interior_cells() const { return interior_cells_; }

    // P1 evaluation of a nodal field at an arbitrary point of Omega.
    Vec2 eval(const VectorField& f, const Vec2& x) const;
    Mat2 eval_gradient(const VectorField& f, const Vec2& x) const;

    bool field_zero_on_gamma(const VectorField& f, double tol = 0.0) const;

private:
    const CompositeGeometry* geom_;
    int m_;
    double h_;
    int nx_, ny_; // element grid
    std::vector<Element> elements_;
    std::vector<NodeInfo> node_info_;
    std::vector<int> gamma_nodes_;
    std::vector<CellIndex> interior_cells_;
    std::vector<std::vector<int>> cell_soft_elements_;

    int locate(const Vec2& x, double bary[3]) const;
};

// Periodic unit-cell mesh on Y = [0,1)^2; opposite faces identified.
class CellMesh {
public:
    CellMesh(int resolution, std::optional<InclusionShape> inclusion);

    int resolution() const { return r_; }
    double h() const { return 1.0 / r_; }
    int node_count() const { return r_ * r_; }
    int node_id(int i, int j) const { return ((j % r_ + r_) % r_) * r_ + ((i % r_ + r_) % r_); }
    Vec2 node_coord(int id) const {
        return Vec2(static_cast<double>(id % r_) / r_, static_cast<double>(id / r_) / r_);
    }

    const std::vector<Element>& elements() const { return elements_; }
    double soft_area() const { return soft_area_; }
    bool has_hole() const { return soft_area_ > 0.0; }

    // Zero-trace DOFs of the hole: nodes with all incident elements soft.
    const std::vector<int>& hole_interior_nodes() const { return hole_interior_nodes_; }
    // Discrete boundary of the hole: nodes seeing both components.
    const std::vector<int>& hole_boundary_nodes() const { return hole_boundary_nodes_; }
    // Nodes incident to at least one stiff element (carriers of cell-problem DOFs).
    const std::vector<int>& stiff_nodes() const { return stiff_nodes_; }

    // P1 evaluation with periodic wrap, y in [0,1]^2.
    Vec2 eval(const CellField& f, const Vec2& y) const;

private:
    int r_;
    std::optional<InclusionShape> inclusion_;
    std::vector<Element> elements_;
    std::vector<int> hole_interior_nodes_;
    std::vector<int> hole_boundary_nodes_;
    std::vector<int> stiff_nodes_;
    double soft_area_ = 0.0;
};

// Constant P1 gradient per element.
std::vector<Mat2> gradient_at_quadrature(const std::vector<Element>& elements,
                                         const VectorField& f);

// Exact integrals of P1 fields.
double l2_norm_sq(const std::vector<Element>& elements, const VectorField& f);
double l2_inner(const std::vector<Element>& elements, const VectorField& f,
                const VectorField& g);
double grad_l2_norm_sq(const std::vector<Element>& elements, const VectorField& f,
                       ComponentTag region);
double grad_l2_norm_sq(const std::vector<Element>& elements, const VectorField& f);

} // namespace hicon

#endif
